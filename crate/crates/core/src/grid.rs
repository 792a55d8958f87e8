//! Uniform grids and sampled functions on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `n` equally spaced abscissae from `min` to `max`, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Grid {
    min: f64,
    max: f64,
    n: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::invalid("grid", "endpoints must be finite"));
        }
        match n {
            0 => Err(Error::invalid("grid", "needs at least one point")),
            1 if min != max => Err(Error::invalid("grid", "a single point needs min == max")),
            1 => Ok(Grid { min, max, n }),
            _ if max <= min => Err(Error::invalid("grid", format!("max {max} must exceed min {min}"))),
            _ => Ok(Grid { min, max, n }),
        }
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn step(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.max - self.min) / (self.n - 1) as f64
        }
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.max
        } else {
            self.min + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.n)
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `min:max:n`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(Error::Parse(format!("grid `{s}` is not min:max:n")));
        };
        let min = a
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("grid min `{a}`: {e}")))?;
        let max = b
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("grid max `{b}`: {e}")))?;
        let n = n
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("grid size `{n}`: {e}")))?;
        Grid::new(min, max, n)
    }
}

impl TryFrom<String> for Grid {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Grid> for String {
    fn from(g: Grid) -> String {
        g.to_string()
    }
}

/// Values of a real function on a uniform grid, optionally with standard errors.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
    stderr: Option<Vec<f64>>,
    n_replicas: usize,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        Self::with_stderr(grid, values, None, 1)
    }

    pub fn with_stderr(grid: Grid, values: Vec<f64>, stderr: Option<Vec<f64>>, n_replicas: usize) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(
                "grid function",
                format!("{} values on a grid of {} points", values.len(), grid.len()),
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "grid function",
                format!("value {} at abscissa {} is not finite", values[i], grid.point(i)),
            ));
        }
        if let Some(se) = &stderr {
            if se.len() != values.len() || se.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
                return Err(Error::invalid("grid function", "malformed standard errors"));
            }
        }
        if n_replicas == 0 {
            return Err(Error::invalid("grid function", "n_replicas must be at least 1"));
        }
        Ok(GridFunction {
            grid,
            values,
            stderr,
            n_replicas,
        })
    }

    /// Tabulate `f` on `grid`.
    pub fn tabulate(grid: Grid, f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn abscissae(&self) -> Vec<f64> {
        self.grid.points()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn stderr(&self) -> Option<&[f64]> {
        self.stderr.as_deref()
    }

    pub fn n_replicas(&self) -> usize {
        self.n_replicas
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Piecewise-linear interpolation; `None` outside the grid.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let g = &self.grid;
        if x < g.min() || x > g.max() {
            return None;
        }
        if g.len() == 1 {
            return Some(self.values[0]);
        }
        let t = (x - g.min()) / g.step();
        let i = (t.floor() as usize).min(g.len() - 2);
        let frac = t - i as f64;
        Some(self.values[i] * (1.0 - frac) + self.values[i + 1] * frac)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_syntax() {
        let g: Grid = "0:3:4".parse().unwrap();
        assert_eq!(g.points(), vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(g.to_string(), "0:3:4");
        assert!("0:3".parse::<Grid>().is_err());
        assert!("3:0:4".parse::<Grid>().is_err());
        assert!("1:1:1".parse::<Grid>().is_ok());
        let fine: Grid = "0:5:501".parse().unwrap();
        assert_eq!(fine.point(500), 5.0);
        assert!((fine.point(200) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_finite_values() {
        let g = Grid::new(0.0, 1.0, 2).unwrap();
        assert!(GridFunction::new(g, vec![0.0, f64::NAN]).is_err());
        assert!(GridFunction::new(g, vec![0.0]).is_err());
    }

    #[test]
    fn interpolation() {
        let g = Grid::new(0.0, 2.0, 3).unwrap();
        let f = GridFunction::new(g, vec![0.0, 1.0, 4.0]).unwrap();
        assert_eq!(f.interpolate(0.5), Some(0.5));
        assert_eq!(f.interpolate(2.0), Some(4.0));
        assert_eq!(f.interpolate(2.1), None);
    }
}
