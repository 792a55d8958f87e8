use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{PointSet, Window};
use crate::grid::{Grid, GridFunction};

pub const DEFAULT_BINS: usize = 256;

/// Edge correction for the planar estimator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeCorrection {
    /// Each pair weighted by `1/|W ∩ (W + d)|`.
    #[default]
    Translation,
    /// Only reference points at least `r_max` from the boundary.
    Border,
}

fn check_bins(lo: f64, hi: f64, bins: usize) -> Result<f64> {
    if bins == 0 {
        return Err(Error::invalid("bins", "must be positive"));
    }
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::invalid("range", format!("need 0 <= lo < hi, got [{lo}, {hi}]")));
    }
    Ok((hi - lo) / bins as f64)
}

fn centres(lo: f64, width: f64, bins: usize) -> Result<Grid> {
    let first = lo + 0.5 * width;
    if bins == 1 {
        Grid::new(first, first, 1)
    } else {
        Grid::new(first, lo + (bins as f64 - 0.5) * width, bins)
    }
}

fn bin_of(d: f64, lo: f64, width: f64, bins: usize) -> Option<usize> {
    if d < lo {
        return None;
    }
    let b = ((d - lo) / width) as usize;
    (b < bins).then_some(b)
}

/// Pair correlation on `bins` bins over `[0, r_max]`.
pub fn pair_correlation_1d(p: &PointSet, r_max: f64, bins: usize) -> Result<GridFunction> {
    pair_correlation_1d_range(p, 0.0, r_max, bins)
}

/// Pair correlation on `[lo, hi]`: pairs weighted by `1/(L − d)` and
/// normalised by `ρ̂² Δr` with `ρ̂² = N(N−1)/L²`. Values are reported at
/// bin centres.
pub fn pair_correlation_1d_range(p: &PointSet, lo: f64, hi: f64, bins: usize) -> Result<GridFunction> {
    let xs = p.xs().ok_or(Error::DimensionMismatch {
        expected: 1,
        found: p.dimension(),
    })?;
    let width = check_bins(lo, hi, bins)?;
    let l = p.window().extent();
    if hi >= 0.5 * l {
        return Err(Error::invalid(
            "r_max",
            format!("must be below half the window length {}", 0.5 * l),
        ));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut acc = vec![0.0; bins];
    for i in 0..n {
        for j in i + 1..n {
            let d = sorted[j] - sorted[i];
            if d >= hi {
                break;
            }
            if let Some(b) = bin_of(d, lo, width, bins) {
                acc[b] += 1.0 / (l - d);
            }
        }
    }
    let rho2 = (n * (n - 1)) as f64 / (l * l);
    let values = acc.iter().map(|a| a / (rho2 * width)).collect();
    GridFunction::new(centres(lo, width, bins)?, values)
}

pub fn pair_correlation_radial_2d(p: &PointSet, r_max: f64, bins: usize) -> Result<GridFunction> {
    pair_correlation_radial_2d_with(p, 0.0, r_max, bins, EdgeCorrection::default())
}

fn distance_to_boundary(w: &Window, q: &[f64; 2]) -> f64 {
    match *w {
        Window::Disk { radius } => radius - q[0].hypot(q[1]),
        Window::Square { side } => 0.5 * side - q[0].abs().max(q[1].abs()),
        Window::Interval { .. } => unreachable!("planar point set"),
    }
}

/// Radial pair correlation on `[lo, hi]`, normalised per annulus area.
pub fn pair_correlation_radial_2d_with(
    p: &PointSet,
    lo: f64,
    hi: f64,
    bins: usize,
    edge: EdgeCorrection,
) -> Result<GridFunction> {
    let pts = p.points_2d().ok_or(Error::DimensionMismatch {
        expected: 2,
        found: p.dimension(),
    })?;
    let width = check_bins(lo, hi, bins)?;
    let window = *p.window();
    if hi >= window.inradius() {
        return Err(Error::invalid(
            "r_max",
            format!("must be below the window inradius {}", window.inradius()),
        ));
    }
    let n = pts.len();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    let volume = window.volume();
    let cell = |q: &[f64; 2]| ((q[0] / hi).floor() as i64, (q[1] / hi).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, q) in pts.iter().enumerate() {
        buckets.entry(cell(q)).or_default().push(i);
    }
    let reference: Vec<bool> = match edge {
        EdgeCorrection::Translation => vec![true; n],
        EdgeCorrection::Border => pts.iter().map(|q| distance_to_boundary(&window, q) >= hi).collect(),
    };
    let n_ref = reference.iter().filter(|r| **r).count();
    if n_ref == 0 {
        return Err(Error::TooFewPoints(0));
    }
    let mut acc = vec![0.0; bins];
    for (i, q) in pts.iter().enumerate() {
        if !reference[i] {
            continue;
        }
        let (cx, cy) = cell(q);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(list) = buckets.get(&(cx + dx, cy + dy)) else {
                    continue;
                };
                for &j in list {
                    // translation counts each unordered pair once, border
                    // counts every ordered pair from a reference point
                    if j == i || (edge == EdgeCorrection::Translation && j < i) {
                        continue;
                    }
                    let d = [pts[j][0] - q[0], pts[j][1] - q[1]];
                    let r = d[0].hypot(d[1]);
                    if let Some(b) = bin_of(r, lo, width, bins) {
                        acc[b] += match edge {
                            EdgeCorrection::Translation => 2.0 / window.set_covariance(&d),
                            EdgeCorrection::Border => 1.0,
                        };
                    }
                }
            }
        }
    }
    let norm = match edge {
        EdgeCorrection::Translation => (n * (n - 1)) as f64 / (volume * volume),
        EdgeCorrection::Border => n_ref as f64 * n as f64 / volume,
    };
    let values = (0..bins)
        .map(|b| {
            let (r0, r1) = (lo + b as f64 * width, lo + (b + 1) as f64 * width);
            acc[b] / (norm * PI * (r1 * r1 - r0 * r0))
        })
        .collect();
    GridFunction::new(centres(lo, width, bins)?, values)
}
