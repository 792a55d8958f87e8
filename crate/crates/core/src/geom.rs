//! Observation windows and finite point configurations.
//!
//! Every window is centred at the origin. A [`PointSet`] is a finite
//! realisation of a stationary process seen through such a window; a
//! [`WeightedPointSet`] attaches one real weight per point and represents
//! the Dirac comb `sum_x w_x delta_x`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::bessel_j1;

/// Centred observation window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Window {
    /// `[-length/2, length/2]`
    Interval { length: f64 },
    /// Disk of the given radius around the origin.
    Disk { radius: f64 },
    /// Axis-aligned square `[-side/2, side/2]^2`.
    Square { side: f64 },
}

fn check_size(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::invalid(name, format!("must be finite and positive, got {v}")))
    }
}

impl Window {
    pub fn interval(length: f64) -> Result<Self> {
        Ok(Window::Interval {
            length: check_size("interval length", length)?,
        })
    }

    pub fn disk(radius: f64) -> Result<Self> {
        Ok(Window::Disk {
            radius: check_size("disk radius", radius)?,
        })
    }

    pub fn square(side: f64) -> Result<Self> {
        Ok(Window::Square {
            side: check_size("square side", side)?,
        })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Window::Interval { length } => check_size("interval length", length).map(drop),
            Window::Disk { radius } => check_size("disk radius", radius).map(drop),
            Window::Square { side } => check_size("square side", side).map(drop),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Window::Interval { .. } => 1,
            Window::Disk { .. } | Window::Square { .. } => 2,
        }
    }

    /// Length (d = 1) or area (d = 2).
    pub fn volume(&self) -> f64 {
        match *self {
            Window::Interval { length } => length,
            Window::Disk { radius } => PI * radius * radius,
            Window::Square { side } => side * side,
        }
    }

    /// Linear extent: length, diameter or side.
    pub fn extent(&self) -> f64 {
        match *self {
            Window::Interval { length } => length,
            Window::Disk { radius } => 2.0 * radius,
            Window::Square { side } => side,
        }
    }

    /// Radius of the largest centred ball inside the window.
    pub fn inradius(&self) -> f64 {
        match *self {
            Window::Interval { length } => 0.5 * length,
            Window::Disk { radius } => radius,
            Window::Square { side } => 0.5 * side,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Window::Interval { .. } => "interval",
            Window::Disk { .. } => "disk",
            Window::Square { .. } => "square",
        }
    }

    fn size(&self) -> f64 {
        match *self {
            Window::Interval { length } => length,
            Window::Disk { radius } => radius,
            Window::Square { side } => side,
        }
    }

    /// Closed containment. `p` has one or two coordinates.
    pub fn contains(&self, p: &[f64]) -> bool {
        self.contains_with(p, false)
    }

    /// Open containment, as used for restriction to an (open) ball.
    pub fn contains_strict(&self, p: &[f64]) -> bool {
        self.contains_with(p, true)
    }

    fn contains_with(&self, p: &[f64], strict: bool) -> bool {
        let inside = |v: f64, bound: f64| if strict { v < bound } else { v <= bound };
        match *self {
            Window::Interval { length } => inside(p[0].abs(), 0.5 * length),
            Window::Disk { radius } => inside(p[0] * p[0] + p[1] * p[1], radius * radius),
            Window::Square { side } => inside(p[0].abs(), 0.5 * side) && inside(p[1].abs(), 0.5 * side),
        }
    }

    /// Whether `self` lies within `outer`. Windows of different dimension never fit.
    pub fn fits_inside(&self, outer: &Window) -> bool {
        match (*self, *outer) {
            (Window::Interval { length: a }, Window::Interval { length: b }) => a <= b,
            (Window::Disk { radius: a }, Window::Disk { radius: b }) => a <= b,
            (Window::Square { side: a }, Window::Square { side: b }) => a <= b,
            (Window::Disk { radius }, Window::Square { side }) => 2.0 * radius <= side,
            (Window::Square { side }, Window::Disk { radius }) => side * std::f64::consts::FRAC_1_SQRT_2 <= radius,
            _ => false,
        }
    }

    /// Window enlarged by `margin` in every direction.
    pub fn dilate(&self, margin: f64) -> Window {
        match *self {
            Window::Interval { length } => Window::Interval {
                length: length + 2.0 * margin,
            },
            Window::Disk { radius } => Window::Disk {
                radius: radius + margin,
            },
            Window::Square { side } => Window::Square {
                side: side + 2.0 * margin,
            },
        }
    }

    /// Set covariance `|W ∩ (W + d)|`, the translation edge-correction weight.
    pub fn set_covariance(&self, d: &[f64]) -> f64 {
        match *self {
            Window::Interval { length } => (length - d[0].abs()).max(0.0),
            Window::Square { side } => (side - d[0].abs()).max(0.0) * (side - d[1].abs()).max(0.0),
            Window::Disk { radius } => {
                let t = d[0].hypot(d[1]);
                if t >= 2.0 * radius {
                    0.0
                } else {
                    2.0 * radius * radius * (t / (2.0 * radius)).acos()
                        - 0.5 * t * (4.0 * radius * radius - t * t).sqrt()
                }
            }
        }
    }

    /// Fourier transform of the window indicator, `∫_W e^{-2πi k·x} dx`.
    ///
    /// All windows are centrally symmetric, so the transform is real.
    pub fn fourier_transform(&self, k: &[f64]) -> f64 {
        match *self {
            Window::Interval { length } => interval_ft(length, k[0]),
            Window::Square { side } => interval_ft(side, k[0]) * interval_ft(side, k[1]),
            Window::Disk { radius } => {
                let q = k[0].hypot(k[1]);
                if q * radius < 1e-8 {
                    PI * radius * radius
                } else {
                    radius * bessel_j1(2.0 * PI * q * radius) / q
                }
            }
        }
    }
}

fn interval_ft(length: f64, k: f64) -> f64 {
    if (k * length).abs() < 1e-12 {
        length
    } else {
        (PI * k * length).sin() / (PI * k)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind(), self.size())
    }
}

impl FromStr for Window {
    type Err = Error;

    /// Accepts `kind size` or `kind:size`, e.g. `interval 10000`, `disk:50`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().splitn(2, |c: char| c == ':' || c.is_whitespace());
        let kind = parts.next().unwrap_or_default().trim();
        let size: f64 = parts
            .next()
            .map(str::trim)
            .ok_or_else(|| Error::Parse(format!("window `{s}` lacks a size")))?
            .parse()
            .map_err(|e| Error::Parse(format!("window size in `{s}`: {e}")))?;
        match kind {
            "interval" => Window::interval(size),
            "disk" => Window::disk(size),
            "square" => Window::square(size),
            other => Err(Error::Parse(format!("unknown window kind `{other}`"))),
        }
    }
}

impl TryFrom<String> for Window {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Window> for String {
    fn from(w: Window) -> String {
        w.to_string()
    }
}

/// Point coordinates, tagged by dimension.
#[derive(Clone, Debug, PartialEq)]
pub enum Coords {
    Line(Vec<f64>),
    Plane(Vec<[f64; 2]>),
}

impl Coords {
    pub fn len(&self) -> usize {
        match self {
            Coords::Line(v) => v.len(),
            Coords::Plane(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dimension(&self) -> usize {
        match self {
            Coords::Line(_) => 1,
            Coords::Plane(_) => 2,
        }
    }
}

/// A finite point configuration observed through a centred window.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    window: Window,
    coords: Coords,
}

impl PointSet {
    pub fn new(window: Window, coords: Coords) -> Result<Self> {
        window.validate()?;
        if window.dimension() != coords.dimension() {
            return Err(Error::DimensionMismatch {
                expected: window.dimension(),
                found: coords.dimension(),
            });
        }
        let outside = match &coords {
            Coords::Line(xs) => xs.iter().position(|x| !window.contains(&[*x])),
            Coords::Plane(ps) => ps.iter().position(|p| !window.contains(p)),
        };
        if let Some(i) = outside {
            return Err(Error::invalid(
                "point set",
                format!("point {i} lies outside the window {window}"),
            ));
        }
        Ok(PointSet { window, coords })
    }

    pub fn line(window: Window, xs: Vec<f64>) -> Result<Self> {
        Self::new(window, Coords::Line(xs))
    }

    pub fn plane(window: Window, points: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(window, Coords::Plane(points))
    }

    pub fn empty(window: Window) -> Self {
        let coords = match window.dimension() {
            1 => Coords::Line(Vec::new()),
            _ => Coords::Plane(Vec::new()),
        };
        PointSet { window, coords }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.window.dimension()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinates of a one-dimensional set.
    pub fn xs(&self) -> Option<&[f64]> {
        match &self.coords {
            Coords::Line(v) => Some(v),
            Coords::Plane(_) => None,
        }
    }

    /// Coordinates of a planar set.
    pub fn points_2d(&self) -> Option<&[[f64; 2]]> {
        match &self.coords {
            Coords::Plane(v) => Some(v),
            Coords::Line(_) => None,
        }
    }

    /// Number of points per unit length or area.
    pub fn density(&self) -> f64 {
        self.len() as f64 / self.window.volume()
    }

    /// The points strictly inside `w`, observed through `w`.
    pub fn restrict(&self, w: Window) -> Result<PointSet> {
        w.validate()?;
        if w.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: w.dimension(),
            });
        }
        if !w.fits_inside(&self.window) {
            return Err(Error::WindowTooLarge {
                inner: w,
                outer: self.window,
            });
        }
        let coords = match &self.coords {
            Coords::Line(xs) => Coords::Line(xs.iter().copied().filter(|x| w.contains_strict(&[*x])).collect()),
            Coords::Plane(ps) => Coords::Plane(ps.iter().copied().filter(|p| w.contains_strict(p)).collect()),
        };
        Ok(PointSet { window: w, coords })
    }

    /// Projections `x · dir` of all points (the coordinate itself in d = 1).
    pub fn project(&self, dir: [f64; 2]) -> Vec<f64> {
        match &self.coords {
            Coords::Line(xs) => xs.iter().map(|x| x * dir[0]).collect(),
            Coords::Plane(ps) => ps.iter().map(|p| p[0] * dir[0] + p[1] * dir[1]).collect(),
        }
    }

    /// Smallest distance between two distinct points, `None` for fewer than two.
    pub fn min_pair_distance(&self) -> Option<f64> {
        if self.len() < 2 {
            return None;
        }
        let best = match &self.coords {
            Coords::Line(xs) => {
                let mut s = xs.clone();
                s.sort_by(f64::total_cmp);
                s.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
            }
            Coords::Plane(ps) => {
                let mut s = ps.clone();
                s.sort_by(|a, b| a[0].total_cmp(&b[0]));
                let mut best = f64::INFINITY;
                for i in 0..s.len() {
                    for j in i + 1..s.len() {
                        if s[j][0] - s[i][0] >= best {
                            break;
                        }
                        best = best.min((s[j][0] - s[i][0]).hypot(s[j][1] - s[i][1]));
                    }
                }
                best
            }
        };
        Some(best)
    }

    /// True when no two points are closer than `tol`.
    pub fn is_simple(&self, tol: f64) -> bool {
        self.min_pair_distance().is_none_or(|d| d > tol)
    }
}

/// A point set carrying one real weight per point.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPointSet {
    base: PointSet,
    weights: Vec<f64>,
}

impl WeightedPointSet {
    pub fn new(base: PointSet, weights: Vec<f64>) -> Result<Self> {
        if base.len() != weights.len() {
            return Err(Error::invalid(
                "weights",
                format!("{} weights for {} points", weights.len(), base.len()),
            ));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::invalid("weights", format!("non-finite weight {w}")));
        }
        Ok(WeightedPointSet { base, weights })
    }

    pub fn base(&self) -> &PointSet {
        &self.base
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

pub fn window_volume(w: &Window) -> f64 {
    w.volume()
}

pub fn point_density(p: &PointSet) -> f64 {
    p.density()
}

pub fn restrict(p: &PointSet, w: Window) -> Result<PointSet> {
    p.restrict(w)
}
