//! Autocorrelation and diffraction measures split into a pure-point part
//! and an absolutely continuous density. There is no singular continuous
//! part: none of the implemented models produces one.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::GridFunction;

/// A single point mass. For planar models the location is radial.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Atom {
    pub location: f64,
    pub intensity: f64,
}

/// The Bragg (pure-point) part of a measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PurePointPart {
    None,
    SingleAtomAtZero {
        intensity: f64,
    },
    /// Atoms of equal intensity at every integer multiple of `spacing`.
    LatticeComb {
        spacing: f64,
        intensity: f64,
    },
}

impl PurePointPart {
    /// Atoms with location in `[lo, hi]`.
    pub fn atoms_in(&self, lo: f64, hi: f64) -> Vec<Atom> {
        match *self {
            PurePointPart::None => Vec::new(),
            PurePointPart::SingleAtomAtZero { intensity } => {
                if lo <= 0.0 && 0.0 <= hi {
                    vec![Atom {
                        location: 0.0,
                        intensity,
                    }]
                } else {
                    Vec::new()
                }
            }
            PurePointPart::LatticeComb { spacing, intensity } => {
                let first = (lo / spacing).ceil() as i64;
                let last = (hi / spacing).floor() as i64;
                (first..=last)
                    .map(|j| Atom {
                        location: j as f64 * spacing,
                        intensity,
                    })
                    .collect()
            }
        }
    }

    /// Whether `x` is within `tol` of an atom.
    pub fn is_near_atom(&self, x: f64, tol: f64) -> bool {
        match *self {
            PurePointPart::None => false,
            PurePointPart::SingleAtomAtZero { .. } => x.abs() <= tol,
            PurePointPart::LatticeComb { spacing, .. } => (x - (x / spacing).round() * spacing).abs() <= tol,
        }
    }
}

pub type DensityFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// The absolutely continuous part, as a density against Lebesgue measure.
#[derive(Clone)]
pub enum AcDensity {
    Zero,
    Constant(f64),
    Function(DensityFn),
    Grid(GridFunction),
}

impl AcDensity {
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            AcDensity::Zero => Ok(0.0),
            AcDensity::Constant(c) => Ok(*c),
            AcDensity::Function(f) => f(x),
            AcDensity::Grid(g) => g
                .interpolate(x)
                .ok_or_else(|| Error::invalid("density", format!("abscissa {x} lies outside the tabulated range"))),
        }
    }
}

impl fmt::Debug for AcDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AcDensity::Zero => write!(f, "Zero"),
            AcDensity::Constant(c) => write!(f, "Constant({c})"),
            AcDensity::Function(_) => write!(f, "Function(..)"),
            AcDensity::Grid(g) => write!(f, "Grid({} points)", g.len()),
        }
    }
}

/// `pure_point + ac · λ`
#[derive(Clone, Debug)]
pub struct SpectralMeasure {
    pub pure_point: PurePointPart,
    pub ac: AcDensity,
    pub label: String,
}

impl SpectralMeasure {
    pub fn new(label: impl Into<String>, pure_point: PurePointPart, ac: AcDensity) -> Self {
        SpectralMeasure {
            pure_point,
            ac,
            label: label.into(),
        }
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        self.ac.eval(x)
    }
}
