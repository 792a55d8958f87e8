//! Monte Carlo checks of autocorrelation and diffraction for point processes.
//!
//! Samplers produce replicas of Poisson, marked Poisson, Matérn hard-core,
//! renewal, Dyson β-bulk and Ginibre point sets. Estimators turn replicas into
//! pair-correlation and diffraction curves, which [`verify`] compares with the
//! closed forms in [`theory`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimators;
pub mod exec;
pub mod geom;
pub mod grid;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod quad;
pub mod samplers;
pub mod seed;
pub mod specfun;
pub mod theory;
pub mod verify;

pub use error::{Error, Result};
