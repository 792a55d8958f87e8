//! Eigenvalues only: symmetric tridiagonal matrices for the β-ensembles and
//! dense complex matrices for the Ginibre ensemble.

mod complex;
mod tridiag;

pub use complex::{complex_eigenvalues, complex_eigenvalues_capped, ComplexMatrix, DEFAULT_DIMENSION_CAP};
pub use tridiag::{symtridiag_eigenvalues, SymTridiag};

/// Sweeps allowed per eigenvalue before giving up.
pub const MAX_SWEEPS: usize = 50;
