use crate::error::{Error, Result};

use super::MAX_SWEEPS;

/// Symmetric tridiagonal matrix given by its diagonal and off-diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::invalid("tridiagonal matrix", "empty diagonal"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::invalid(
                "tridiagonal matrix",
                format!("{} off-diagonal entries for dimension {}", offdiag.len(), diag.len()),
            ));
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(Error::invalid("tridiagonal matrix", "non-finite entry"));
        }
        Ok(SymTridiag { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// The same matrix with rows and columns in reverse order.
    pub fn flipped(&self) -> SymTridiag {
        SymTridiag {
            diag: self.diag.iter().rev().copied().collect(),
            offdiag: self.offdiag.iter().rev().copied().collect(),
        }
    }
}

/// All eigenvalues in ascending order, by implicit QL with Wilkinson shifts.
///
/// An off-diagonal entry is deflated once it drops below
/// `tol · (|d_m| + |d_{m+1}|)`.
pub fn symtridiag_eigenvalues(m: &SymTridiag, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance", format!("must be positive, got {tol}")));
    }
    let tol = tol.max(f64::EPSILON);
    let n = m.dim();
    let mut d = m.diag.clone();
    let mut e = m.offdiag.clone();
    e.push(0.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut mm = l;
            while mm + 1 < n {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= tol * dd || e[mm] == 0.0 {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    context: "symmetric tridiagonal QL",
                    iterations: MAX_SWEEPS,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..mm).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}
