use num_complex::Complex64;

use crate::error::{Error, Result};

use super::MAX_SWEEPS;

/// Default upper bound on the matrix dimension accepted by the solver.
pub const DEFAULT_DIMENSION_CAP: usize = 1024;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_rows(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(ComplexMatrix { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let data = (0..n * n).map(|idx| f(idx / n, idx % n)).collect();
        ComplexMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }
}

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Eigenvalues of a dense complex matrix, in no particular order.
///
/// Matrices above [`DEFAULT_DIMENSION_CAP`] are rejected.
pub fn complex_eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<Vec<Complex64>> {
    complex_eigenvalues_capped(m, tol, DEFAULT_DIMENSION_CAP)
}

/// Householder reduction to upper Hessenberg form followed by single-shift
/// complex QR with Wilkinson shifts.
pub fn complex_eigenvalues_capped(m: &ComplexMatrix, tol: f64, cap: usize) -> Result<Vec<Complex64>> {
    let n = m.dim();
    if n > cap {
        return Err(Error::DimensionTooLarge { n, cap });
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance", format!("must be positive, got {tol}")));
    }
    if m.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::invalid("matrix", "non-finite entry"));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = m.data.clone();
    hessenberg(&mut h, n);
    hessenberg_qr(&mut h, n, tol.max(f64::EPSILON))
}

fn hessenberg(a: &mut [Complex64], n: usize) {
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut s = vec![zero; n];
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let v = &mut v[..len];
        for i in 0..len {
            v[i] = a[(k + 1 + i) * n + k];
        }
        let alpha = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let phase = if v[0].norm() > 0.0 {
            v[0] / v[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // H A on rows k+1.., columns k..
        let s = &mut s[..n];
        s[k..].iter_mut().for_each(|x| *x = zero);
        for (i, vi) in v.iter().enumerate() {
            let row = &a[(k + 1 + i) * n..(k + 2 + i) * n];
            let cv = vi.conj();
            for j in k..n {
                s[j] += cv * row[j];
            }
        }
        for (i, vi) in v.iter().enumerate() {
            let row = &mut a[(k + 1 + i) * n..(k + 2 + i) * n];
            let f = *vi * tau;
            for j in k..n {
                row[j] -= f * s[j];
            }
        }
        // A H on all rows, columns k+1..
        for i in 0..n {
            let row = &mut a[i * n + k + 1..(i + 1) * n];
            let t: Complex64 = row.iter().zip(v.iter()).map(|(x, vl)| x * vl).sum();
            let f = t * tau;
            for (x, vl) in row.iter_mut().zip(v.iter()) {
                *x -= f * vl.conj();
            }
        }
        a[(k + 1) * n + k] = -phase * alpha;
        for i in k + 2..n {
            a[i * n + k] = zero;
        }
    }
}

/// Eigenvalues of the 2×2 block `[[p, q], [r, s]]`.
fn eig2(p: Complex64, q: Complex64, r: Complex64, s: Complex64) -> (Complex64, Complex64) {
    let half_tr = (p + s) * 0.5;
    let disc = ((p - s) * 0.5).powu(2) + q * r;
    let root = disc.sqrt();
    let a = half_tr + root;
    let b = half_tr - root;
    // recompute the smaller root from the determinant to avoid cancellation
    let det = p * s - q * r;
    if a.norm() >= b.norm() && a.norm() > 0.0 {
        (a, det / a)
    } else if b.norm() > 0.0 {
        (det / b, b)
    } else {
        (a, b)
    }
}

fn hessenberg_qr(h: &mut [Complex64], n: usize, tol: f64) -> Result<Vec<Complex64>> {
    let at = |i: usize, j: usize| i * n + j;
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let norm_scale = h.iter().map(|z| cabs1(*z)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    loop {
        // find the start of the active unreduced block ending at `hi`
        let mut lo = hi;
        while lo > 0 {
            let sub = cabs1(h[at(lo, lo - 1)]);
            let mut diag = cabs1(h[at(lo - 1, lo - 1)]) + cabs1(h[at(lo, lo)]);
            if diag == 0.0 {
                diag = norm_scale;
            }
            if sub <= tol * diag {
                h[at(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[at(hi, hi)];
            sweeps = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        if lo + 1 == hi {
            let (a, b) = eig2(h[at(lo, lo)], h[at(lo, hi)], h[at(hi, lo)], h[at(hi, hi)]);
            eig[lo] = a;
            eig[hi] = b;
            sweeps = 0;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            continue;
        }
        sweeps += 1;
        if sweeps > MAX_SWEEPS {
            return Err(Error::NoConvergence {
                context: "complex Hessenberg QR",
                iterations: MAX_SWEEPS,
            });
        }
        let shift = if sweeps == 10 {
            h[at(lo, lo)] + 0.75 * h[at(lo + 1, lo)].re.abs()
        } else if sweeps == 20 {
            h[at(hi, hi)] + 0.75 * h[at(hi, hi - 1)].re.abs()
        } else {
            let d = h[at(hi, hi)];
            let (a, b) = eig2(h[at(hi - 1, hi - 1)], h[at(hi - 1, hi)], h[at(hi, hi - 1)], d);
            if (a - d).norm() <= (b - d).norm() {
                a
            } else {
                b
            }
        };

        // implicit single-shift sweep, chasing the bulge with Givens rotations
        let mut x = h[at(lo, lo)] - shift;
        let mut y = h[at(lo + 1, lo)];
        for k in lo..hi {
            let (c, s) = givens(x, y);
            let cs = s.conj();
            let first = if k > lo { k - 1 } else { lo };
            for j in first..=hi {
                let a = h[at(k, j)];
                let b = h[at(k + 1, j)];
                h[at(k, j)] = a * c + s * b;
                h[at(k + 1, j)] = -cs * a + b * c;
            }
            let last = (k + 2).min(hi);
            for i in lo..=last {
                let a = h[at(i, k)];
                let b = h[at(i, k + 1)];
                h[at(i, k)] = a * c + b * cs;
                h[at(i, k + 1)] = -a * s + b * c;
            }
            if k > lo {
                h[at(k + 1, k - 1)] = Complex64::new(0.0, 0.0);
            }
            if k + 1 < hi {
                x = h[at(k + 1, k)];
                y = h[at(k + 2, k)];
            }
        }
    }
    Ok(eig)
}

/// Rotation `(c, s)` with real `c` such that `[c s; -s̄ c]·[x; y] = [r; 0]`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn triangular_matrix_gives_its_diagonal() {
        let m = ComplexMatrix::from_fn(4, |i, j| {
            if j >= i {
                c(i as f64 + 1.0, j as f64)
            } else {
                c(0.0, 0.0)
            }
        });
        let ev = sorted(complex_eigenvalues(&m, 1e-14).unwrap());
        for (i, z) in ev.iter().enumerate() {
            assert!((z - c(i as f64 + 1.0, i as f64)).norm() < 1e-12, "{z}");
        }
    }

    #[test]
    fn rotation_has_eigenvalues_pm_i() {
        let m = ComplexMatrix::from_rows(2, vec![c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let ev = sorted(complex_eigenvalues(&m, 1e-14).unwrap());
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn cyclic_shift_gives_roots_of_unity() {
        let n = 7;
        let m = ComplexMatrix::from_fn(n, |i, j| if (i + 1) % n == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let ev = complex_eigenvalues(&m, 1e-14).unwrap();
        for z in &ev {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.powu(n as u32) - c(1.0, 0.0)).norm() < 1e-10);
        }
        let total: Complex64 = ev.iter().sum();
        assert!(total.norm() < 1e-12);
    }

    #[test]
    fn dimension_cap() {
        let m = ComplexMatrix::zeros(5);
        assert!(matches!(
            complex_eigenvalues_capped(&m, 1e-14, 4),
            Err(Error::DimensionTooLarge { n: 5, cap: 4 })
        ));
        assert_eq!(complex_eigenvalues(&ComplexMatrix::zeros(0), 1e-14).unwrap(), vec![]);
    }
}
