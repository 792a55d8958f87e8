//! Reference implementations used as test oracles. They are deliberately
//! naive and share no code with the library.

#![allow(dead_code, clippy::too_many_arguments)]

use std::f64::consts::PI;

use num_complex::Complex64;

/// Adaptive Simpson quadrature with Richardson correction.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    // split first so oscillatory integrands cannot fool the initial estimate
    let pieces = 16;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let (x0, x1) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (f0, fm, f1) = (f(x0), f(0.5 * (x0 + x1)), f(x1));
            let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
            step(f, x0, x1, f0, fm, f1, whole, tol / pieces as f64, 40)
        })
        .sum()
}

/// Composite Simpson on `n` (even) equal panels.
pub fn simpson_fixed(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

pub fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        (PI * t).sin() / (PI * t)
    }
}

/// `Si(x) = ∫₀ˣ sin t / t dt` by quadrature.
pub fn si(x: f64) -> f64 {
    simpson(&|t| if t == 0.0 { 1.0 } else { t.sin() / t }, 0.0, x, 1e-14)
}

/// Two-point function of the bulk ensembles, built from quadrature.
pub fn dyson_f(beta: u32, r: f64) -> f64 {
    let ds = |t: f64| {
        // central difference; only used away from the removable singularity
        let h = 1e-5;
        (sinc(t + h) - sinc(t - h)) / (2.0 * h)
    };
    match beta {
        1 => sinc(r).powi(2) + ds(r) * (0.5 - si(PI * r) / PI),
        2 => sinc(r).powi(2),
        4 => sinc(2.0 * r).powi(2) - 2.0 * ds(2.0 * r) * si(2.0 * PI * r) / (2.0 * PI),
        _ => panic!("beta"),
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by Sturm-sequence bisection.
pub fn sturm_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let count_below = |x: f64| {
        let mut count = 0;
        let mut q = diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let q_prev = if q == 0.0 { 1e-300 } else { q };
            q = diag[i] - x - off[i - 1] * off[i - 1] / q_prev;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let radius = (0..n)
        .map(|i| {
            let l = if i > 0 { off[i - 1].abs() } else { 0.0 };
            let r = if i + 1 < n { off[i].abs() } else { 0.0 };
            diag[i].abs() + l + r
        })
        .fold(0.0, f64::max)
        + 1.0;
    (0..n)
        .map(|j| {
            let (mut lo, mut hi) = (-radius, radius);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Coefficients `c` of the characteristic polynomial
/// `λⁿ + c[n−1]λⁿ⁻¹ + … + c[0]` by the Faddeev–LeVerrier recursion.
pub fn char_poly(a: &[Vec<Complex64>]) -> Vec<Complex64> {
    let n = a.len();
    let zero = Complex64::new(0.0, 0.0);
    let mul = |x: &[Vec<Complex64>], y: &[Vec<Complex64>]| {
        let mut out = vec![vec![zero; n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    out[i][j] += x[i][k] * y[k][j];
                }
            }
        }
        out
    };
    let mut coeffs = vec![zero; n];
    let mut m = vec![vec![zero; n]; n];
    let mut c = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        let mut next = mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c;
        }
        m = next;
        let am = mul(a, &m);
        let trace: Complex64 = (0..n).map(|i| am[i][i]).sum();
        c = -trace / k as f64;
        coeffs[n - k] = c;
    }
    coeffs
}

/// Roots of the monic polynomial with lower coefficients `c`.
pub fn durand_kerner(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len();
    let eval = |z: Complex64| {
        let mut v = Complex64::new(1.0, 0.0);
        for k in (0..n).rev() {
            v = v * z + c[k];
        }
        v
    };
    let seed = Complex64::new(0.4, 0.9);
    let scale = 1.0 + c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * scale).collect();
    for _ in 0..5000 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let dz = eval(z[i]) / denom;
            z[i] -= dz;
            moved = moved.max(dz.norm());
        }
        if moved < 1e-15 * scale {
            break;
        }
    }
    z
}

/// Largest distance in an optimal pairing of two small multisets
/// (brute force over greedy nearest matches, fine for n ≤ 8).
pub fn spectral_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("same length");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Kolmogorov–Smirnov statistic of a sample against a continuous CDF.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic 1% critical value of the KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Direct periodogram `|Σ w e^{−2πikx}|² / L`.
pub fn naive_periodogram(xs: &[f64], weights: Option<&[f64]>, k: f64, volume: f64) -> f64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (i, &x) in xs.iter().enumerate() {
        let w = weights.map_or(1.0, |w| w[i]);
        s += Complex64::from_polar(w, -2.0 * PI * k * x);
    }
    s.norm_sqr() / volume
}
