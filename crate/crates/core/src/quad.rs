//! Numerical quadrature used for cell averages of theory curves.

use std::f64::consts::{FRAC_PI_2, PI};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule with `panels` equal panels of `order` nodes.
pub fn integrate_gl(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let mid = lo + 0.5 * width;
        let mut s = 0.0;
        for (xi, wi) in x.iter().zip(&w) {
            s += wi * f(mid + 0.5 * width * xi);
        }
        total += 0.5 * width * s;
    }
    total
}

/// Tanh–sinh (double exponential) quadrature on `[a, b]`.
///
/// Nodes never touch the endpoints, so integrable endpoint singularities
/// are handled; non-finite integrand values are skipped.
pub fn tanh_sinh(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    const T_MAX: f64 = 4.0;

    let centre = {
        let v = f(mid);
        FRAC_PI_2 * if v.is_finite() { v } else { 0.0 }
    };
    let mut eval_pair = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let w = FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        // distance of the node from the nearer endpoint, in units of `half`
        let gap = (-u).exp() / u.cosh();
        let mut s = 0.0;
        for x in [b - half * gap, a + half * gap] {
            if x > a && x < b {
                let v = f(x);
                if v.is_finite() {
                    s += w * v;
                }
            }
        }
        s
    };

    let mut h = 0.5;
    let mut sum = centre;
    let mut k = 1;
    while k as f64 * h <= T_MAX {
        sum += eval_pair(k as f64 * h);
        k += 1;
    }
    let mut estimate = h * sum;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= T_MAX {
            sum += eval_pair(k as f64 * h);
            k += 2;
        }
        let next = h * sum;
        let converged = (next - estimate).abs() <= tol * next.abs().max(1e-300) || (next - estimate).abs() < 1e-15;
        estimate = next;
        if converged {
            break;
        }
    }
    half * estimate
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(5);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn tanh_sinh_handles_log_singularity() {
        // ∫_0^1 ln x dx = -1
        let v = tanh_sinh(|x| x.ln(), 0.0, 1.0, 1e-12);
        assert!((v + 1.0).abs() < 1e-10, "{v}");
        let s = tanh_sinh(|x| x.sin(), 0.0, PI, 1e-12);
        assert!((s - 2.0).abs() < 1e-12);
    }
}
