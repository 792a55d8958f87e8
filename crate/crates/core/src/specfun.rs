//! Special functions and waiting-time laws.
//!
//! The sine and cosine integrals switch from their power series to a
//! continued fraction for the complex exponential integral `E1(ix)` at
//! argument 4; both branches are accurate to a few ulps of the result.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use num_rational::Ratio;
use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_SWITCH: f64 = 4.0;

/// `s(r) = sin(πr)/(πr)` with `s(0) = 1`.
pub fn sinc_s(r: f64) -> f64 {
    let x = PI * r;
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Derivative of [`sinc_s`].
pub fn sinc_s_prime(r: f64) -> f64 {
    let x = PI * r;
    if x.abs() < 1e-3 {
        // d/dr s = π (-x/3 + x^3/30 - x^5/840)
        let x2 = x * x;
        PI * x * (-1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0)
    } else {
        (x.cos() * x - x.sin()) / (PI * r * r)
    }
}

/// Sine and cosine integrals `(Si(x), Ci(x))` for `x > 0`.
fn si_ci_positive(x: f64) -> (f64, f64) {
    if x <= SERIES_SWITCH {
        (si_series(x), ci_series(x))
    } else {
        let h = e1_imaginary_times_phase(x);
        (FRAC_PI_2 + h.im, -h.re)
    }
}

fn si_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        term *= -x2 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
        n += 1.0;
        let contrib = term / (2.0 * n + 1.0);
        sum += contrib;
        if contrib.abs() < 1e-17 * sum.abs() {
            return sum;
        }
    }
}

fn ci_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = 1.0;
    let mut sum = 0.0;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= -x2 / ((2.0 * n - 1.0) * (2.0 * n));
        let contrib = term / (2.0 * n);
        sum += contrib;
        if contrib.abs() < 1e-17 * (sum.abs() + 1.0) {
            return EULER_GAMMA + x.ln() + sum;
        }
    }
}

/// `E1(ix) · e^{ix}` conjugated into the form used for Si/Ci: returns
/// `h` with `Ci(x) = -Re h` and `Si(x) = π/2 + Im h` (modified Lentz).
fn e1_imaginary_times_phase(x: f64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..500 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    h * Complex64::new(x.cos(), -x.sin())
}

/// Sine integral `Si(x) = ∫_0^x sin t / t dt` (odd).
pub fn sine_integral(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x < 0.0 {
        -si_ci_positive(-x).0
    } else {
        si_ci_positive(x).0
    }
}

/// Cosine integral `Ci(x) = -∫_x^∞ cos t / t dt`, `x > 0`.
pub fn cosine_integral(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::NegativeArgument(x));
    }
    Ok(si_ci_positive(x).1)
}

/// `π/2 - Si(x)` for `x ≥ 0`, without cancellation for large `x`.
pub fn si_complement(x: f64) -> f64 {
    if x <= SERIES_SWITCH {
        FRAC_PI_2 - sine_integral(x)
    } else {
        -e1_imaginary_times_phase(x).im
    }
}

/// `∫_r^∞ s(t) dt = 1/2 - Si(πr)/π`.
pub fn sine_tail(r: f64) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::NegativeArgument(r));
    }
    Ok(si_complement(PI * r) / PI)
}

/// `∫_0^r s(2t) dt = Si(2πr)/(2π)`.
pub fn sine_partial2(r: f64) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::NegativeArgument(r));
    }
    Ok(sine_integral(2.0 * PI * r) / (2.0 * PI))
}

/// Bessel function of the first kind of order one.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < 25.0 {
        // trapezoid rule on the periodic integral (1/2π)∫ cos(τ − x sin τ) dτ,
        // exact up to aliasing terms of order J_M(x)
        let m = 64 + 2 * ax.ceil() as usize;
        let step = 2.0 * PI / m as f64;
        (0..m)
            .map(|j| {
                let t = j as f64 * step;
                (t - ax * t.sin()).cos()
            })
            .sum::<f64>()
            / m as f64
    } else {
        // Hankel asymptotic expansion with 4ν² = 4
        let mu = 4.0;
        let mut a = 1.0;
        let (mut p, mut q) = (1.0, 0.0);
        let mut last = f64::INFINITY;
        for k in 1..40 {
            let kf = k as f64;
            a *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * ax);
            if a.abs() > last {
                break;
            }
            last = a.abs();
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                p += sign * a;
            } else {
                q += sign * a;
            }
        }
        let chi = ax - 0.75 * PI;
        (2.0 / (PI * ax)).sqrt() * (p * chi.cos() - q * chi.sin())
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// One atom of a discrete waiting-time law.
#[derive(Clone, Debug, PartialEq)]
pub struct WaitingAtom {
    pub location: f64,
    /// Exact rational location, when the user supplied one and it survived
    /// mean normalisation.
    pub exact: Option<Ratio<i64>>,
    pub prob: f64,
}

/// The law of the gaps between consecutive points.
#[derive(Clone, Debug, PartialEq)]
pub enum WaitingLaw {
    Exponential { rate: f64 },
    Gamma { shape: f64, rate: f64 },
    Uniform { a: f64, b: f64 },
    Discrete { atoms: Vec<WaitingAtom> },
}

/// A probability law on `(0, ∞)` normalised to mean 1 at construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WaitingSpec", into = "WaitingSpec")]
pub struct WaitingDistribution {
    law: WaitingLaw,
}

impl WaitingDistribution {
    /// Exponential law; the rate is forced to 1 by the mean-1 condition.
    pub fn exponential() -> Self {
        WaitingDistribution {
            law: WaitingLaw::Exponential { rate: 1.0 },
        }
    }

    /// Gamma law with the given shape and mean 1 (rate = shape).
    pub fn gamma(shape: f64) -> Result<Self> {
        if !(shape.is_finite() && shape > 0.0) {
            return Err(Error::invalid("gamma shape", format!("{shape}")));
        }
        Ok(WaitingDistribution {
            law: WaitingLaw::Gamma { shape, rate: shape },
        })
    }

    /// Uniform law on `[a, b]`, rescaled so that `(a + b)/2 = 1`.
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a >= 0.0 && b > a) {
            return Err(Error::invalid(
                "uniform bounds",
                format!("need 0 <= a < b, got [{a}, {b}]"),
            ));
        }
        let scale = 2.0 / (a + b);
        Ok(WaitingDistribution {
            law: WaitingLaw::Uniform {
                a: a * scale,
                b: b * scale,
            },
        })
    }

    /// Finitely many atoms `(location, probability)`; locations are rescaled
    /// to mean 1 and probabilities renormalised.
    pub fn discrete(atoms: &[(f64, f64)]) -> Result<Self> {
        let atoms = atoms
            .iter()
            .map(|&(location, prob)| WaitingAtom {
                location,
                exact: None,
                prob,
            })
            .collect();
        Self::from_atoms(atoms)
    }

    /// Atoms with exact rational locations. Exactness is kept when the law
    /// already has mean 1; otherwise locations are rescaled in floating point.
    pub fn discrete_exact(atoms: &[(Ratio<i64>, f64)]) -> Result<Self> {
        let atoms = atoms
            .iter()
            .map(|&(q, prob)| WaitingAtom {
                location: *q.numer() as f64 / *q.denom() as f64,
                exact: Some(q),
                prob,
            })
            .collect();
        Self::from_atoms(atoms)
    }

    fn from_atoms(mut atoms: Vec<WaitingAtom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("discrete atoms", "at least one atom is required"));
        }
        for a in &atoms {
            if !(a.location.is_finite() && a.location > 0.0) {
                return Err(Error::invalid(
                    "discrete atoms",
                    format!("locations must be positive, got {}", a.location),
                ));
            }
            if !(a.prob.is_finite() && a.prob > 0.0) {
                return Err(Error::invalid(
                    "discrete atoms",
                    format!("probabilities must be positive, got {}", a.prob),
                ));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.prob).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "discrete atoms",
                format!("probabilities sum to {total}, not 1"),
            ));
        }
        for a in &mut atoms {
            a.prob /= total;
        }
        let mean: f64 = atoms.iter().map(|a| a.prob * a.location).sum();
        if (mean - 1.0).abs() > 1e-12 {
            for a in &mut atoms {
                a.location /= mean;
                a.exact = None;
            }
        }
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        Ok(WaitingDistribution {
            law: WaitingLaw::Discrete { atoms },
        })
    }

    pub fn law(&self) -> &WaitingLaw {
        &self.law
    }

    pub fn kind(&self) -> &'static str {
        match self.law {
            WaitingLaw::Exponential { .. } => "exponential",
            WaitingLaw::Gamma { .. } => "gamma",
            WaitingLaw::Uniform { .. } => "uniform",
            WaitingLaw::Discrete { .. } => "discrete",
        }
    }

    pub fn is_continuous(&self) -> bool {
        !matches!(self.law, WaitingLaw::Discrete { .. })
    }

    pub fn atoms(&self) -> Option<&[WaitingAtom]> {
        match &self.law {
            WaitingLaw::Discrete { atoms } => Some(atoms),
            _ => None,
        }
    }

    pub fn mean(&self) -> f64 {
        match &self.law {
            WaitingLaw::Exponential { rate } => 1.0 / rate,
            WaitingLaw::Gamma { shape, rate } => shape / rate,
            WaitingLaw::Uniform { a, b } => 0.5 * (a + b),
            WaitingLaw::Discrete { atoms } => atoms.iter().map(|a| a.prob * a.location).sum(),
        }
    }

    pub fn variance(&self) -> f64 {
        match &self.law {
            WaitingLaw::Exponential { rate } => 1.0 / (rate * rate),
            WaitingLaw::Gamma { shape, rate } => shape / (rate * rate),
            WaitingLaw::Uniform { a, b } => (b - a).powi(2) / 12.0,
            WaitingLaw::Discrete { atoms } => {
                let m = self.mean();
                atoms.iter().map(|a| a.prob * (a.location - m).powi(2)).sum()
            }
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Probability density of a continuous law; `None` for discrete laws.
    pub fn pdf(&self, x: f64) -> Option<f64> {
        let v = match self.law {
            WaitingLaw::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            WaitingLaw::Gamma { shape, rate } => {
                if x < 0.0 {
                    0.0
                } else if x == 0.0 {
                    match shape.partial_cmp(&1.0) {
                        Some(std::cmp::Ordering::Less) => f64::INFINITY,
                        Some(std::cmp::Ordering::Equal) => rate,
                        _ => 0.0,
                    }
                } else {
                    (shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x - statrs::function::gamma::ln_gamma(shape))
                        .exp()
                }
            }
            WaitingLaw::Uniform { a, b } => {
                if (a..=b).contains(&x) {
                    1.0 / (b - a)
                } else {
                    0.0
                }
            }
            WaitingLaw::Discrete { .. } => return None,
        };
        Some(v)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.law {
            WaitingLaw::Exponential { rate } => Exp::new(*rate).expect("positive rate").sample(rng),
            WaitingLaw::Gamma { shape, rate } => Gamma::new(*shape, 1.0 / rate)
                .expect("positive gamma parameters")
                .sample(rng),
            WaitingLaw::Uniform { a, b } => rng.random_range(*a..*b),
            WaitingLaw::Discrete { atoms } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for atom in atoms {
                    acc += atom.prob;
                    if u < acc {
                        return atom.location;
                    }
                }
                atoms[atoms.len() - 1].location
            }
        }
    }

    /// Characteristic function `∫ e^{-2πikx} dμ(x)`.
    pub fn char_fn(&self, k: f64) -> Complex64 {
        let w = 2.0 * PI * k;
        match &self.law {
            WaitingLaw::Exponential { rate } => Complex64::new(*rate, 0.0) / Complex64::new(*rate, w),
            WaitingLaw::Gamma { shape, rate } => (-(Complex64::new(1.0, w / rate).ln()) * *shape).exp(),
            WaitingLaw::Uniform { a, b } => {
                let m = 0.5 * (a + b);
                let half = 0.5 * w * (b - a);
                let sinc = if half.abs() < 1e-8 { 1.0 } else { half.sin() / half };
                Complex64::from_polar(sinc, -w * m)
            }
            WaitingLaw::Discrete { atoms } => atoms
                .iter()
                .map(|a| Complex64::from_polar(a.prob, -w * a.location))
                .sum(),
        }
    }
}

pub fn char_fn(d: &WaitingDistribution, k: f64) -> Complex64 {
    d.char_fn(k)
}

/// Config-file form of a waiting law, e.g.
/// `{ kind = "discrete", atoms = [[0.5, 0.5], [1.5, 0.5]] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WaitingSpec {
    Exponential {
        #[serde(default = "one")]
        rate: f64,
    },
    Gamma {
        shape: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rate: Option<f64>,
    },
    Uniform {
        a: f64,
        b: f64,
    },
    Discrete {
        atoms: Vec<(AtomLocation, f64)>,
    },
}

fn one() -> f64 {
    1.0
}

impl WaitingSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            WaitingSpec::Exponential { .. } => "exponential",
            WaitingSpec::Gamma { .. } => "gamma",
            WaitingSpec::Uniform { .. } => "uniform",
            WaitingSpec::Discrete { .. } => "discrete",
        }
    }
}

/// An atom location: a number, or an exact rational written `"p/q"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AtomLocation {
    Number(f64),
    Exact(String),
}

pub(crate) fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let d: i64 = d.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if d == 0 {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Ratio::new(n, d))
}

impl TryFrom<WaitingSpec> for WaitingDistribution {
    type Error = Error;

    fn try_from(spec: WaitingSpec) -> Result<Self> {
        match spec {
            WaitingSpec::Exponential { rate } => {
                if !(rate.is_finite() && rate > 0.0) {
                    return Err(Error::invalid("exponential rate", format!("{rate}")));
                }
                Ok(WaitingDistribution::exponential())
            }
            WaitingSpec::Gamma { shape, rate } => {
                if let Some(r) = rate {
                    if !(r.is_finite() && r > 0.0) {
                        return Err(Error::invalid("gamma rate", format!("{r}")));
                    }
                }
                WaitingDistribution::gamma(shape)
            }
            WaitingSpec::Uniform { a, b } => WaitingDistribution::uniform(a, b),
            WaitingSpec::Discrete { atoms } => {
                let all_exact = atoms.iter().all(|(l, _)| matches!(l, AtomLocation::Exact(_)));
                if all_exact {
                    let exact = atoms
                        .iter()
                        .map(|(l, p)| match l {
                            AtomLocation::Exact(s) => parse_ratio(s).map(|q| (q, *p)),
                            AtomLocation::Number(_) => unreachable!(),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    WaitingDistribution::discrete_exact(&exact)
                } else {
                    let plain = atoms
                        .iter()
                        .map(|(l, p)| match l {
                            AtomLocation::Number(x) => Ok((*x, *p)),
                            AtomLocation::Exact(s) => {
                                let q = parse_ratio(s)?;
                                Ok((*q.numer() as f64 / *q.denom() as f64, *p))
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    WaitingDistribution::discrete(&plain)
                }
            }
        }
    }
}

impl From<WaitingDistribution> for WaitingSpec {
    fn from(d: WaitingDistribution) -> Self {
        match d.law {
            WaitingLaw::Exponential { rate } => WaitingSpec::Exponential { rate },
            WaitingLaw::Gamma { shape, rate } => WaitingSpec::Gamma {
                shape,
                rate: Some(rate),
            },
            WaitingLaw::Uniform { a, b } => WaitingSpec::Uniform { a, b },
            WaitingLaw::Discrete { atoms } => WaitingSpec::Discrete {
                atoms: atoms
                    .into_iter()
                    .map(|a| {
                        let loc = match a.exact {
                            Some(q) => AtomLocation::Exact(format!("{}/{}", q.numer(), q.denom())),
                            None => AtomLocation::Number(a.location),
                        };
                        (loc, a.prob)
                    })
                    .collect(),
            },
        }
    }
}

impl std::str::FromStr for WaitingDistribution {
    type Err = Error;

    /// Short form used on the command line: `exponential`, `gamma:2`,
    /// `uniform:0.5:1.5`, `discrete:1/2=0.5,3/2=0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let nums = |rest: &str| -> Result<Vec<f64>> {
            rest.split(':')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("`{t}`: {e}"))))
                .collect()
        };
        let spec = match kind {
            "exponential" => WaitingSpec::Exponential {
                rate: nums(rest)?.first().copied().unwrap_or(1.0),
            },
            "gamma" => {
                let v = nums(rest)?;
                WaitingSpec::Gamma {
                    shape: *v.first().ok_or_else(|| Error::Parse("gamma needs a shape".into()))?,
                    rate: v.get(1).copied(),
                }
            }
            "uniform" => match nums(rest)?.as_slice() {
                [a, b] => WaitingSpec::Uniform { a: *a, b: *b },
                _ => return Err(Error::Parse("uniform needs `uniform:a:b`".into())),
            },
            "discrete" => {
                let atoms = rest
                    .split(',')
                    .map(|item| {
                        let (loc, p) = item
                            .split_once('=')
                            .ok_or_else(|| Error::Parse(format!("atom `{item}` is not loc=prob")))?;
                        let p: f64 = p.trim().parse().map_err(|e| Error::Parse(format!("`{p}`: {e}")))?;
                        let loc = if loc.contains('/') {
                            AtomLocation::Exact(loc.trim().to_string())
                        } else {
                            AtomLocation::Number(loc.trim().parse().map_err(|e| Error::Parse(format!("`{loc}`: {e}")))?)
                        };
                        Ok((loc, p))
                    })
                    .collect::<Result<Vec<_>>>()?;
                WaitingSpec::Discrete { atoms }
            }
            other => return Err(Error::Parse(format!("unknown waiting law `{other}`"))),
        };
        spec.try_into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_values() {
        assert_eq!(sinc_s(0.0), 1.0);
        assert!(sinc_s(1.0).abs() < 1e-16);
        assert!((sinc_s(0.5) - 2.0 / PI).abs() < 1e-15);
        assert_eq!(sinc_s(-0.3), sinc_s(0.3));
    }

    #[test]
    fn sinc_prime_values() {
        assert_eq!(sinc_s_prime(0.0), 0.0);
        assert!((sinc_s_prime(1.0) + 1.0).abs() < 1e-14);
        assert!((sinc_s_prime(-0.7) + sinc_s_prime(0.7)).abs() < 1e-15);
        // continuity across the series switch
        let a = sinc_s_prime(0.999e-3 / PI);
        let b = sinc_s_prime(1.001e-3 / PI);
        assert!((a - b).abs() < 1e-5);
    }

    #[test]
    fn sine_integral_reference_values() {
        // Abramowitz & Stegun table 5.1
        assert!((sine_integral(1.0) - 0.946_083_070_367_183).abs() < 1e-14);
        assert!((sine_integral(5.0) - 1.549_931_244_944_674).abs() < 1e-13);
        assert!((cosine_integral(1.0).unwrap() - 0.337_403_922_900_968).abs() < 1e-14);
        assert!((cosine_integral(5.0).unwrap() + 0.190_029_749_656_644).abs() < 1e-13);
        assert!((sine_integral(PI) - 1.851_937_051_982_466).abs() < 1e-14);
    }

    #[test]
    fn si_continuous_at_switch() {
        let below = sine_integral(SERIES_SWITCH - 1e-13);
        let above = sine_integral(SERIES_SWITCH + 1e-13);
        assert!((below - above).abs() < 1e-13);
        let cb = cosine_integral(SERIES_SWITCH - 1e-13).unwrap();
        let ca = cosine_integral(SERIES_SWITCH + 1e-13).unwrap();
        assert!((cb - ca).abs() < 1e-13);
    }

    #[test]
    fn sine_tail_and_partial() {
        assert!((sine_tail(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((sine_tail(1.0).unwrap() + 0.089_489_8).abs() < 1e-6);
        assert!(sine_tail(1e3).unwrap().abs() < 1e-3);
        assert_eq!(sine_partial2(0.0).unwrap(), 0.0);
        assert!((sine_partial2(1e3).unwrap() - 0.25).abs() < 1e-3);
        assert!(matches!(sine_tail(-1.0), Err(Error::NegativeArgument(_))));
        assert!(matches!(sine_partial2(-0.1), Err(Error::NegativeArgument(_))));
    }

    #[test]
    fn bessel_reference_values() {
        assert!((bessel_j1(1.0) - 0.440_050_585_744_933_5).abs() < 1e-14);
        assert!((bessel_j1(10.0) - 0.043_472_746_168_861_44).abs() < 1e-12);
        assert!((bessel_j1(20.0) - 0.066_833_124_175_850_04).abs() < 1e-12);
        assert!((bessel_j1(-3.0) + bessel_j1(3.0)).abs() < 1e-16);
        // both branches agree at the switch
        assert!((bessel_j1(25.0 - 1e-12) - bessel_j1(25.0 + 1e-12)).abs() < 1e-12);
        assert!((bessel_j1(12.0) + 0.223_447_104_490_627_6).abs() < 1e-14);
    }

    #[test]
    fn construction_normalises_mean() {
        let u = WaitingDistribution::uniform(1.0, 3.0).unwrap();
        assert!((u.mean() - 1.0).abs() < 1e-15);
        let d = WaitingDistribution::discrete(&[(1.0, 0.5), (3.0, 0.5)]).unwrap();
        assert!((d.mean() - 1.0).abs() < 1e-15);
        let g = WaitingDistribution::gamma(2.0).unwrap();
        assert_eq!(g.mean(), 1.0);
        assert!(WaitingDistribution::discrete(&[(1.0, 0.3)]).is_err());
        assert!(WaitingDistribution::discrete(&[(0.0, 1.0)]).is_err());
        assert!(WaitingDistribution::uniform(2.0, 1.0).is_err());
    }

    #[test]
    fn exact_atoms_survive_when_mean_is_one() {
        let d: WaitingDistribution = "discrete:1/2=0.5,3/2=0.5".parse().unwrap();
        let atoms = d.atoms().unwrap();
        assert_eq!(atoms[0].exact, Some(Ratio::new(1, 2)));
        let shifted: WaitingDistribution = "discrete:1/2=0.5,5/2=0.5".parse().unwrap();
        assert!(shifted.atoms().unwrap().iter().all(|a| a.exact.is_none()));
    }

    #[test]
    fn char_fn_closed_forms() {
        let e = WaitingDistribution::exponential();
        let v = e.char_fn(1.0);
        assert!((v.re - 0.024_704_6).abs() < 1e-6 && (v.im + 0.155_223).abs() < 1e-5);
        let delta = WaitingDistribution::discrete(&[(1.0, 1.0)]).unwrap();
        let k = 0.37;
        let z = delta.char_fn(k);
        assert!((z - Complex64::from_polar(1.0, -2.0 * PI * k)).norm() < 1e-15);
        for d in [e, delta, WaitingDistribution::gamma(2.5).unwrap()] {
            assert!((d.char_fn(0.0) - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn spec_strings_and_serde() {
        let d: WaitingDistribution = "uniform:0.5:1.5".parse().unwrap();
        assert_eq!(d.kind(), "uniform");
        let json = serde_json::to_string(&d).unwrap();
        let back: WaitingDistribution = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
        let toml_src = "kind = \"discrete\"\natoms = [[0.5, 0.5], [1.5, 0.5]]\n";
        let t: WaitingDistribution = toml::from_str(toml_src).unwrap();
        assert_eq!(t.atoms().unwrap().len(), 2);
        assert!("poisson:1".parse::<WaitingDistribution>().is_err());
    }
}
