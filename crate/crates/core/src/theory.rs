//! Closed-form autocorrelation and diffraction for every model.
//!
//! Two different functions share the letter h in the literature. The renewal
//! [`renewal_backscatter`] enters the diffraction as `(1 − h)λ`, whereas the
//! Dyson [`dyson_h`] is the diffuse diffraction density itself.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::measure::{AcDensity, Atom, PurePointPart, SpectralMeasure};
use crate::quad::tanh_sinh;
use crate::specfun::{sinc_s, sinc_s_prime, sine_partial2, sine_tail, WaitingAtom, WaitingDistribution, WaitingLaw};

/// `|1 − μ̂(k)|` below this marks `k` as a Bragg position.
pub const ATOM_THRESHOLD: f64 = 1e-12;
/// Residual required of the renewal density solver.
pub const NU_RESIDUAL_TOL: f64 = 1e-8;
/// Relative tolerance for rational reconstruction of atom locations.
pub const LATTICE_TOL: f64 = 1e-9;
/// Largest denominator tried during rational reconstruction.
pub const LATTICE_MAX_DENOM: i64 = 10_000;

fn check_rho(rho: f64) -> Result<()> {
    if rho >= 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("rho", format!("must be non-negative, got {rho}")))
    }
}

fn check_beta(beta: u32) -> Result<()> {
    if matches!(beta, 1 | 2 | 4) {
        Ok(())
    } else {
        Err(Error::invalid("beta", format!("must be 1, 2 or 4, got {beta}")))
    }
}

/// Autocorrelation `ρδ₀ + ρ²λ` and diffraction `ρ²δ₀ + ρλ`.
pub fn poisson_theory(rho: f64) -> Result<(SpectralMeasure, SpectralMeasure)> {
    check_rho(rho)?;
    let atom = |intensity: f64| {
        if intensity > 0.0 {
            PurePointPart::SingleAtomAtZero { intensity }
        } else {
            PurePointPart::None
        }
    };
    let flat = |c: f64| {
        if c > 0.0 {
            AcDensity::Constant(c)
        } else {
            AcDensity::Zero
        }
    };
    Ok((
        SpectralMeasure::new("poisson autocorrelation", atom(rho), flat(rho * rho)),
        SpectralMeasure::new("poisson diffraction", atom(rho * rho), flat(rho)),
    ))
}

/// Autocorrelation `ρδ₀` and diffraction `ρλ`: the ±1 marks remove the
/// central Bragg peak.
pub fn marked_poisson_theory(rho: f64) -> Result<(SpectralMeasure, SpectralMeasure)> {
    check_rho(rho)?;
    let (pp, ac) = if rho > 0.0 {
        (
            PurePointPart::SingleAtomAtZero { intensity: rho },
            AcDensity::Constant(rho),
        )
    } else {
        (PurePointPart::None, AcDensity::Zero)
    };
    Ok((
        SpectralMeasure::new("marked poisson autocorrelation", pp, AcDensity::Zero),
        SpectralMeasure::new("marked poisson diffraction", PurePointPart::None, ac),
    ))
}

/// `h(k) = 2(|μ̂|² − Re μ̂)/|1 − μ̂|²`; the diffuse diffraction is `1 − h`.
pub fn renewal_backscatter(mu: &WaitingDistribution, k: f64) -> Result<f64> {
    let m = mu.char_fn(k);
    let gap = (1.0 - m).norm();
    if gap < ATOM_THRESHOLD {
        return Err(Error::AtomLocation { k });
    }
    Ok(2.0 * (m.norm_sqr() - m.re) / (gap * gap))
}

/// Continued-fraction reconstruction of `x` as `p/q` with `q ≤ max_denom`.
fn rational_approx(x: f64, tol: f64, max_denom: i64) -> Option<Ratio<i64>> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_denom {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol * x.abs().max(1.0) {
            return Some(Ratio::new(h1, k1));
        }
        let frac = rest - a as f64;
        if frac == 0.0 {
            return None;
        }
        rest = 1.0 / frac;
    }
    None
}

fn exact_location(a: &WaitingAtom) -> Option<Ratio<i64>> {
    a.exact
        .or_else(|| rational_approx(a.location, LATTICE_TOL, LATTICE_MAX_DENOM))
}

/// Generator `b` of the coarsest lattice `bℤ` containing every atom, if any.
pub fn lattice_generator(atoms: &[WaitingAtom]) -> Option<Ratio<i64>> {
    let rs: Vec<Ratio<i64>> = atoms.iter().map(exact_location).collect::<Option<_>>()?;
    let lcm = rs.iter().fold(1i64, |l, r| l.lcm(r.denom()));
    let g = rs.iter().fold(0i64, |g, r| g.gcd(&(r.numer() * (lcm / r.denom()))));
    (g > 0).then(|| Ratio::new(g, lcm))
}

/// `δ₀` for non-lattice laws, `δ_{ℤ/b}` when `bℤ` is the coarsest lattice
/// containing the support.
pub fn renewal_pure_point(mu: &WaitingDistribution) -> PurePointPart {
    let single = PurePointPart::SingleAtomAtZero { intensity: 1.0 };
    let Some(atoms) = mu.atoms() else {
        return single;
    };
    match lattice_generator(atoms) {
        Some(b) => PurePointPart::LatticeComb {
            spacing: *b.denom() as f64 / *b.numer() as f64,
            intensity: 1.0,
        },
        None => single,
    }
}

/// The renewal measure `ν = μ + μ∗μ + …` up to some `r_max`.
#[derive(Clone, Debug)]
pub enum NuDensity {
    Grid(GridFunction),
    Atoms(Vec<Atom>),
}

#[derive(Clone, Debug)]
pub struct NuSolution {
    pub nu: NuDensity,
    /// `max |ν − μ − μ∗ν|` over the computed range, in the discretisation used.
    pub residual: f64,
}

/// Solve `ν = μ + μ∗ν` on `(0, r_max]`.
///
/// Continuous laws use the trapezoidal Volterra scheme on a grid of spacing
/// about `step`, solved exactly by forward substitution. Discrete laws give
/// atoms, exact on the lattice when there is one.
pub fn renewal_nu_density(mu: &WaitingDistribution, r_max: f64, step: f64) -> Result<NuSolution> {
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::invalid("r_max", format!("must be positive, got {r_max}")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid("step", format!("must be positive, got {step}")));
    }
    let sol = match mu.law() {
        WaitingLaw::Discrete { atoms } => match lattice_generator(atoms) {
            Some(b) => nu_lattice(atoms, b, r_max),
            None => nu_atoms(atoms, r_max),
        },
        _ => nu_continuous(mu, r_max, step)?,
    };
    if !(sol.residual < NU_RESIDUAL_TOL) {
        return Err(Error::NoConvergence {
            context: "renewal equation",
            iterations: 1,
        });
    }
    Ok(sol)
}

/// Default solver step, `r_max/4096`.
pub fn default_nu_step(r_max: f64) -> f64 {
    r_max / 4096.0
}

const NU_REFINEMENTS: usize = 3;

fn nu_continuous(mu: &WaitingDistribution, r_max: f64, step: f64) -> Result<NuSolution> {
    let pdf = |x: f64| mu.pdf(x).unwrap_or(0.0);
    if !pdf(0.0).is_finite() {
        return Err(Error::invalid("waiting", "density must be bounded at 0"));
    }
    let mut n = ((r_max / step).ceil() as usize).max(4);
    let mut best = f64::INFINITY;
    for _ in 0..NU_REFINEMENTS {
        let h = r_max / n as f64;
        let coarse = volterra_trapezoid(&pdf, h, n);
        let fine = volterra_trapezoid(&pdf, 0.5 * h, 2 * n);
        let nu: Vec<f64> = (0..=n).map(|i| (4.0 * fine[2 * i] - coarse[i]) / 3.0).collect();
        let residual = fourth_order_residual(&pdf, &nu, h);
        if residual < NU_RESIDUAL_TOL {
            let grid = Grid::new(0.0, r_max, n + 1)?;
            return Ok(NuSolution {
                nu: NuDensity::Grid(GridFunction::new(grid, nu)?),
                residual,
            });
        }
        if !(residual < 0.5 * best) {
            break;
        }
        best = residual;
        n *= 2;
    }
    Err(Error::NoConvergence {
        context: "renewal equation",
        iterations: NU_REFINEMENTS,
    })
}

// trapezoid forward substitution for ν = m + m∗ν
fn volterra_trapezoid(pdf: &impl Fn(f64) -> f64, h: f64, n: usize) -> Vec<f64> {
    let m: Vec<f64> = (0..=n).map(|i| pdf(i as f64 * h)).collect();
    let mut nu = vec![0.0; n + 1];
    nu[0] = m[0];
    let denom = 1.0 - 0.5 * h * m[0];
    for i in 1..=n {
        let inner: f64 = (1..i).map(|j| m[i - j] * nu[j]).sum();
        nu[i] = (m[i] + h * (0.5 * m[i] * nu[0] + inner)) / denom;
    }
    nu
}

// ‖ν − m − m∗ν‖ with composite Simpson (plus a 3/8 panel for odd counts)
fn fourth_order_residual(pdf: &impl Fn(f64) -> f64, nu: &[f64], h: f64) -> f64 {
    let n = nu.len() - 1;
    let m: Vec<f64> = (0..=n).map(|i| pdf(i as f64 * h)).collect();
    let conv = |i: usize| -> f64 {
        let f = |j: usize| m[i - j] * nu[j];
        match i {
            0 => 0.0,
            1 => {
                let mid = (5.0 * nu[0] + 15.0 * nu[1] - 5.0 * nu[2] + nu[3]) / 16.0;
                h / 6.0 * (f(0) + 4.0 * pdf(0.5 * h) * mid + f(1))
            }
            _ => {
                let (even, tail) = if i.is_multiple_of(2) { (i, 0) } else { (i - 3, 3) };
                let mut s = 0.0;
                if even > 0 {
                    s += f(0) + f(even);
                    s += (1..even)
                        .map(|j| if j % 2 == 1 { 4.0 * f(j) } else { 2.0 * f(j) })
                        .sum::<f64>();
                    s *= h / 3.0;
                }
                if tail == 3 {
                    s += 3.0 * h / 8.0 * (f(even) + 3.0 * f(even + 1) + 3.0 * f(even + 2) + f(even + 3));
                }
                s
            }
        }
    };
    (0..=n).map(|i| (nu[i] - m[i] - conv(i)).abs()).fold(0.0, f64::max)
}

fn nu_lattice(atoms: &[WaitingAtom], b: Ratio<i64>, r_max: f64) -> NuSolution {
    let bf = *b.numer() as f64 / *b.denom() as f64;
    let steps: Vec<(usize, f64)> = atoms
        .iter()
        .map(|a| {
            let q = exact_location(a).expect("lattice atoms are rational") / b;
            (*q.numer() as usize, a.prob)
        })
        .collect();
    let len = (r_max / bf).floor() as usize;
    let mut p = vec![0.0; len + 1];
    for &(j, w) in &steps {
        if j <= len {
            p[j] += w;
        }
    }
    let mut nu = vec![0.0; len + 1];
    for i in 1..=len {
        nu[i] = p[i]
            + steps
                .iter()
                .filter(|(j, _)| *j < i)
                .map(|&(j, w)| w * nu[i - j])
                .sum::<f64>();
    }
    let residual = (1..=len)
        .map(|i| {
            let conv: f64 = steps.iter().filter(|(j, _)| *j < i).map(|&(j, w)| w * nu[i - j]).sum();
            (nu[i] - p[i] - conv).abs()
        })
        .fold(0.0, f64::max);
    let atoms = (1..=len)
        .filter(|&i| nu[i] > 0.0)
        .map(|i| Atom {
            location: i as f64 * bf,
            intensity: nu[i],
        })
        .collect();
    NuSolution {
        nu: NuDensity::Atoms(atoms),
        residual,
    }
}

fn nu_atoms(atoms: &[WaitingAtom], r_max: f64) -> NuSolution {
    // locations are merged on a 1e-9 lattice to absorb rounding in sums
    let key = |x: f64| (x * 1e9).round() as i64;
    let mut total: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
    let mut layer: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
    for a in atoms.iter().filter(|a| a.location <= r_max) {
        let e = layer.entry(key(a.location)).or_insert((a.location, 0.0));
        e.1 += a.prob;
    }
    while !layer.is_empty() {
        for (k, (x, w)) in &layer {
            let e = total.entry(*k).or_insert((*x, 0.0));
            e.1 += w;
        }
        let mut next: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
        for (x, w) in layer.values() {
            for a in atoms {
                let y = x + a.location;
                if y <= r_max {
                    let e = next.entry(key(y)).or_insert((y, 0.0));
                    e.1 += w * a.prob;
                }
            }
        }
        layer = next;
    }
    let residual = total
        .iter()
        .map(|(k, (x, w))| {
            let direct: f64 = atoms.iter().filter(|a| key(a.location) == *k).map(|a| a.prob).sum();
            let conv: f64 = atoms
                .iter()
                .filter_map(|a| total.get(&key(x - a.location)).map(|(_, v)| a.prob * v))
                .sum();
            (w - direct - conv).abs()
        })
        .fold(0.0, f64::max);
    NuSolution {
        nu: NuDensity::Atoms(
            total
                .values()
                .map(|&(location, intensity)| Atom { location, intensity })
                .collect(),
        ),
        residual,
    }
}

/// Autocorrelation `δ₀ + ν + ν̃` (tabulated on `[0, r_max]`) and diffraction
/// with diffuse density `1 − h`.
pub fn renewal_theory(mu: &WaitingDistribution, r_max: f64) -> Result<(SpectralMeasure, SpectralMeasure)> {
    let nu = renewal_nu_density(mu, r_max, default_nu_step(r_max))?;
    let ac = match nu.nu {
        NuDensity::Grid(g) => AcDensity::Grid(g),
        NuDensity::Atoms(_) => AcDensity::Zero,
    };
    let auto = SpectralMeasure::new(
        "renewal autocorrelation",
        PurePointPart::SingleAtomAtZero { intensity: 1.0 },
        ac,
    );
    let law = mu.clone();
    let diffraction = SpectralMeasure::new(
        "renewal diffraction",
        renewal_pure_point(mu),
        AcDensity::Function(Arc::new(move |k| Ok(1.0 - renewal_backscatter(&law, k)?))),
    );
    Ok((auto, diffraction))
}

/// Two-point function `f_β(r)`; the pair correlation is `1 − f_β(|r|)`.
pub fn dyson_f(beta: u32, r: f64) -> Result<f64> {
    check_beta(beta)?;
    if r < 0.0 {
        return Err(Error::NegativeArgument(r));
    }
    Ok(match beta {
        1 => sinc_s(r).powi(2) + sinc_s_prime(r) * sine_tail(r)?,
        2 => sinc_s(r).powi(2),
        _ => sinc_s(2.0 * r).powi(2) - 2.0 * sinc_s_prime(2.0 * r) * sine_partial2(r)?,
    })
}

/// Diffuse diffraction density `h_β(k)`; the full diffraction is `δ₀ + h_β λ`.
pub fn dyson_h(beta: u32, k: f64) -> Result<f64> {
    check_beta(beta)?;
    let a = k.abs();
    Ok(match beta {
        1 if a <= 1.0 => a * (2.0 - (2.0 * a + 1.0).ln()),
        1 => 2.0 - a * ((2.0 * a + 1.0) / (2.0 * a - 1.0)).ln(),
        2 => a.min(1.0),
        _ if a == 1.0 => return Err(Error::SingularPoint { k }),
        _ if a <= 2.0 => 0.25 * a * (2.0 - (1.0 - a).abs().ln()),
        _ => 1.0,
    })
}

/// Autocorrelation `δ₀ + (1 − f_β)λ` and diffraction `δ₀ + h_β λ`.
pub fn dyson_theory(beta: u32) -> Result<(SpectralMeasure, SpectralMeasure)> {
    check_beta(beta)?;
    let atom = PurePointPart::SingleAtomAtZero { intensity: 1.0 };
    Ok((
        SpectralMeasure::new(
            format!("dyson β={beta} autocorrelation"),
            atom,
            AcDensity::Function(Arc::new(move |r| Ok(1.0 - dyson_f(beta, r.abs())?))),
        ),
        SpectralMeasure::new(
            format!("dyson β={beta} diffraction"),
            atom,
            AcDensity::Function(Arc::new(move |k| dyson_h(beta, k))),
        ),
    ))
}

/// `1 − e^{−πr²}`, the Ginibre pair correlation.
pub fn ginibre_g(r: f64) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::NegativeArgument(r));
    }
    Ok(-(-PI * r * r).exp_m1())
}

/// `1 − e^{−πk²}`, the Ginibre diffuse diffraction density.
pub fn ginibre_h(k: f64) -> Result<f64> {
    ginibre_g(k)
}

/// Radial autocorrelation and diffraction of the Ginibre process.
pub fn ginibre_theory() -> (SpectralMeasure, SpectralMeasure) {
    let atom = PurePointPart::SingleAtomAtZero { intensity: 1.0 };
    (
        SpectralMeasure::new(
            "ginibre autocorrelation",
            atom,
            AcDensity::Function(Arc::new(|r| ginibre_g(r.abs()))),
        ),
        SpectralMeasure::new(
            "ginibre diffraction",
            atom,
            AcDensity::Function(Arc::new(|k| ginibre_h(k.abs()))),
        ),
    )
}

/// A theory density together with the abscissae where it is not smooth,
/// so cell averages can split their quadrature there.
#[derive(Clone)]
pub struct TheoryCurve {
    pub label: String,
    eval: Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>,
    pub breakpoints: Vec<f64>,
}

impl std::fmt::Debug for TheoryCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TheoryCurve")
            .field("label", &self.label)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

/// How a curve is averaged over an estimator cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CellMeasure {
    /// `dx` on the line.
    Uniform,
    /// `x dx`, the radial measure in the plane.
    Radial,
}

impl TheoryCurve {
    pub fn new(
        label: impl Into<String>,
        eval: impl Fn(f64) -> Result<f64> + Send + Sync + 'static,
        breakpoints: Vec<f64>,
    ) -> Self {
        TheoryCurve {
            label: label.into(),
            eval: Arc::new(eval),
            breakpoints,
        }
    }

    pub fn constant(label: impl Into<String>, c: f64) -> Self {
        Self::new(label, move |_| Ok(c), Vec::new())
    }

    /// The ac density of a measure, without known breakpoints.
    pub fn from_measure(m: &SpectralMeasure) -> Self {
        let ac = m.ac.clone();
        Self::new(m.label.clone(), move |x| ac.eval(x), Vec::new())
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        (self.eval)(x)
    }

    /// Average of the curve over `[lo, hi]` against the given measure.
    /// Breakpoints are quadrature split points, so integrable singularities
    /// placed there are handled.
    pub fn cell_average(&self, lo: f64, hi: f64, measure: CellMeasure) -> Result<f64> {
        if hi <= lo {
            return self.eval(lo);
        }
        let mut cuts = vec![lo];
        cuts.extend(self.breakpoints.iter().copied().filter(|b| *b > lo && *b < hi));
        cuts.push(hi);
        let weight = |x: f64| match measure {
            CellMeasure::Uniform => 1.0,
            CellMeasure::Radial => x,
        };
        let mut failure = None;
        let mut total = 0.0;
        for w in cuts.windows(2) {
            total += tanh_sinh(
                |x| match self.eval(x) {
                    Ok(v) => v * weight(x),
                    Err(Error::SingularPoint { .. }) | Err(Error::AtomLocation { .. }) => f64::NAN,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                },
                w[0],
                w[1],
                1e-10,
            );
        }
        if let Some(e) = failure {
            return Err(e);
        }
        let mass = match measure {
            CellMeasure::Uniform => hi - lo,
            CellMeasure::Radial => 0.5 * (hi * hi - lo * lo),
        };
        Ok(total / mass)
    }
}

/// `1 − f_β(r)` with no breakpoints (it is smooth).
pub fn dyson_pair_curve(beta: u32) -> Result<TheoryCurve> {
    check_beta(beta)?;
    Ok(TheoryCurve::new(
        format!("1 - f_{beta}"),
        move |r| Ok(1.0 - dyson_f(beta, r.abs())?),
        Vec::new(),
    ))
}

/// `h_β(k)`, with breakpoints at the kinks.
pub fn dyson_diffraction_curve(beta: u32) -> Result<TheoryCurve> {
    check_beta(beta)?;
    let kinks = match beta {
        4 => vec![-2.0, -1.0, 0.0, 1.0, 2.0],
        _ => vec![-1.0, 0.0, 1.0],
    };
    Ok(TheoryCurve::new(format!("h_{beta}"), move |k| dyson_h(beta, k), kinks))
}

/// `1 − h(k)` for a renewal law, with Bragg positions up to `k_max` as
/// breakpoints.
pub fn renewal_diffraction_curve(mu: &WaitingDistribution, k_max: f64) -> TheoryCurve {
    let mut breaks = vec![0.0];
    if let PurePointPart::LatticeComb { spacing, .. } = renewal_pure_point(mu) {
        let n = (k_max.abs() / spacing).ceil() as i64;
        breaks = (-n..=n).map(|j| j as f64 * spacing).collect();
    }
    let law = mu.clone();
    TheoryCurve::new(
        format!("1 - h ({})", mu.kind()),
        move |k| Ok(1.0 - renewal_backscatter(&law, k)?),
        breaks,
    )
}

/// `1 − e^{−πt²}`.
pub fn ginibre_curve() -> TheoryCurve {
    TheoryCurve::new("1 - exp(-pi t^2)", ginibre_g, vec![0.0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyson_h_special_values() {
        assert_eq!(dyson_h(2, 0.5).unwrap(), 0.5);
        assert_eq!(dyson_h(2, 3.0).unwrap(), 1.0);
        assert!((dyson_h(1, 1.0).unwrap() - (2.0 - 3f64.ln())).abs() < 1e-15);
        assert_eq!(dyson_h(4, 2.0).unwrap(), 1.0);
        assert!(matches!(dyson_h(4, -1.0), Err(Error::SingularPoint { .. })));
        assert!(dyson_h(3, 0.5).is_err());
    }

    #[test]
    fn dyson_f_at_origin() {
        for beta in [1, 2, 4] {
            assert!((dyson_f(beta, 0.0).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!(dyson_f(2, 1.0).unwrap().abs() < 1e-30);
        assert!(dyson_f(1, -0.1).is_err());
    }

    #[test]
    fn rational_reconstruction() {
        assert_eq!(rational_approx(0.5, 1e-9, 10_000), Some(Ratio::new(1, 2)));
        assert_eq!(rational_approx(1.5, 1e-9, 10_000), Some(Ratio::new(3, 2)));
        assert_eq!(rational_approx(2f64.sqrt(), 1e-9, 10_000), None);
    }

    #[test]
    fn lattice_classification() {
        let d1 = WaitingDistribution::discrete(&[(1.0, 1.0)]).unwrap();
        assert_eq!(
            renewal_pure_point(&d1),
            PurePointPart::LatticeComb {
                spacing: 1.0,
                intensity: 1.0
            }
        );
        let tiling = WaitingDistribution::discrete(&[(0.5, 0.5), (1.5, 0.5)]).unwrap();
        assert_eq!(
            renewal_pure_point(&tiling),
            PurePointPart::LatticeComb {
                spacing: 2.0,
                intensity: 1.0
            }
        );
        let irrational = WaitingDistribution::discrete(&[(1.0, 0.5), (2f64.sqrt(), 0.5)]).unwrap();
        assert_eq!(
            renewal_pure_point(&irrational),
            PurePointPart::SingleAtomAtZero { intensity: 1.0 }
        );
        assert_eq!(
            renewal_pure_point(&WaitingDistribution::exponential()),
            PurePointPart::SingleAtomAtZero { intensity: 1.0 }
        );
    }

    #[test]
    fn backscatter_examples() {
        let tiling = WaitingDistribution::discrete(&[(0.5, 0.5), (1.5, 0.5)]).unwrap();
        assert!((renewal_backscatter(&tiling, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            renewal_backscatter(&tiling, 2.0),
            Err(Error::AtomLocation { .. })
        ));
        let e = WaitingDistribution::exponential();
        assert!(matches!(renewal_backscatter(&e, 0.0), Err(Error::AtomLocation { .. })));
    }

    #[test]
    fn nu_for_unit_lattice_is_all_ones() {
        let d1 = WaitingDistribution::discrete(&[(1.0, 1.0)]).unwrap();
        let sol = renewal_nu_density(&d1, 5.5, 0.01).unwrap();
        let NuDensity::Atoms(atoms) = sol.nu else {
            panic!("expected atoms")
        };
        assert_eq!(atoms.len(), 5);
        for (i, a) in atoms.iter().enumerate() {
            assert_eq!(a.location, (i + 1) as f64);
            assert_eq!(a.intensity, 1.0);
        }
    }

    #[test]
    fn nu_for_incommensurate_atoms() {
        let d = WaitingDistribution::discrete(&[(1.0, 0.5), (2f64.sqrt(), 0.5)]).unwrap();
        let sol = renewal_nu_density(&d, 6.0, 0.01).unwrap();
        assert!(sol.residual < 1e-12);
        assert!(matches!(sol.nu, NuDensity::Atoms(_)));
    }

    #[test]
    fn cell_average_of_singular_h4() {
        let c = dyson_diffraction_curve(4).unwrap();
        let avg = c.cell_average(0.9, 1.1, CellMeasure::Uniform).unwrap();
        assert!(avg.is_finite() && avg > 0.5);
        let flat = TheoryCurve::constant("one", 1.0);
        assert!((flat.cell_average(0.2, 0.4, CellMeasure::Radial).unwrap() - 1.0).abs() < 1e-12);
    }
}
