//! Seeded samplers for every model, each restricted to a centred window.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, Normal, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Coords, PointSet, WeightedPointSet, Window};
use crate::linalg::{complex_eigenvalues, symtridiag_eigenvalues, ComplexMatrix, SymTridiag};
use crate::seed::{SeedSpec, Stream};
use crate::specfun::{WaitingDistribution, WaitingSpec};

/// Relative tolerance handed to the eigensolvers.
const EIGEN_TOL: f64 = 1e-14;

/// Default central fraction kept from β-ensemble spectra.
pub const DEFAULT_KEEP_LINE: f64 = 0.1;
/// Default central fraction kept from Ginibre spectra.
pub const DEFAULT_KEEP_PLANE: f64 = 0.5;

fn uniform_in<R: Rng>(w: &Window, rng: &mut R) -> Vec<f64> {
    match *w {
        Window::Interval { length } => vec![length * (rng.random::<f64>() - 0.5)],
        Window::Square { side } => vec![side * (rng.random::<f64>() - 0.5), side * (rng.random::<f64>() - 0.5)],
        Window::Disk { radius } => {
            let r = radius * rng.random::<f64>().sqrt();
            let t = 2.0 * PI * rng.random::<f64>();
            vec![r * t.cos(), r * t.sin()]
        }
    }
}

/// Homogeneous Poisson process of intensity `rho` in `w`. 1D output is sorted.
pub fn sample_poisson(rho: f64, w: &Window, seed: SeedSpec) -> Result<PointSet> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::invalid(
            "rho",
            format!("must be finite and non-negative, got {rho}"),
        ));
    }
    w.validate()?;
    let mean = rho * w.volume();
    if mean == 0.0 {
        return Ok(PointSet::empty(*w));
    }
    let mut rng = seed.rng(Stream::Poisson);
    let count = Poisson::new(mean)
        .map_err(|e| Error::invalid("rho", e.to_string()))?
        .sample(&mut rng) as usize;
    let coords = if w.dimension() == 1 {
        let mut xs: Vec<f64> = (0..count).map(|_| uniform_in(w, &mut rng)[0]).collect();
        xs.sort_by(f64::total_cmp);
        Coords::Line(xs)
    } else {
        Coords::Plane(
            (0..count)
                .map(|_| {
                    let p = uniform_in(w, &mut rng);
                    [p[0], p[1]]
                })
                .collect(),
        )
    };
    PointSet::new(*w, coords)
}

/// Independent fair ±1 weights.
pub fn mark_pm1(p: &PointSet, seed: SeedSpec) -> WeightedPointSet {
    let mut rng = seed.rng(Stream::Marks);
    let weights = (0..p.len())
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect();
    WeightedPointSet::new(p.clone(), weights).expect("weights match points")
}

/// Matérn type II thinning: every point draws a uniform age and survives iff
/// no other point closer than `d` is older (has a smaller mark).
pub fn matern2_thin(p: &PointSet, d: f64, seed: SeedSpec) -> Result<PointSet> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::invalid("hard_core", format!("must be positive, got {d}")));
    }
    let mut rng = seed.rng(Stream::Thinning);
    let marks: Vec<f64> = (0..p.len()).map(|_| rng.random()).collect();
    // ties in the mark are broken by index
    let older = |j: usize, i: usize| marks[j] < marks[i] || (marks[j] == marks[i] && j < i);
    let coords = match p.coords() {
        Coords::Line(xs) => {
            let mut order: Vec<usize> = (0..xs.len()).collect();
            order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
            let mut keep = vec![true; xs.len()];
            for (pos, &i) in order.iter().enumerate() {
                let hit_left = order[..pos]
                    .iter()
                    .rev()
                    .take_while(|&&j| xs[i] - xs[j] < d)
                    .any(|&j| older(j, i));
                let hit_right = order[pos + 1..]
                    .iter()
                    .take_while(|&&j| xs[j] - xs[i] < d)
                    .any(|&j| older(j, i));
                keep[i] = !(hit_left || hit_right);
            }
            Coords::Line(xs.iter().zip(&keep).filter(|(_, k)| **k).map(|(x, _)| *x).collect())
        }
        Coords::Plane(ps) => {
            let cell = |q: &[f64; 2]| ((q[0] / d).floor() as i64, (q[1] / d).floor() as i64);
            let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
            for (i, q) in ps.iter().enumerate() {
                buckets.entry(cell(q)).or_default().push(i);
            }
            let d2 = d * d;
            let survives = |i: usize| {
                let (cx, cy) = cell(&ps[i]);
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        if let Some(list) = buckets.get(&(cx + dx, cy + dy)) {
                            for &j in list {
                                if j == i {
                                    continue;
                                }
                                let (ex, ey) = (ps[j][0] - ps[i][0], ps[j][1] - ps[i][1]);
                                if ex * ex + ey * ey < d2 && older(j, i) {
                                    return false;
                                }
                            }
                        }
                    }
                }
                true
            };
            Coords::Plane((0..ps.len()).filter(|&i| survives(i)).map(|i| ps[i]).collect())
        }
    };
    PointSet::new(*p.window(), coords)
}

/// Stationary renewal process on a 1D window, started far to the left.
pub fn sample_renewal(mu: &WaitingDistribution, w: &Window, seed: SeedSpec) -> Result<PointSet> {
    let Window::Interval { length } = *w else {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: w.dimension(),
        });
    };
    w.validate()?;
    let half = 0.5 * length;
    let mut rng = seed.rng(Stream::Renewal);
    let burn_in = 50.0 * (10.0 * mu.std_dev()).max(1.0);
    // the extra uniform offset makes lattice laws phase-stationary
    let mut x = -(half + burn_in) - rng.random::<f64>();
    let mut xs = Vec::with_capacity(length.ceil() as usize + 16);
    loop {
        x += mu.sample(&mut rng);
        if x > half {
            break;
        }
        if x >= -half {
            xs.push(x);
        }
    }
    PointSet::line(*w, xs)
}

fn check_beta(beta: u32) -> Result<()> {
    if matches!(beta, 1 | 2 | 4) {
        Ok(())
    } else {
        Err(Error::invalid("beta", format!("must be 1, 2 or 4, got {beta}")))
    }
}

fn check_keep(keep: f64) -> Result<()> {
    if keep > 0.0 && keep <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("keep", format!("must lie in (0, 1], got {keep}")))
    }
}

/// Window produced by [`sample_beta_bulk`]: length `4κN/π`.
pub fn beta_bulk_window(n: usize, keep: f64) -> Result<Window> {
    Window::interval(4.0 * keep * n as f64 / PI)
}

/// Tridiagonal model of the Gaussian β-ensemble: N(0,1) diagonal and
/// χ_{β(N−j)}/√2 off-diagonal. Its semicircle has radius √(2βN).
pub fn beta_tridiagonal(beta: u32, n: usize, rng: &mut ChaCha8Rng) -> Result<SymTridiag> {
    check_beta(beta)?;
    let diag: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let offdiag = (1..n)
        .map(|j| {
            let dof = (beta as usize * (n - j)) as f64;
            let chi2 = ChiSquared::new(dof).map_err(|e| Error::invalid("beta", e.to_string()))?;
            Ok((chi2.sample(rng) * 0.5).sqrt())
        })
        .collect::<Result<Vec<f64>>>()?;
    SymTridiag::new(diag, offdiag)
}

/// Bulk of a Gaussian β-ensemble spectrum, unfolded to unit density.
///
/// Eigenvalues are first mapped to semicircle radius √(2N/π), those inside
/// the central fraction `keep` of the support are kept and multiplied by
/// √(2N/π).
pub fn sample_beta_bulk(beta: u32, n: usize, keep: f64, seed: SeedSpec) -> Result<PointSet> {
    check_beta(beta)?;
    check_keep(keep)?;
    if n < 16 {
        return Err(Error::invalid("n", format!("need at least 16, got {n}")));
    }
    let mut rng = seed.rng(Stream::BetaBulk);
    let t = beta_tridiagonal(beta, n, &mut rng)?;
    let ev = symtridiag_eigenvalues(&t, EIGEN_TOL)?;
    let radius = (2.0 * n as f64 / PI).sqrt();
    let to_paper = 1.0 / (beta as f64 * PI).sqrt();
    let cut = keep * radius;
    let window = beta_bulk_window(n, keep)?;
    let half = 0.5 * window.extent();
    let xs: Vec<f64> = ev
        .iter()
        .map(|l| l * to_paper)
        .filter(|x| x.abs() < cut)
        .map(|x| x * radius)
        .filter(|x| x.abs() <= half)
        .collect();
    PointSet::line(window, xs)
}

/// All eigenvalues of an N×N complex Gaussian matrix with entry variance 1/π,
/// so the spectrum fills the disk of radius √(N/π) with unit density.
pub fn ginibre_spectrum(n: usize, seed: SeedSpec) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(Error::invalid("n", "must be at least 1"));
    }
    let mut rng = seed.rng(Stream::Ginibre);
    let normal = Normal::new(0.0, (0.5 / PI).sqrt()).expect("valid normal");
    let m = ComplexMatrix::from_fn(n, |_, _| {
        Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))
    });
    complex_eigenvalues(&m, EIGEN_TOL)
}

/// Window produced by [`sample_ginibre`]: the disk of radius `κ√(N/π)`.
pub fn ginibre_window(n: usize, keep: f64) -> Result<Window> {
    Window::disk(keep * (n as f64 / PI).sqrt())
}

/// Ginibre eigenvalues inside the disk of radius `κ√(N/π)`.
pub fn sample_ginibre(n: usize, keep: f64, seed: SeedSpec) -> Result<PointSet> {
    check_keep(keep)?;
    let window = ginibre_window(n.max(1), keep)?;
    let ev = ginibre_spectrum(n, seed)?;
    let pts = ev
        .iter()
        .map(|z| [z.re, z.im])
        .filter(|p| window.contains_strict(p))
        .collect();
    PointSet::plane(window, pts)
}

fn default_rho() -> f64 {
    1.0
}

fn default_keep_line() -> f64 {
    DEFAULT_KEEP_LINE
}

fn default_keep_plane() -> f64 {
    DEFAULT_KEEP_PLANE
}

/// A model together with the parameters that fix its window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Poisson {
        #[serde(default = "default_rho")]
        rho: f64,
        window: Window,
    },
    MarkedPoisson {
        #[serde(default = "default_rho")]
        rho: f64,
        window: Window,
    },
    Matern {
        #[serde(default = "default_rho")]
        rho: f64,
        hard_core: f64,
        window: Window,
    },
    Renewal {
        waiting: WaitingSpec,
        length: f64,
    },
    BetaBulk {
        beta: u32,
        n: usize,
        #[serde(default = "default_keep_line")]
        keep: f64,
    },
    Ginibre {
        n: usize,
        #[serde(default = "default_keep_plane")]
        keep: f64,
    },
}

/// A sampled configuration, weighted for the marked Poisson model.
#[derive(Clone, Debug, PartialEq)]
pub enum Sample {
    Plain(PointSet),
    Weighted(WeightedPointSet),
}

impl Sample {
    pub fn points(&self) -> &PointSet {
        match self {
            Sample::Plain(p) => p,
            Sample::Weighted(w) => w.base(),
        }
    }

    pub fn weights(&self) -> Option<&[f64]> {
        match self {
            Sample::Plain(_) => None,
            Sample::Weighted(w) => Some(w.weights()),
        }
    }
}

impl ModelSpec {
    pub fn name(&self) -> String {
        match self {
            ModelSpec::Poisson { window, .. } => format!("poisson-{}d", window.dimension()),
            ModelSpec::MarkedPoisson { window, .. } => format!("marked-poisson-{}d", window.dimension()),
            ModelSpec::Matern { window, .. } => format!("matern-{}d", window.dimension()),
            ModelSpec::Renewal { waiting, .. } => format!("renewal-{}", waiting.kind()),
            ModelSpec::BetaBulk { beta, .. } => format!("beta-bulk-{beta}"),
            ModelSpec::Ginibre { .. } => "ginibre".into(),
        }
    }

    pub fn waiting(&self) -> Result<Option<WaitingDistribution>> {
        match self {
            ModelSpec::Renewal { waiting, .. } => Ok(Some(WaitingDistribution::try_from(waiting.clone())?)),
            _ => Ok(None),
        }
    }

    pub fn window(&self) -> Result<Window> {
        match self {
            ModelSpec::Poisson { window, .. }
            | ModelSpec::MarkedPoisson { window, .. }
            | ModelSpec::Matern { window, .. } => Ok(*window),
            ModelSpec::Renewal { length, .. } => Window::interval(*length),
            ModelSpec::BetaBulk { n, keep, .. } => beta_bulk_window(*n, *keep),
            ModelSpec::Ginibre { n, keep } => ginibre_window(*n, *keep),
        }
    }

    /// Expected point density.
    pub fn density(&self) -> f64 {
        match self {
            ModelSpec::Poisson { rho, .. } | ModelSpec::MarkedPoisson { rho, .. } | ModelSpec::Matern { rho, .. } => {
                *rho
            }
            _ => 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be positive, got {v}")))
            }
        };
        match self {
            ModelSpec::Poisson { rho, window } | ModelSpec::MarkedPoisson { rho, window } => {
                positive("model.rho", *rho)?;
                window.validate()
            }
            ModelSpec::Matern { rho, hard_core, window } => {
                positive("model.rho", *rho)?;
                positive("model.hard_core", *hard_core)?;
                window.validate()
            }
            ModelSpec::Renewal { length, .. } => {
                positive("model.length", *length)?;
                self.waiting().map(|_| ())
            }
            ModelSpec::BetaBulk { beta, n, keep } => {
                check_beta(*beta)?;
                check_keep(*keep)?;
                if *n < 16 {
                    return Err(Error::invalid("model.n", format!("need at least 16, got {n}")));
                }
                Ok(())
            }
            ModelSpec::Ginibre { n, keep } => {
                check_keep(*keep)?;
                if *n == 0 || *n > crate::linalg::DEFAULT_DIMENSION_CAP {
                    return Err(Error::invalid(
                        "model.n",
                        format!("must lie in 1..={}, got {n}", crate::linalg::DEFAULT_DIMENSION_CAP),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Draw one replica of `spec`.
pub fn sample_model(spec: &ModelSpec, seed: SeedSpec) -> Result<Sample> {
    spec.validate()?;
    Ok(match spec {
        ModelSpec::Poisson { rho, window } => Sample::Plain(sample_poisson(*rho, window, seed)?),
        ModelSpec::MarkedPoisson { rho, window } => {
            Sample::Weighted(mark_pm1(&sample_poisson(*rho, window, seed)?, seed))
        }
        ModelSpec::Matern { rho, hard_core, window } => {
            let outer = window.dilate(*hard_core);
            let parent = sample_poisson(*rho, &outer, seed)?;
            Sample::Plain(matern2_thin(&parent, *hard_core, seed)?.restrict(*window)?)
        }
        ModelSpec::Renewal { length, .. } => {
            let mu = spec.waiting()?.expect("renewal has a waiting law");
            Sample::Plain(sample_renewal(&mu, &Window::interval(*length)?, seed)?)
        }
        ModelSpec::BetaBulk { beta, n, keep } => Sample::Plain(sample_beta_bulk(*beta, *n, *keep, seed)?),
        ModelSpec::Ginibre { n, keep } => Sample::Plain(sample_ginibre(*n, *keep, seed)?),
    })
}
