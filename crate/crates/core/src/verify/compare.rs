use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::theory::{CellMeasure, TheoryCurve};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub sup_dev: f64,
    pub l2_dev: f64,
    /// Absent when the estimate carries no standard errors.
    pub max_abs_z: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub sup: f64,
    pub z: f64,
}

/// Outcome of one comparison. `pass` holds iff `sup_dev ≤ tolerances.sup`
/// and, when standard errors exist, `max_abs_z ≤ tolerances.z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub model: String,
    pub stat: String,
    pub grid: GridSummary,
    pub excluded: Vec<[f64; 2]>,
    pub metrics: Metrics,
    pub tolerances: Tolerances,
    pub replicas: usize,
    pub seed: u64,
    pub pass: bool,
    pub runtime_s: f64,
    /// Grid points actually compared.
    pub points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bragg_candidates: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareOptions {
    /// Open bands `(a, b)` left out of the comparison.
    pub exclude: Vec<(f64, f64)>,
    pub tol_sup: f64,
    pub z_cap: f64,
    /// Compare against the theory averaged over each grid cell
    /// `[x − Δ/2, x + Δ/2]` instead of its point value.
    pub cell: Option<CellMeasure>,
    /// Lower bound on the standard error used in z-scores.
    pub stderr_floor: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            exclude: Vec::new(),
            tol_sup: super::DEFAULT_TOL_SUP,
            z_cap: super::DEFAULT_Z_CAP,
            cell: None,
            stderr_floor: 0.0,
        }
    }
}

/// Pointwise comparison with the given exclusion bands and tolerances.
pub fn compare(
    est: &GridFunction,
    theory: &TheoryCurve,
    exclude: &[(f64, f64)],
    tol_sup: f64,
    z_cap: f64,
) -> Result<ComparisonReport> {
    compare_with(
        est,
        theory,
        &CompareOptions {
            exclude: exclude.to_vec(),
            tol_sup,
            z_cap,
            ..Default::default()
        },
    )
}

pub fn compare_with(est: &GridFunction, theory: &TheoryCurve, opts: &CompareOptions) -> Result<ComparisonReport> {
    if !(opts.tol_sup >= 0.0) || !(opts.z_cap > 0.0) {
        return Err(Error::invalid("tolerances", "tol_sup must be >= 0 and z_cap > 0"));
    }
    for &(a, b) in &opts.exclude {
        if !(a < b) {
            return Err(Error::invalid("exclude", format!("band ({a}, {b}) is empty")));
        }
    }
    let grid = est.grid();
    let half = match opts.cell {
        Some(_) => 0.5 * grid.step(),
        None => 0.0,
    };
    let excluded = |x: f64| {
        opts.exclude.iter().any(|&(a, b)| {
            if half > 0.0 {
                x + half > a && x - half < b
            } else {
                a < x && x < b
            }
        })
    };
    let mut sup: f64 = 0.0;
    let mut sq = 0.0;
    let mut zmax: f64 = 0.0;
    let mut count = 0;
    for (i, (&x, &v)) in est.abscissae().iter().zip(est.values()).enumerate() {
        if excluded(x) {
            continue;
        }
        let t = match opts.cell {
            Some(m) if half > 0.0 => theory.cell_average(x - half, x + half, m)?,
            _ => theory.eval(x)?,
        };
        let dev = v - t;
        sup = sup.max(dev.abs());
        sq += dev * dev;
        if let Some(se) = est.stderr() {
            let s = se[i].max(opts.stderr_floor);
            let z = if s > 0.0 {
                dev.abs() / s
            } else if dev == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            zmax = zmax.max(z);
        }
        count += 1;
    }
    if count == 0 {
        return Err(Error::AllPointsExcluded);
    }
    let max_abs_z = est.stderr().map(|_| zmax);
    let pass = sup <= opts.tol_sup && max_abs_z.is_none_or(|z| z <= opts.z_cap);
    Ok(ComparisonReport {
        model: theory.label.clone(),
        stat: String::new(),
        grid: GridSummary {
            min: grid.min(),
            max: grid.max(),
            n: grid.len(),
        },
        excluded: opts.exclude.iter().map(|&(a, b)| [a, b]).collect(),
        metrics: Metrics {
            sup_dev: sup,
            l2_dev: (sq / count as f64).sqrt(),
            max_abs_z,
        },
        tolerances: Tolerances {
            sup: opts.tol_sup,
            z: opts.z_cap,
        },
        replicas: est.n_replicas(),
        seed: 0,
        pass,
        runtime_s: 0.0,
        points: count,
        bragg_candidates: None,
    })
}
