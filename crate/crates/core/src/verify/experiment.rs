use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::estimators::{
    average_replicas, bragg_candidates, pair_correlation_1d_range, pair_correlation_radial_2d_with,
    periodogram_1d_with, periodogram_radial_2d_with, Comb, PeriodogramOptions, BRAGG_FACTOR, BRAGG_HALF_WIDTH,
};
use crate::exec::{env_thread_cap, map_indexed, with_thread_cap, Execution};
use crate::geom::PointSet;
use crate::grid::GridFunction;
use crate::io::save_grid_function;
use crate::measure::{PurePointPart, SpectralMeasure};
use crate::samplers::{sample_model, ModelSpec};
use crate::seed::SeedSpec;
use crate::theory::{
    default_nu_step, dyson_diffraction_curve, dyson_pair_curve, dyson_theory, ginibre_curve, ginibre_theory,
    marked_poisson_theory, poisson_theory, renewal_diffraction_curve, renewal_nu_density, renewal_pure_point,
    renewal_theory, CellMeasure, NuDensity, TheoryCurve,
};

use super::compare::{compare_with, CompareOptions, ComparisonReport};
use super::config::{EstimatorConfig, ExperimentConfig, Stat};

/// Apply the configured estimator to one point set (weights only for the
/// periodogram).
pub fn estimate(points: &PointSet, weights: Option<&[f64]>, cfg: &EstimatorConfig) -> Result<GridFunction> {
    let grid = &cfg.grid;
    match cfg.stat {
        Stat::Paircorr => {
            if weights.is_some() {
                return Err(Error::invalid(
                    "stat",
                    "pair correlation ignores weights; use diffraction",
                ));
            }
            let half = 0.5 * grid.step();
            if grid.len() < 2 {
                return Err(Error::invalid("grid", "pair correlation needs at least two bins"));
            }
            let (lo, hi) = ((grid.min() - half).max(0.0), grid.max() + half);
            match points.dimension() {
                1 => pair_correlation_1d_range(points, lo, hi, grid.len()),
                _ => pair_correlation_radial_2d_with(points, lo, hi, grid.len(), cfg.edge_correction),
            }
        }
        Stat::Diffraction => {
            let opts = PeriodogramOptions {
                centred: cfg.centred,
                cell_average: cfg.cell_average,
                cell_samples: cfg.cell_samples,
                taper: cfg.taper,
                directions: cfg.directions,
            };
            let comb = Comb {
                window: *points.window(),
                coords: points.coords(),
                weights,
            };
            match points.dimension() {
                1 => periodogram_1d_with(comb, grid, &opts),
                _ => periodogram_radial_2d_with(comb, grid, &opts),
            }
        }
    }
}

/// One estimate per replica, in replica order.
pub fn estimate_replicas(
    model: &ModelSpec,
    cfg: &EstimatorConfig,
    master_seed: u64,
    replicas: usize,
    exec: Execution,
) -> Result<Vec<GridFunction>> {
    let seed = SeedSpec::new(master_seed, 0);
    map_indexed(replicas, exec, |i| {
        let sample = sample_model(model, seed.replica(i as u64))?;
        estimate(sample.points(), sample.weights(), cfg)
    })
    .into_iter()
    .collect()
}

/// Theory curve matching the estimator's normalisation.
pub fn theory_curve(model: &ModelSpec, cfg: &EstimatorConfig) -> Result<TheoryCurve> {
    let k_max = cfg.grid.max().abs().max(cfg.grid.min().abs()) + cfg.grid.step();
    match (model, cfg.stat) {
        (ModelSpec::Poisson { .. }, Stat::Paircorr) => Ok(TheoryCurve::constant("poisson g = 1", 1.0)),
        (ModelSpec::Poisson { rho, .. } | ModelSpec::MarkedPoisson { rho, .. }, Stat::Diffraction) => {
            Ok(TheoryCurve::constant("flat diffraction rho", *rho))
        }
        (ModelSpec::MarkedPoisson { .. }, Stat::Paircorr) => Err(Error::invalid(
            "estimator.stat",
            "pair correlation is not defined for the weighted comb",
        )),
        (ModelSpec::Matern { .. }, _) => Err(Error::invalid(
            "model",
            "the Matérn process has no closed-form theory here; use `estimate` instead of `verify`",
        )),
        (ModelSpec::Renewal { .. }, Stat::Diffraction) => {
            let mu = model.waiting()?.expect("renewal law");
            Ok(renewal_diffraction_curve(&mu, k_max))
        }
        (ModelSpec::Renewal { .. }, Stat::Paircorr) => {
            let mu = model.waiting()?.expect("renewal law");
            let r_max = cfg.grid.max() + cfg.grid.step();
            match renewal_nu_density(&mu, r_max, default_nu_step(r_max))?.nu {
                NuDensity::Grid(g) => Ok(TheoryCurve::new(
                    "renewal density nu",
                    move |r| {
                        g.interpolate(r.abs())
                            .ok_or_else(|| Error::invalid("r", format!("{r} outside the solved range")))
                    },
                    Vec::new(),
                )),
                NuDensity::Atoms(_) => Err(Error::invalid(
                    "estimator.stat",
                    "a discrete waiting law has an atomic autocorrelation; compare the diffraction instead",
                )),
            }
        }
        (ModelSpec::BetaBulk { beta, .. }, Stat::Paircorr) => dyson_pair_curve(*beta),
        (ModelSpec::BetaBulk { beta, .. }, Stat::Diffraction) => dyson_diffraction_curve(*beta),
        (ModelSpec::Ginibre { .. }, _) => Ok(ginibre_curve()),
    }
}

/// Autocorrelation and diffraction measures of `model`; renewal
/// densities are tabulated up to `r_max`.
pub fn model_theory(model: &ModelSpec, r_max: f64) -> Result<(SpectralMeasure, SpectralMeasure)> {
    match model {
        ModelSpec::Poisson { rho, .. } => poisson_theory(*rho),
        ModelSpec::MarkedPoisson { rho, .. } => marked_poisson_theory(*rho),
        ModelSpec::Matern { .. } => Err(Error::invalid(
            "model",
            "the Matérn process has no closed-form autocorrelation or diffraction here",
        )),
        ModelSpec::Renewal { .. } => renewal_theory(&model.waiting()?.expect("renewal law"), r_max),
        ModelSpec::BetaBulk { beta, .. } => dyson_theory(*beta),
        ModelSpec::Ginibre { .. } => Ok(ginibre_theory()),
    }
}

/// How grid cells are averaged for this model and estimator.
fn cell_measure(model: &ModelSpec, cfg: &EstimatorConfig) -> Result<Option<CellMeasure>> {
    let dim = model.window()?.dimension();
    Ok(match cfg.stat {
        Stat::Paircorr if dim == 2 => Some(CellMeasure::Radial),
        Stat::Paircorr => Some(CellMeasure::Uniform),
        Stat::Diffraction if cfg.cell_average => Some(CellMeasure::Uniform),
        Stat::Diffraction => None,
    })
}

/// Default exclusion bands: `|k| < 8/L` for raw periodograms of models with a
/// central Bragg peak, ±0.05 around lattice Bragg positions, and the β = 4
/// singularity.
pub fn auto_exclusions(model: &ModelSpec, cfg: &EstimatorConfig) -> Result<Vec<(f64, f64)>> {
    let mut bands = Vec::new();
    if cfg.stat != Stat::Diffraction {
        return Ok(bands);
    }
    let central_peak = !matches!(model, ModelSpec::MarkedPoisson { .. });
    if central_peak && !cfg.centred {
        let k_min = 8.0 / model.window()?.extent();
        bands.push((-k_min, k_min));
    }
    if let ModelSpec::Renewal { .. } = model {
        let mu = model.waiting()?.expect("renewal law");
        if let PurePointPart::LatticeComb { spacing, .. } = renewal_pure_point(&mu) {
            let lo = cfg.grid.min() - cfg.grid.step() - 0.05;
            let hi = cfg.grid.max() + cfg.grid.step() + 0.05;
            let first = (lo / spacing).ceil() as i64;
            let last = (hi / spacing).floor() as i64;
            bands.extend((first..=last).map(|j| {
                let k = j as f64 * spacing;
                (k - 0.05, k + 0.05)
            }));
        }
    }
    if let ModelSpec::BetaBulk { beta: 4, .. } = model {
        bands.push((-1.1, -0.9));
        bands.push((0.9, 1.1));
    }
    Ok(bands)
}

/// Run with the configured thread cap (or `DIFFLAB_THREADS`).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ComparisonReport> {
    let cap = cfg.experiment.threads.or_else(env_thread_cap);
    with_thread_cap(cap, || run_experiment_with(cfg, Execution::Parallel))
}

/// Sample, estimate, average, compare, and write outputs if requested.
pub fn run_experiment_with(cfg: &ExperimentConfig, exec: Execution) -> Result<ComparisonReport> {
    cfg.validate()?;
    let start = Instant::now();
    let exp = &cfg.experiment;
    let theory = theory_curve(&cfg.model, &cfg.estimator)?;
    let runs = estimate_replicas(&cfg.model, &cfg.estimator, exp.seed, exp.replicas, exec)?;
    let mean = average_replicas(&runs)?;

    let mut exclude: Vec<(f64, f64)> = cfg.verify.exclude.iter().map(|b| (b[0], b[1])).collect();
    if cfg.verify.auto_exclude {
        exclude.extend(auto_exclusions(&cfg.model, &cfg.estimator)?);
    }
    let opts = CompareOptions {
        exclude,
        tol_sup: cfg.verify.tol_sup,
        z_cap: cfg.verify.z_cap,
        cell: cell_measure(&cfg.model, &cfg.estimator)?,
        stderr_floor: cfg.verify.stderr_floor,
    };
    let mut report = compare_with(&mean, &theory, &opts)?;
    report.model = cfg.model.name();
    report.stat = cfg.estimator.stat.to_string();
    report.seed = exp.seed;
    if cfg.estimator.stat == Stat::Diffraction {
        report.bragg_candidates = Some(bragg_candidates(&mean, BRAGG_HALF_WIDTH, BRAGG_FACTOR));
    }
    if let Some(dir) = &exp.output_dir {
        write_outputs(dir, &runs, &mean, &theory, &opts)?;
    }
    report.runtime_s = start.elapsed().as_secs_f64();
    if let Some(dir) = &exp.output_dir {
        let json = serde_json::to_string_pretty(&report).map_err(|e| Error::Parse(e.to_string()))?;
        fs::write(dir.join("report.json"), json + "\n")?;
    }
    log::info!(
        "{} {}: sup_dev = {:.4}, max |z| = {:?}, pass = {}",
        report.model,
        report.stat,
        report.metrics.sup_dev,
        report.metrics.max_abs_z,
        report.pass
    );
    Ok(report)
}

fn write_outputs(
    dir: &Path,
    runs: &[GridFunction],
    mean: &GridFunction,
    theory: &TheoryCurve,
    opts: &CompareOptions,
) -> Result<()> {
    let replica_dir = dir.join("replicas");
    fs::create_dir_all(&replica_dir)?;
    for (i, r) in runs.iter().enumerate() {
        save_grid_function(&replica_dir.join(format!("estimate_{i:04}.csv")), r)?;
    }
    save_grid_function(&dir.join("estimate.csv"), mean)?;
    let half = opts.cell.map_or(0.0, |_| 0.5 * mean.grid().step());
    let mut out = std::io::BufWriter::new(fs::File::create(dir.join("theory.csv"))?);
    writeln!(out, "abscissa,value")?;
    for x in mean.abscissae() {
        let v = match opts.cell {
            Some(m) if half > 0.0 => theory.cell_average(x - half, x + half, m),
            _ => theory.eval(x),
        };
        // points on singularities or Bragg positions are simply omitted
        if let Ok(v) = v {
            writeln!(out, "{x},{v}")?;
        }
    }
    out.flush()?;
    Ok(())
}
