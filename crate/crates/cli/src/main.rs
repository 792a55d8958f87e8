//! `difflab`: sample point processes, tabulate theory, estimate and verify.
//!
//! Exit codes: 0 on success, 1 on usage or validation errors, 2 when a
//! verification runs but fails its tolerances.

mod figures;
mod model;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, CommandFactory, Parser, Subcommand};
use difflab::estimators::{EdgeCorrection, Taper, DEFAULT_DIRECTIONS};
use difflab::exec::{env_thread_cap, map_indexed, with_thread_cap, Execution};
use difflab::grid::Grid;
use difflab::io::{load_point_set, save_grid_function, save_point_set, PointFile};
use difflab::samplers::sample_model;
use difflab::seed::SeedSpec;
use difflab::verify::{estimate, model_theory, run_experiment, EstimatorConfig, ExperimentConfig, Stat};

use model::ModelArgs;

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Printed after configuration errors.
const CONFIG_SCHEMA: &str = r#"expected configuration (TOML, or the same keys as JSON):

[experiment]
name = "poisson-1d"
seed = 1            # master seed
replicas = 20
output_dir = "out"  # optional
threads = 4         # optional cap

[model]
kind = "poisson"    # poisson | marked_poisson | matern | renewal | beta_bulk | ginibre
rho = 1.0
window = "interval 10000"   # interval L | disk R | square S
# matern: hard_core = D
# renewal: length = L, waiting = { kind = "discrete", atoms = [["1/2", 0.5], ["3/2", 0.5]] }
# beta_bulk: beta = 2, n = 2048, keep = 0.1
# ginibre: n = 512, keep = 0.5

[estimator]
stat = "diffraction"        # diffraction | paircorr
grid = "0.1:5:50"           # min:max:n
centred = false
cell_average = false
directions = 64             # planar periodogram
taper = "none"              # none | cosine
edge_correction = "translation"   # translation | border

[verify]
tol_sup = 0.05
z_cap = 4.0
exclude = [[0.9, 1.1]]
auto_exclude = true
"#;

#[derive(Parser, Debug)]
#[command(
    name = "difflab",
    version,
    about = "Autocorrelation and diffraction of point processes"
)]
struct Cli {
    /// Cap on worker threads (overrides DIFFLAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw replicas of a model and write them as CSV.
    Sample(SampleArgs),
    /// Tabulate the autocorrelation or diffraction density of a model.
    Theory(TheoryArgs),
    /// Estimate pair correlation or diffraction from a point-set CSV.
    Estimate(EstimateArgs),
    /// Run a configured experiment and compare it with theory.
    Verify(VerifyArgs),
    /// Write the curve bundles and a plotting stub for the reference figures.
    ReproduceFigures(FiguresArgs),
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    replicas: usize,
    /// Output file, or a directory when `--replicas` is above 1.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct TheoryArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// autocorrelation (alias paircorr) or diffraction
    #[arg(long)]
    stat: String,
    /// min:max:n
    #[arg(long)]
    grid: Grid,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// Point-set CSV as written by `sample`.
    #[arg(long = "in")]
    input: PathBuf,
    /// paircorr or diffraction
    #[arg(long)]
    stat: Stat,
    /// min:max:n; for paircorr the bin centres
    #[arg(long)]
    grid: Grid,
    #[arg(long)]
    out: PathBuf,
    /// Subtract the expected window transform from the Fourier sum.
    #[arg(long)]
    centred: bool,
    /// Average the periodogram over each grid cell.
    #[arg(long)]
    cell_average: bool,
    #[arg(long)]
    cell_samples: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_DIRECTIONS)]
    directions: usize,
    #[arg(long, value_enum, default_value = "none")]
    taper: TaperArg,
    #[arg(long, value_enum, default_value = "translation")]
    edge_correction: EdgeArg,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum TaperArg {
    None,
    Cosine,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum EdgeArg {
    Translation,
    Border,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Experiment configuration (TOML, or JSON by extension).
    #[arg(long)]
    config: PathBuf,
    /// Also write the report JSON here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FiguresArgs {
    #[arg(long)]
    out: PathBuf,
}

/// Failure classes mapped to exit codes.
enum Outcome {
    Ok,
    VerificationFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            eprintln!();
            let _ = Cli::command().print_long_help();
            return ExitCode::from(1);
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    log::info!("difflab {VERSION}");
    let threads = cli.threads.or_else(env_thread_cap);
    match with_thread_cap(threads, || run(cli.command)) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                eprintln!("\n{CONFIG_SCHEMA}");
            }
            ExitCode::from(1)
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct ConfigError(difflab::Error);

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Sample(args) => sample(args),
        Command::Theory(args) => theory(args),
        Command::Estimate(args) => estimate_cmd(args),
        Command::Verify(args) => verify(args),
        Command::ReproduceFigures(args) => {
            log::info!("config: {args:?}");
            figures::write_all(&args.out)?;
            Ok(Outcome::Ok)
        }
    }
}

fn sample(args: SampleArgs) -> Result<Outcome> {
    log::info!("config: {args:?}");
    log::info!("master seed: {}", args.seed);
    if args.replicas == 0 {
        bail!("invalid replicas: must be at least 1");
    }
    let spec = args.model.to_spec(true)?;
    let seed = SeedSpec::new(args.seed, 0);
    let draws = map_indexed(args.replicas, Execution::Parallel, |i| {
        sample_model(&spec, seed.replica(i as u64))
    });
    if args.replicas == 1 {
        let s = draws.into_iter().next().expect("one replica")?;
        create_parent(&args.out)?;
        save_point_set(&args.out, s.points(), s.weights())?;
        log::info!("{} points -> {}", s.points().len(), args.out.display());
    } else {
        fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
        for (i, s) in draws.into_iter().enumerate() {
            let s = s?;
            save_point_set(&args.out.join(format!("replica_{i:04}.csv")), s.points(), s.weights())?;
        }
        log::info!("{} replicas -> {}", args.replicas, args.out.display());
    }
    Ok(Outcome::Ok)
}

fn theory(args: TheoryArgs) -> Result<Outcome> {
    log::info!("config: {args:?}");
    let stat: Stat = args.stat.parse()?;
    let spec = args.model.to_spec(false)?;
    let r_max = args.grid.max().abs().max(args.grid.min().abs()) + args.grid.step();
    let (auto, diffraction) = model_theory(&spec, r_max)?;
    let measure = match stat {
        Stat::Paircorr => auto,
        Stat::Diffraction => diffraction,
    };
    create_parent(&args.out)?;
    let mut csv = String::from("abscissa,value\n");
    let mut skipped = 0;
    for x in args.grid.points() {
        match measure.density(x) {
            Ok(v) => csv.push_str(&format!("{x},{v}\n")),
            Err(e) => {
                log::debug!("{x}: {e}");
                skipped += 1;
            }
        }
    }
    if skipped > 0 {
        log::warn!("{skipped} grid points lie on atoms or singularities and were left out");
    }
    fs::write(&args.out, csv)?;
    let atoms = measure.pure_point.atoms_in(args.grid.min(), args.grid.max());
    let sidecar = args.out.with_extension("atoms.json");
    let json = serde_json::json!({
        "label": measure.label,
        "pure_point": measure.pure_point,
        "atoms": atoms,
    });
    fs::write(&sidecar, serde_json::to_string_pretty(&json)? + "\n")?;
    log::info!(
        "{} -> {} (atoms in {})",
        measure.label,
        args.out.display(),
        sidecar.display()
    );
    Ok(Outcome::Ok)
}

fn estimate_cmd(args: EstimateArgs) -> Result<Outcome> {
    log::info!("config: {args:?}");
    let file = load_point_set(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let mut cfg = EstimatorConfig::new(args.stat, args.grid);
    cfg.centred = args.centred;
    cfg.cell_average = args.cell_average;
    cfg.cell_samples = args.cell_samples;
    cfg.directions = args.directions;
    cfg.taper = match args.taper {
        TaperArg::None => Taper::None,
        TaperArg::Cosine => Taper::Cosine,
    };
    cfg.edge_correction = match args.edge_correction {
        EdgeArg::Translation => EdgeCorrection::Translation,
        EdgeArg::Border => EdgeCorrection::Border,
    };
    let weights = match &file {
        PointFile::Plain(_) => None,
        PointFile::Weighted(w) => Some(w.weights()),
    };
    let est = estimate(file.points(), weights, &cfg)?;
    create_parent(&args.out)?;
    save_grid_function(&args.out, &est)?;
    log::info!(
        "{} from {} points -> {}",
        args.stat,
        file.points().len(),
        args.out.display()
    );
    Ok(Outcome::Ok)
}

fn verify(args: VerifyArgs) -> Result<Outcome> {
    let cfg = ExperimentConfig::load(&args.config).map_err(|e| match e {
        difflab::Error::Io(io) => anyhow::Error::new(io).context(format!("reading {}", args.config.display())),
        other => ConfigError(other).into(),
    })?;
    log::info!("config:\n{}", cfg.to_toml()?);
    log::info!("master seed: {}", cfg.experiment.seed);
    let report = with_thread_cap(cfg.experiment.threads, || run_experiment(&cfg))?;
    let json = serde_json::to_string_pretty(&report)? + "\n";
    if let Some(path) = &args.report {
        create_parent(path)?;
        fs::write(path, &json)?;
    }
    print!("{json}");
    Ok(if report.pass {
        Outcome::Ok
    } else {
        log::warn!("verification failed");
        Outcome::VerificationFailed
    })
}

fn create_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}
