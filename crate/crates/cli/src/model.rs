use anyhow::{anyhow, bail, Result};
use clap::Args;
use difflab::geom::Window;
use difflab::samplers::{ModelSpec, DEFAULT_KEEP_LINE, DEFAULT_KEEP_PLANE};
use difflab::specfun::{AtomLocation, WaitingSpec};

/// Model selection shared by `sample` and `theory`.
#[derive(Args, Debug)]
pub struct ModelArgs {
    /// poisson, marked-poisson, matern, renewal, dyson (alias beta-bulk) or ginibre
    #[arg(long)]
    pub model: String,
    /// `interval L`, `disk R` or `square S` (also `kind:size`)
    #[arg(long)]
    pub window: Option<Window>,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// Matérn hard-core distance.
    #[arg(long)]
    pub hard_core: Option<f64>,
    /// Renewal waiting law: `exponential[:rate]`, `gamma:shape[:rate]`,
    /// `uniform:a:b` or `discrete:x@p,x@p` with `x` a number or `p/q`.
    #[arg(long)]
    pub waiting: Option<String>,
    #[arg(long)]
    pub beta: Option<u32>,
    /// Matrix size for dyson and ginibre.
    #[arg(long)]
    pub n: Option<usize>,
    /// Kept fraction of the spectrum radius.
    #[arg(long)]
    pub keep: Option<f64>,
}

impl ModelArgs {
    /// Build the model. With `need_window` unset the window of the
    /// windowed models defaults to the unit interval, which theory ignores.
    pub fn to_spec(&self, need_window: bool) -> Result<ModelSpec> {
        let window = || -> Result<Window> {
            match self.window {
                Some(w) => Ok(w),
                None if need_window => bail!("invalid --window: required for model `{}`", self.model),
                None => Ok(Window::interval(1.0)?),
            }
        };
        let spec = match self.model.as_str() {
            "poisson" => ModelSpec::Poisson {
                rho: self.rho,
                window: window()?,
            },
            "marked-poisson" | "marked_poisson" => ModelSpec::MarkedPoisson {
                rho: self.rho,
                window: window()?,
            },
            "matern" => ModelSpec::Matern {
                rho: self.rho,
                hard_core: self
                    .hard_core
                    .ok_or_else(|| anyhow!("invalid --hard-core: required for matern"))?,
                window: window()?,
            },
            "renewal" => {
                let w = window()?;
                if w.dimension() != 1 {
                    bail!("invalid --window: renewal processes live on an interval");
                }
                ModelSpec::Renewal {
                    waiting: parse_waiting(self.waiting.as_deref().unwrap_or("exponential"))?,
                    length: w.extent(),
                }
            }
            "dyson" | "beta-bulk" | "beta_bulk" => ModelSpec::BetaBulk {
                beta: self
                    .beta
                    .ok_or_else(|| anyhow!("invalid --beta: required for dyson (1, 2 or 4)"))?,
                n: self.n.unwrap_or(2048),
                keep: self.keep.unwrap_or(DEFAULT_KEEP_LINE),
            },
            "ginibre" => ModelSpec::Ginibre {
                n: self.n.unwrap_or(512),
                keep: self.keep.unwrap_or(DEFAULT_KEEP_PLANE),
            },
            other => bail!(
                "invalid --model: unknown model `{other}` \
                 (poisson, marked-poisson, matern, renewal, dyson, ginibre)"
            ),
        };
        if self.window.is_some() && matches!(spec, ModelSpec::BetaBulk { .. } | ModelSpec::Ginibre { .. }) {
            log::warn!("--window is ignored: the window follows from --n and --keep");
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn number(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| anyhow!("invalid --waiting: bad {what} `{s}`"))
}

pub fn parse_waiting(s: &str) -> Result<WaitingSpec> {
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    let fields: Vec<&str> = if rest.is_empty() {
        Vec::new()
    } else {
        rest.split(':').collect()
    };
    Ok(match (kind.trim(), fields.as_slice()) {
        ("exponential", []) => WaitingSpec::Exponential { rate: 1.0 },
        ("exponential", [rate]) => WaitingSpec::Exponential {
            rate: number(rate, "rate")?,
        },
        ("gamma", [shape]) => WaitingSpec::Gamma {
            shape: number(shape, "shape")?,
            rate: None,
        },
        ("gamma", [shape, rate]) => WaitingSpec::Gamma {
            shape: number(shape, "shape")?,
            rate: Some(number(rate, "rate")?),
        },
        ("uniform", [a, b]) => WaitingSpec::Uniform {
            a: number(a, "bound")?,
            b: number(b, "bound")?,
        },
        ("discrete", [atoms]) => WaitingSpec::Discrete {
            atoms: atoms
                .split(',')
                .map(|atom| {
                    let (x, p) = atom
                        .split_once('@')
                        .ok_or_else(|| anyhow!("invalid --waiting: atom `{atom}` is not x@p"))?;
                    let x = x.trim();
                    let loc = if x.contains('/') {
                        AtomLocation::Exact(x.to_string())
                    } else {
                        AtomLocation::Number(number(x, "location")?)
                    };
                    Ok((loc, number(p, "probability")?))
                })
                .collect::<Result<_>>()?,
        },
        _ => bail!("invalid --waiting: cannot read `{s}`"),
    })
}
