//! Curve bundles for the two reference figures: the Dyson pair correlation
//! and diffraction for β ∈ {1, 2, 4}, and the Ginibre radial profile.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use difflab::grid::Grid;
use difflab::theory::{dyson_f, dyson_h, ginibre_g};

pub const BETAS: [u32; 3] = [1, 2, 4];
/// r for the left panel of figure 1.
pub const FIG1_R: &str = "0:4:401";
/// k for the right panel of figure 1; the β = 4 curve is undefined at ±1.
pub const FIG1_K: &str = "-3:3:601";
pub const FIG2_T: &str = "0:2.5:251";

const PLOT_STUB: &str = r#"{
  "$schema": "https://vega.github.io/schema/vega-lite/v5.json",
  "description": "Dyson pair correlation and diffraction for beta = 1, 2, 4; Ginibre radial profile",
  "hconcat": [
    {
      "title": "1 - f_beta(r)",
      "data": {"url": "fig1_autocorrelation.csv"},
      "mark": "line",
      "encoding": {
        "x": {"field": "r", "type": "quantitative"},
        "y": {"field": "value", "type": "quantitative"},
        "color": {"field": "beta", "type": "nominal"}
      }
    },
    {
      "title": "h_beta(k)",
      "data": {"url": "fig1_diffraction.csv"},
      "mark": {"type": "line", "clip": true},
      "encoding": {
        "x": {"field": "k", "type": "quantitative"},
        "y": {"field": "value", "type": "quantitative", "scale": {"domain": [0, 2]}},
        "color": {"field": "beta", "type": "nominal"}
      }
    },
    {
      "title": "1 - exp(-pi t^2)",
      "data": {"url": "fig2_ginibre.csv"},
      "mark": "line",
      "encoding": {
        "x": {"field": "t", "type": "quantitative"},
        "y": {"field": "value", "type": "quantitative"}
      }
    }
  ]
}
"#;

/// Rows `beta,x,value`; points where the curve is undefined get an empty
/// value so plots break the line there.
fn dyson_bundle(header: &str, grid: &str, f: impl Fn(u32, f64) -> Option<f64>) -> Result<String> {
    let grid: Grid = grid.parse()?;
    let mut csv = format!("beta,{header},value\n");
    for beta in BETAS {
        for x in grid.points() {
            match f(beta, x) {
                Some(v) => writeln!(csv, "{beta},{x},{v}")?,
                None => writeln!(csv, "{beta},{x},")?,
            }
        }
    }
    Ok(csv)
}

pub fn write_all(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let left = dyson_bundle("r", FIG1_R, |b, r| dyson_f(b, r).ok().map(|f| 1.0 - f))?;
    // the β = 4 singularity is left as a gap; values are kept as computed
    // and clipping is left to the plot
    let right = dyson_bundle("k", FIG1_K, |b, k| dyson_h(b, k).ok())?;
    let t: Grid = FIG2_T.parse()?;
    let mut fig2 = String::from("t,value\n");
    for x in t.points() {
        writeln!(fig2, "{x},{}", ginibre_g(x)?)?;
    }
    fs::write(dir.join("fig1_autocorrelation.csv"), left)?;
    fs::write(dir.join("fig1_diffraction.csv"), right)?;
    fs::write(dir.join("fig2_ginibre.csv"), fig2)?;
    fs::write(dir.join("figures.vl.json"), PLOT_STUB)?;
    log::info!("figure bundles -> {}", dir.display());
    Ok(())
}
