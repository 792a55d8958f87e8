use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Coords, PointSet, WeightedPointSet, Window};
use crate::grid::{Grid, GridFunction};

pub const DEFAULT_DIRECTIONS: usize = 64;
pub const DEFAULT_K_POINTS: usize = 512;
/// Upper bound on the automatic number of sub-frequencies per cell.
pub const MAX_CELL_SAMPLES: usize = 256;

const BLOCK: usize = 256;
const RESYNC: usize = 128;

/// A Dirac comb `Σ w_x δ_x` observed in a window; weights default to 1.
#[derive(Clone, Copy, Debug)]
pub struct Comb<'a> {
    pub window: Window,
    pub coords: &'a Coords,
    pub weights: Option<&'a [f64]>,
}

impl<'a> From<&'a PointSet> for Comb<'a> {
    fn from(p: &'a PointSet) -> Self {
        Comb {
            window: *p.window(),
            coords: p.coords(),
            weights: None,
        }
    }
}

impl<'a> From<&'a WeightedPointSet> for Comb<'a> {
    fn from(p: &'a WeightedPointSet) -> Self {
        Comb {
            window: *p.base().window(),
            coords: p.base().coords(),
            weights: Some(p.weights()),
        }
    }
}

impl Comb<'_> {
    fn total_weight(&self) -> f64 {
        match self.weights {
            Some(w) => w.iter().sum(),
            None => self.coords.len() as f64,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Taper {
    #[default]
    None,
    /// `√(8/3)·cos²(πx/L)`, normalised to unit mean square. 1D only.
    Cosine,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PeriodogramOptions {
    /// Subtract the window transform scaled by the empirical density, which
    /// removes the leakage of the central Bragg peak.
    pub centred: bool,
    /// Average each grid value over its cell `[k − Δ/2, k + Δ/2]`.
    pub cell_average: bool,
    /// Sub-frequencies per cell; by default about one per `1/extent`.
    pub cell_samples: Option<usize>,
    pub taper: Taper,
    /// Directions averaged by the radial 2D periodogram.
    pub directions: usize,
}

impl Default for PeriodogramOptions {
    fn default() -> Self {
        PeriodogramOptions {
            centred: false,
            cell_average: false,
            cell_samples: None,
            taper: Taper::None,
            directions: DEFAULT_DIRECTIONS,
        }
    }
}

/// `Σ_j w_j e^{−2πi k_n x_j}` for `k_n = k0 + n·dk`, `n < count`.
///
/// Phases advance by a per-point rotation and are recomputed exactly every
/// few steps, so the cost is a complex multiply per point and frequency.
pub fn fourier_sums(xs: &[f64], weights: Option<&[f64]>, k0: f64, dk: f64, count: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); count];
    let mut cur_re = [0.0; BLOCK];
    let mut cur_im = [0.0; BLOCK];
    let mut rot_re = [0.0; BLOCK];
    let mut rot_im = [0.0; BLOCK];
    for (b, chunk) in xs.chunks(BLOCK).enumerate() {
        let len = chunk.len();
        for (j, x) in chunk.iter().enumerate() {
            let (s, c) = (2.0 * PI * dk * x).sin_cos();
            rot_re[j] = c;
            rot_im[j] = -s;
        }
        for start in (0..count).step_by(RESYNC) {
            let k = k0 + start as f64 * dk;
            for (j, x) in chunk.iter().enumerate() {
                let w = weights.map_or(1.0, |w| w[b * BLOCK + j]);
                let (s, c) = (2.0 * PI * k * x).sin_cos();
                cur_re[j] = w * c;
                cur_im[j] = -w * s;
            }
            for slot in out[start..(start + RESYNC).min(count)].iter_mut() {
                let mut acc = [0.0; 8];
                let (re, im) = (&mut cur_re[..len], &mut cur_im[..len]);
                let (rr, ri) = (&rot_re[..len], &rot_im[..len]);
                let mut idx = 0;
                while idx + 4 <= len {
                    for l in 0..4 {
                        let j = idx + l;
                        acc[l] += re[j];
                        acc[4 + l] += im[j];
                        let nr = re[j] * rr[j] - im[j] * ri[j];
                        im[j] = re[j] * ri[j] + im[j] * rr[j];
                        re[j] = nr;
                    }
                    idx += 4;
                }
                for j in idx..len {
                    acc[0] += re[j];
                    acc[4] += im[j];
                    let nr = re[j] * rr[j] - im[j] * ri[j];
                    im[j] = re[j] * ri[j] + im[j] * rr[j];
                    re[j] = nr;
                }
                slot.re += (acc[0] + acc[1]) + (acc[2] + acc[3]);
                slot.im += (acc[4] + acc[5]) + (acc[6] + acc[7]);
            }
        }
    }
    out
}

/// Frequencies evaluated for each grid point, as arithmetic progressions.
struct Cells {
    /// `(k0, dk, count)` per grid point; a single entry covers the whole grid
    /// when there is no cell averaging.
    runs: Vec<(f64, f64, usize)>,
    per_point: usize,
}

fn cells(grid: &Grid, opts: &PeriodogramOptions, extent: f64) -> Result<Cells> {
    let width = grid.step();
    if !opts.cell_average || width == 0.0 {
        return Ok(Cells {
            runs: vec![(grid.min(), width, grid.len())],
            per_point: 1,
        });
    }
    let m = match opts.cell_samples {
        Some(0) => return Err(Error::invalid("cell_samples", "must be positive")),
        Some(m) => m,
        None => ((width * extent).ceil() as usize).clamp(1, MAX_CELL_SAMPLES),
    };
    let dk = width / m as f64;
    let runs = (0..grid.len())
        .map(|i| (grid.point(i) - 0.5 * width + 0.5 * dk, dk, m))
        .collect();
    Ok(Cells { runs, per_point: m })
}

fn taper_values(window: &Window, xs: &[f64], weights: Option<&[f64]>) -> Vec<f64> {
    let l = window.extent();
    let norm = (8.0f64 / 3.0).sqrt();
    xs.iter()
        .enumerate()
        .map(|(j, x)| weights.map_or(1.0, |w| w[j]) * norm * (PI * x / l).cos().powi(2))
        .collect()
}

/// Transform of the (tapered) window indicator at `k`.
fn window_transform_1d(window: &Window, taper: Taper, k: f64) -> f64 {
    let l = window.extent();
    let ft = |q: f64| window.fourier_transform(&[q]);
    match taper {
        Taper::None => ft(k),
        Taper::Cosine => (8.0f64 / 3.0).sqrt() * (0.5 * ft(k) + 0.25 * ft(k - 1.0 / l) + 0.25 * ft(k + 1.0 / l)),
    }
}

pub fn periodogram_1d<'a>(p: impl Into<Comb<'a>>, grid: &Grid) -> Result<GridFunction> {
    periodogram_1d_with(p, grid, &PeriodogramOptions::default())
}

/// `|Σ w_j e^{−2πikx_j}|²/L` on the grid (optionally centred, tapered and
/// cell-averaged).
pub fn periodogram_1d_with<'a>(p: impl Into<Comb<'a>>, grid: &Grid, opts: &PeriodogramOptions) -> Result<GridFunction> {
    let comb = p.into();
    let Coords::Line(xs) = comb.coords else {
        return Err(Error::DimensionMismatch { expected: 1, found: 2 });
    };
    let window = comb.window;
    let volume = window.volume();
    let cells = cells(grid, opts, window.extent())?;
    let tapered;
    let weights = match opts.taper {
        Taper::None => comb.weights,
        Taper::Cosine => {
            tapered = taper_values(&window, xs, comb.weights);
            Some(&tapered[..])
        }
    };
    let density = comb.total_weight() / volume;
    let mut values = Vec::with_capacity(grid.len());
    for &(k0, dk, count) in &cells.runs {
        let sums = fourier_sums(xs, weights, k0, dk, count);
        let mut acc = Vec::with_capacity(count);
        for (n, s) in sums.iter().enumerate() {
            let k = k0 + n as f64 * dk;
            let s = if opts.centred {
                s - density * window_transform_1d(&window, opts.taper, k)
            } else {
                *s
            };
            acc.push(s.norm_sqr() / volume);
        }
        if cells.per_point == 1 {
            values.extend(acc);
        } else {
            values.push(acc.iter().sum::<f64>() / count as f64);
        }
    }
    GridFunction::new(*grid, values)
}

pub fn periodogram_radial_2d<'a>(p: impl Into<Comb<'a>>, grid: &Grid) -> Result<GridFunction> {
    periodogram_radial_2d_with(p, grid, &PeriodogramOptions::default())
}

/// Periodogram at `|k|` averaged over `opts.directions` directions in `[0, π)`.
pub fn periodogram_radial_2d_with<'a>(
    p: impl Into<Comb<'a>>,
    grid: &Grid,
    opts: &PeriodogramOptions,
) -> Result<GridFunction> {
    let comb = p.into();
    let Coords::Plane(points) = comb.coords else {
        return Err(Error::DimensionMismatch { expected: 2, found: 1 });
    };
    if opts.taper != Taper::None {
        return Err(Error::invalid("taper", "tapering is only available in one dimension"));
    }
    if opts.directions == 0 {
        return Err(Error::invalid("directions", "must be positive"));
    }
    let window = comb.window;
    let volume = window.volume();
    let density = comb.total_weight() / volume;
    let cells = cells(grid, opts, window.extent())?;
    let total_freqs: usize = cells.runs.iter().map(|r| r.2).sum();
    let mut power = vec![0.0; total_freqs];
    let mut projected = vec![0.0; points.len()];
    for d in 0..opts.directions {
        let theta = (d as f64 + 0.5) * PI / opts.directions as f64;
        let (st, ct) = theta.sin_cos();
        for (u, q) in projected.iter_mut().zip(points) {
            *u = q[0] * ct + q[1] * st;
        }
        let mut offset = 0;
        for &(k0, dk, count) in &cells.runs {
            let sums = fourier_sums(&projected, comb.weights, k0, dk, count);
            for (n, s) in sums.iter().enumerate() {
                let k = k0 + n as f64 * dk;
                let s = if opts.centred {
                    s - density * window.fourier_transform(&[k * ct, k * st])
                } else {
                    *s
                };
                power[offset + n] += s.norm_sqr() / volume;
            }
            offset += count;
        }
    }
    let scale = 1.0 / opts.directions as f64;
    let values = power
        .chunks(cells.per_point)
        .map(|c| scale * c.iter().sum::<f64>() / c.len() as f64)
        .collect();
    GridFunction::new(*grid, values)
}
