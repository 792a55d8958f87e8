use crate::error::{Error, Result};
use crate::grid::GridFunction;

/// Half width of the neighbourhood used for the local median.
pub const BRAGG_HALF_WIDTH: f64 = 0.1;
/// A value this many times the local median is flagged.
pub const BRAGG_FACTOR: f64 = 10.0;

/// Pointwise mean of replica estimates with standard error `s/√n`.
pub fn average_replicas(runs: &[GridFunction]) -> Result<GridFunction> {
    let first = runs
        .first()
        .ok_or_else(|| Error::invalid("replicas", "nothing to average"))?;
    if runs.iter().any(|r| r.grid() != first.grid()) {
        return Err(Error::GridMismatch);
    }
    if runs.len() == 1 {
        return Ok(first.clone());
    }
    let n = runs.len() as f64;
    let len = first.len();
    let mut mean = vec![0.0; len];
    for r in runs {
        for (m, v) in mean.iter_mut().zip(r.values()) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; len];
    for r in runs {
        for ((s, v), m) in var.iter_mut().zip(r.values()).zip(&mean) {
            *s += (v - m) * (v - m);
        }
    }
    let stderr = var.iter().map(|s| (s / (n - 1.0)).sqrt() / n.sqrt()).collect();
    let total = runs.iter().map(GridFunction::n_replicas).sum();
    GridFunction::with_stderr(*first.grid(), mean, Some(stderr), total)
}

/// Grid abscissae where the value exceeds `factor` times the median over
/// `±half_width`. Adjacent flagged points are merged into their maximum.
pub fn bragg_candidates(est: &GridFunction, half_width: f64, factor: f64) -> Vec<f64> {
    let xs = est.abscissae();
    let vs = est.values();
    let mut flagged = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        let mut local: Vec<f64> = xs
            .iter()
            .zip(vs)
            .filter(|(y, _)| (*y - x).abs() <= half_width)
            .map(|(_, v)| *v)
            .collect();
        local.sort_by(f64::total_cmp);
        let median = local[local.len() / 2];
        if vs[i] > factor * median {
            flagged.push(i);
        }
    }
    let mut peaks: Vec<f64> = Vec::new();
    let mut run: Option<(usize, usize)> = None;
    for &i in &flagged {
        run = match run {
            Some((last, best)) if i == last + 1 => Some((i, if vs[i] > vs[best] { i } else { best })),
            Some((_, best)) => {
                peaks.push(xs[best]);
                Some((i, i))
            }
            None => Some((i, i)),
        };
    }
    if let Some((_, best)) = run {
        peaks.push(xs[best]);
    }
    peaks
}
