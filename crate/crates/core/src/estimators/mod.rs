//! Empirical autocorrelation (pair correlation) and diffraction
//! (periodogram) from finite samples, plus replica averaging.

mod average;
mod paircorr;
mod periodogram;

pub use average::{average_replicas, bragg_candidates, BRAGG_FACTOR, BRAGG_HALF_WIDTH};
pub use paircorr::{
    pair_correlation_1d, pair_correlation_1d_range, pair_correlation_radial_2d, pair_correlation_radial_2d_with,
    EdgeCorrection, DEFAULT_BINS,
};
pub use periodogram::{
    fourier_sums, periodogram_1d, periodogram_1d_with, periodogram_radial_2d, periodogram_radial_2d_with, Comb,
    PeriodogramOptions, Taper, DEFAULT_DIRECTIONS, DEFAULT_K_POINTS, MAX_CELL_SAMPLES,
};
