//! Replica-level execution: rayon when the `parallel` feature is on,
//! a plain loop otherwise. Results always come back in replica order.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Evaluate `f(0..n)` and collect the results in index order.
pub fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Run `job` with at most `threads` worker threads (ignored without the
/// `parallel` feature or when `threads` is `None`).
pub fn with_thread_cap<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads.filter(|n| *n > 0) {
        match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => return pool.install(job),
            Err(e) => log::warn!("could not build a {n}-thread pool: {e}"),
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    job()
}

/// Thread cap from the `DIFFLAB_THREADS` environment variable.
pub fn env_thread_cap() -> Option<usize> {
    std::env::var("DIFFLAB_THREADS").ok()?.trim().parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree_and_keep_order() {
        let seq = map_indexed(100, Execution::Sequential, |i| i * i);
        let par = map_indexed(100, Execution::Parallel, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[7], 49);
        assert_eq!(
            with_thread_cap(Some(2), || map_indexed(5, Execution::Parallel, |i| i)),
            vec![0, 1, 2, 3, 4]
        );
    }
}
