//! Sample summaries, distribution tests and the experiment drivers built on them.

pub mod ecf;
pub mod ks;
pub mod selfsim;
pub mod stable_check;
pub mod summary;
pub mod sweep;

pub use ecf::{ecf_deviations, ecf_test, EcfDeviation};
pub use ks::{kolmogorov_p_value, ks_one_sample, ks_two_sample, normal_cdf, KsResult};
pub use summary::{moment_estimate, sample_covariance, NeumaierSum, SampleSummary};
pub use sweep::{convergence_sweep, Check, ConvergenceReport, ReportEntry, Verdict};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// `f(0), …, f(n−1)` on a pool of `threads` workers (0: available
/// parallelism). Results come back in index order, so the output does not
/// depend on the pool size.
pub fn parallel_map<T, F>(threads: usize, n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    pool.install(|| (0..n).into_par_iter().map(&f).collect())
}
