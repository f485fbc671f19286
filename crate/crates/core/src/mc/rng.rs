use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::error::{Error, Result};

/// Environment variable holding the worker thread count.
pub const WORKERS_ENV: &str = "SDMA_WORKERS";

/// Independent stream for trial `index` of a run keyed by `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Thread pool sized by `workers`, or by the worker environment variable,
/// or by rayon's default when neither is set.
pub fn worker_pool(workers: Option<usize>) -> Result<ThreadPool> {
    let from_env = match std::env::var(WORKERS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::Config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?,
        ),
        Err(_) => None,
    };
    let mut builder = ThreadPoolBuilder::new();
    if let Some(n) = workers.or(from_env) {
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}
