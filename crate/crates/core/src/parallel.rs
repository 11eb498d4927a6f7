//! Worker-count control.
//!
//! Parallel work in this crate runs on the ambient rayon pool. Results never
//! depend on how many workers that pool has; these helpers only bound it.

use rayon::ThreadPoolBuilder;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "DIRCOV_THREADS";

/// Worker count from `DIRCOV_THREADS`, or the available parallelism.
pub fn configured_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `f` on a dedicated pool with exactly `threads` workers.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    let pool = ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("failed to build worker pool");
    pool.install(f)
}
