//! Assembly parallelism, selected by the `WEARSIM_THREADS` environment variable.
//!
//! Element kernels run in parallel but their results are collected in element order and summed
//! sequentially, so matrices are bit-identical for every thread count. `WEARSIM_THREADS=1`
//! (the default) skips the thread pool entirely.

use std::sync::OnceLock;

use rayon::prelude::*;

pub const THREADS_ENV: &str = "WEARSIM_THREADS";

fn pool() -> Option<&'static rayon::ThreadPool> {
    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .unwrap_or(1);
        if threads <= 1 {
            return None;
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().ok()
    })
    .as_ref()
}

/// Number of assembly threads in use.
pub fn assembly_threads() -> usize {
    pool().map_or(1, |p| p.current_num_threads())
}

/// `(0..n).map(f).collect()`, evaluated on the assembly pool when one is configured.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match pool() {
        Some(p) => p.install(|| (0..n).into_par_iter().map(&f).collect()),
        None => (0..n).map(f).collect(),
    }
}
