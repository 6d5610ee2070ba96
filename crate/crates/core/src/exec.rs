//! Ordered data-parallel map.
//!
//! With the `parallel` feature the closure runs on the current rayon pool,
//! otherwise sequentially. Either way the output keeps input order, so any
//! reduction done by the caller afterwards is bit-identical across thread
//! counts.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Work lists shorter than this are mapped inline; splitting them costs more
/// than it saves.
const PARALLEL_THRESHOLD: usize = 64;

#[cfg(feature = "parallel")]
pub fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if items.len() < PARALLEL_THRESHOLD {
        items.iter().map(f).collect()
    } else {
        items.par_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let _ = PARALLEL_THRESHOLD;
    items.iter().map(f).collect()
}

/// Like [`map_ordered`] but always distributes, regardless of list length.
/// Used for coarse work items (whole corpus entries, b-grid probes).
#[cfg(feature = "parallel")]
pub fn map_ordered_coarse<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_ordered_coarse<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Run `f` with at most `threads` worker threads. Without the `parallel`
/// feature everything is sequential already and `threads` is ignored.
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R: Send>(_threads: usize, f: impl FnOnce() -> R + Send) -> R {
    f()
}
