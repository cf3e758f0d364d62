//! Execution strategy for embarrassingly parallel scans. Everything in
//! this crate that loops over independent instances funnels through
//! [`map_ordered`], so the sequential fallback and the thread-pool
//! path stay behaviorally identical.

use serde::Serialize;

/// How a batch of independent computations is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parallelism {
    Sequential,
    Parallel,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }
}

/// Maps `f` over `items`, preserving input order in the output.
///
/// With the `parallel` feature disabled, `Parallelism::Parallel`
/// quietly degrades to the sequential path rather than erroring, so
/// callers never need to gate on the feature themselves.
pub fn map_ordered<T, U, F>(mode: Parallelism, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    match mode {
        Parallelism::Sequential => items.into_iter().map(f).collect(),
        Parallelism::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                items.into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.into_iter().map(f).collect()
            }
        }
    }
}

/// Caps the global worker pool at `threads`. Returns false when the
/// pool was already initialized (first caller wins) or when built
/// without the `parallel` feature.
pub fn configure_threads(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}
