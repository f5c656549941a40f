//! Data-parallel helpers. With the `parallel` feature these fan out on rayon;
//! without it every helper runs sequentially with identical results.

#[cfg(feature = "parallel")]
use std::collections::HashMap;
#[cfg(feature = "parallel")]
use std::sync::{Arc, Mutex, OnceLock};

/// Whether this build can actually run work in parallel.
pub const ENABLED: bool = cfg!(feature = "parallel");

/// Split `0..len` into at most `workers` contiguous blocks whose sizes differ
/// by at most one, larger blocks first.
pub fn contiguous_blocks(len: usize, workers: usize) -> Vec<std::ops::Range<usize>> {
    let w = workers.max(1).min(len.max(1));
    let base = len / w;
    let rem = len % w;
    let mut out = Vec::with_capacity(w);
    let mut start = 0;
    for b in 0..w {
        let size = base + usize::from(b < rem);
        out.push(start..start + size);
        start += size;
    }
    out
}

#[cfg(feature = "parallel")]
fn pool(workers: usize) -> Arc<rayon::ThreadPool> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<rayon::ThreadPool>>>> = OnceLock::new();
    let mut pools = POOLS
        .get_or_init(Default::default)
        .lock()
        .unwrap_or_else(|e| e.into_inner());
    pools
        .entry(workers)
        .or_insert_with(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .thread_name(move |i| format!("evoforge-w{workers}-{i}"))
                    .build()
                    .expect("failed to build worker pool"),
            )
        })
        .clone()
}

/// Apply `f` to each block on a pool of exactly `workers` threads and return
/// the per-block results in block order.
pub fn map_blocks<T, F>(len: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync,
{
    let blocks = contiguous_blocks(len, workers);
    #[cfg(feature = "parallel")]
    {
        if workers > 1 && blocks.len() > 1 {
            use rayon::prelude::*;
            return pool(workers).install(|| blocks.into_par_iter().map(&f).collect());
        }
    }
    blocks.into_iter().map(f).collect()
}

/// `(0..n).map(f)` in index order, optionally on the global rayon pool.
pub fn map_indexed<T, F>(n: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    let _ = parallel;
    (0..n).map(f).collect()
}
