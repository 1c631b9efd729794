//! Index-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) work runs on rayon; `workers`
//! selects a dedicated pool size, `Some(1)` forces the sequential path.
//! Output order always follows the index, so callers can reduce
//! deterministically regardless of how many threads ran.

/// Whether the crate was built with rayon support.
pub const PARALLEL: bool = cfg!(feature = "parallel");

pub fn map_indexed<T, F>(n: usize, workers: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers != Some(1) {
        use rayon::prelude::*;
        let run = || (0..n).into_par_iter().map(&f).collect::<Vec<T>>();
        let pool = workers.and_then(|k| rayon::ThreadPoolBuilder::new().num_threads(k).build().ok());
        return match pool {
            Some(pool) => pool.install(run),
            None => run(),
        };
    }
    #[cfg(not(feature = "parallel"))]
    let _ = workers;
    (0..n).map(f).collect()
}
