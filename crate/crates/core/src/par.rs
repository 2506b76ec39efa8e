//! Data-parallel helpers. With the `parallel` feature disabled every helper
//! degrades to a plain sequential loop; results are identical either way.

/// Evaluates `f(0..n)` and returns the results in index order.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Runs `job` with at most `workers` threads. `workers <= 1` (or a build
/// without the `parallel` feature) runs on the calling thread, and nested
/// helpers then stay sequential.
pub fn with_workers<T, F>(workers: usize, job: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    #[cfg(feature = "parallel")]
    {
        let threads = workers.max(1);
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(job),
            Err(_) => job(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        job()
    }
}

/// Number of worker threads available by default.
pub fn default_workers() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
