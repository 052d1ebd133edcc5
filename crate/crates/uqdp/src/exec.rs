//! Thread-pool executor for the core estimators.

use std::sync::Arc;

use rayon::prelude::*;
use uqdp_core::parallel::Executor;

/// Runs per-trajectory tasks on a rayon pool. Results come back in index
/// order, so the thread count never changes the numbers.
#[derive(Clone, Debug)]
pub struct ThreadPool {
    pool: Arc<rayon::ThreadPool>,
}

impl ThreadPool {
    /// `None` uses one thread per core.
    pub fn new(threads: Option<usize>) -> Result<Self, rayon::ThreadPoolBuildError> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            b = b.num_threads(n.max(1));
        }
        Ok(Self { pool: Arc::new(b.build()?) })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for ThreadPool {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}
