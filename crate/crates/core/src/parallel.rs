//! Execution of independent per-index tasks.
//!
//! Estimators hand the executor a pure function of the task index and always
//! receive results in index order, so any executor (sequential here, a thread
//! pool in the std crate) yields the same numbers.

use alloc::vec::Vec;

/// Maps a pure function over `0..n`, returning results in index order.
pub trait Executor: Sync {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs tasks one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}
