//! Data-parallel map over independent work items.
//!
//! With the `parallel` feature (on by default) [`Exec::Parallel`] fans out
//! over rayon's pool; without it every strategy runs on the calling thread.
//! Output order always follows the input index, so results are identical
//! across strategies.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// `(0..n).map(f)` collected in index order.
pub fn map_range<T, F>(n: usize, exec: Exec, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}
