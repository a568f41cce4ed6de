//! Data-parallel map helpers with a sequential fallback.
//!
//! Sweeps map independently over items and are reduced by the caller in index
//! order, so the output is bit-identical with and without the `parallel`
//! feature and for any thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving order.
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Map `f` over the index range `0..n`, preserving order.
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential variants, kept callable with the `parallel` feature enabled so
/// benchmarks can compare both code paths.
pub mod seq {
    /// Map `f` over `items` on the current thread.
    pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
    where
        F: Fn(&T) -> U,
    {
        items.iter().map(f).collect()
    }

    /// Map `f` over `0..n` on the current thread.
    pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
    where
        F: Fn(usize) -> U,
    {
        (0..n).map(f).collect()
    }
}
