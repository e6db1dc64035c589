//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper returns exactly what the sequential loop would return; the
//! parallel route only changes how the work is scheduled. Without the
//! `parallel` feature, [`Exec::Parallel`] runs sequentially.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

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

/// The first `f(i)` in index order that is `Some`.
pub fn find_map_first<T, F>(exec: Exec, range: Range<u64>, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => range.into_par_iter().find_map_first(f),
        _ => range.into_iter().find_map(f),
    }
}

/// `items.map(f)` preserving order.
pub fn map_ordered<I, T, F>(exec: Exec, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// `(0..n).map(f)` preserving order.
pub fn map_range<T, F>(exec: Exec, range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => range.into_par_iter().map(f).collect(),
        _ => range.map(f).collect(),
    }
}
