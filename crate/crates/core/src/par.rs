//! Data-parallel map helpers.
//!
//! Powder averaging and Monte-Carlo z-averaging are embarrassingly
//! parallel maps followed by a reduction. With the `parallel` feature
//! (default) the map runs on rayon; without it the same code runs
//! sequentially. In both cases results are collected in index order and
//! reduced sequentially, so output is bit-identical across thread counts.

/// Indexed map, parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Sequential variant, kept unconditionally for benchmarking against the
/// parallel path.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
