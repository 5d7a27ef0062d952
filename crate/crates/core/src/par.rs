//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Exec::Parallel`] runs on the
//! rayon pool; without it every call degrades to the serial loop. Work is
//! always split into the same chunks and reduced in chunk order, so both
//! modes produce bit-identical sums.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Execution strategy for the data-parallel kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Serial,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Serial
        }
    }
}

impl Exec {
    /// Whether this strategy actually uses more than one thread in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// `(0..n).map(f).collect()`, order-preserving.
pub fn map_indices<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// `items.iter().map(f).collect()`, order-preserving.
pub fn map_slice<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Splits `0..total` into consecutive chunks of `chunk` items, evaluates
/// `partial` on each range, and folds the partial results left to right.
pub fn chunked_reduce<A, F, G>(exec: Exec, total: u64, chunk: u64, partial: F, mut fold: G) -> Option<A>
where
    A: Send,
    F: Fn(u64, u64) -> A + Sync + Send,
    G: FnMut(A, A) -> A,
{
    let chunk = chunk.max(1);
    let n_chunks = total.div_ceil(chunk) as usize;
    let parts = map_indices(exec, n_chunks, |c| {
        let start = c as u64 * chunk;
        let end = (start + chunk).min(total);
        partial(start, end)
    });
    let mut it = parts.into_iter();
    let first = it.next()?;
    Some(it.fold(first, &mut fold))
}
