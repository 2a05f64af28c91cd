//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper returns its results in index order, so reductions performed
//! by the caller are deterministic regardless of how the work was split.

use std::env;
use std::ops::Range;

use crate::error::{Error, Result};

/// Default cap on the number of elementary steps of a brute-force loop.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "PADHG_MAX_BUDGET";

/// The loop budget in effect.
pub fn budget() -> u128 {
    env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u128>().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Fails with [`Error::BudgetExceeded`] when `needed` exceeds the budget.
pub fn check_budget(needed: u128) -> Result<()> {
    let budget = budget();
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// Execution strategy for data-parallel loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Runs on rayon when the `parallel` feature is enabled and falls back
    /// to sequential execution otherwise.
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

/// Maps `f` over `0..n`, returning results in index order.
pub fn map_indexed<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
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

/// Splits `range` into consecutive chunks of length `chunk` (the last one
/// possibly shorter) and maps `f` over them in order.
pub fn map_chunks<T, F>(exec: Exec, range: Range<u64>, chunk: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    let len = range.end.saturating_sub(range.start);
    let count = len.div_ceil(chunk) as usize;
    map_indexed(exec, count, |i| {
        let lo = range.start + i as u64 * chunk;
        let hi = (lo + chunk).min(range.end);
        f(lo..hi)
    })
}

/// Runs `f` on disjoint mutable chunks of `data` together with the chunk
/// index.
pub fn for_each_chunk_mut<T, F>(exec: Exec, data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    let chunk = chunk.max(1);
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            data.par_chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
        }
        _ => data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c)),
    }
}
