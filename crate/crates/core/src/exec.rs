//! Execution mode for the data-parallel loops.
//!
//! Every parallel loop in the crate goes through [`map_blocks`], which splits
//! the work into a fixed number of blocks that does not depend on the thread
//! count. Per-block results come back in block order, so reductions are
//! deterministic whether the blocks ran on one thread or many.
//!
//! Without the `parallel` feature every loop runs sequentially. With it, the
//! calling thread can still opt out via [`with_exec`], which is what the
//! benchmarks use to compare the two paths inside one binary.

use std::cell::Cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

thread_local! {
    static MODE: Cell<Exec> = const { Cell::new(Exec::Parallel) };
}

/// Runs `f` with the given execution mode on the current thread.
pub fn with_exec<R>(mode: Exec, f: impl FnOnce() -> R) -> R {
    let prev = MODE.with(|m| m.replace(mode));
    let out = f();
    MODE.with(|m| m.set(prev));
    out
}

pub fn current() -> Exec {
    if cfg!(feature = "parallel") {
        MODE.with(|m| m.get())
    } else {
        Exec::Sequential
    }
}

/// Maps `f` over `0..blocks`, returning the results in block order.
pub fn map_blocks<T, F>(blocks: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if current() == Exec::Parallel && blocks > 1 {
            use rayon::prelude::*;
            return (0..blocks).into_par_iter().map(f).collect();
        }
    }
    (0..blocks).map(f).collect()
}

/// Returns the first `Some` in block order. In parallel mode later blocks are
/// abandoned once an earlier block has produced a result.
pub fn find_first_block<T, F>(blocks: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if current() == Exec::Parallel && blocks > 1 {
            use rayon::prelude::*;
            return (0..blocks).into_par_iter().find_map_first(f);
        }
    }
    (0..blocks).find_map(f)
}

/// Splits `total` work items into contiguous ranges of at most `chunk` items.
pub fn chunk_ranges(total: u64, chunk: u64) -> Vec<(u64, u64)> {
    let chunk = chunk.max(1);
    let mut out = Vec::new();
    let mut start = 0;
    while start < total {
        let end = (start + chunk).min(total);
        out.push((start, end));
        start = end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_order_is_stable() {
        let par = with_exec(Exec::Parallel, || map_blocks(64, |b| b * b));
        let seq = with_exec(Exec::Sequential, || map_blocks(64, |b| b * b));
        assert_eq!(par, seq);
        assert_eq!(par[7], 49);
    }

    #[test]
    fn find_first_prefers_lowest_block() {
        let hit = find_first_block(100, |b| (b % 7 == 3).then_some(b));
        assert_eq!(hit, Some(3));
    }

    #[test]
    fn ranges_cover_everything() {
        let r = chunk_ranges(10, 4);
        assert_eq!(r, vec![(0, 4), (4, 8), (8, 10)]);
        assert!(chunk_ranges(0, 4).is_empty());
    }
}
