//! Chunked sampling loops.
//!
//! Work is split into fixed-size chunks, chunk `c` draws from stream `c` of
//! the run seed, and chunk results are combined in chunk order. The output
//! therefore depends only on `(seed, n)`, never on the thread count or on
//! the execution policy.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;
use crate::sampling::{stream_rng, SampleRng};

pub const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecPolicy {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

fn chunk_ranges(n: usize) -> Vec<Range<usize>> {
    (0..n.div_ceil(CHUNK)).map(|c| c * CHUNK..((c + 1) * CHUNK).min(n)).collect()
}

/// Runs `f(range, rng)` for every chunk and returns the results in chunk order.
pub fn map_chunks<T, F>(n: usize, seed: u64, policy: ExecPolicy, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Range<usize>, &mut SampleRng) -> Result<T> + Sync,
{
    let ranges = chunk_ranges(n);
    let run = |(c, r): (usize, Range<usize>)| f(r, &mut stream_rng(seed, c as u64));
    match policy {
        #[cfg(feature = "parallel")]
        ExecPolicy::Parallel => ranges.into_par_iter().enumerate().map(run).collect(),
        _ => ranges.into_iter().enumerate().map(run).collect(),
    }
}

/// One value per sample, concatenated in sample order.
pub fn sample_n<T, F>(n: usize, seed: u64, policy: ExecPolicy, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut SampleRng) -> Result<T> + Sync,
{
    let chunks = map_chunks(n, seed, policy, |r, rng| r.map(|_| f(rng)).collect::<Result<Vec<T>>>())?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Folds each chunk into an accumulator, then merges the accumulators left to right.
pub fn fold_n<A, I, S, M>(n: usize, seed: u64, policy: ExecPolicy, init: I, step: S, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    S: Fn(&mut A, &mut SampleRng) -> Result<()> + Sync,
    M: Fn(A, A) -> A,
{
    let parts = map_chunks(n, seed, policy, |r, rng| {
        let mut acc = init();
        for _ in r {
            step(&mut acc, rng)?;
        }
        Ok(acc)
    })?;
    Ok(parts.into_iter().fold(init(), merge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn chunks_cover_range() {
        let r = chunk_ranges(2 * CHUNK + 5);
        assert_eq!(r.len(), 3);
        assert_eq!(r[2], 2 * CHUNK..2 * CHUNK + 5);
        assert!(chunk_ranges(0).is_empty());
    }

    #[test]
    fn policies_agree_bitwise() {
        let n = 3 * CHUNK + 17;
        let draw = |rng: &mut SampleRng| Ok(rng.random::<f64>());
        let a = sample_n(n, 9, ExecPolicy::Sequential, draw).unwrap();
        let b = sample_n(n, 9, ExecPolicy::Parallel, draw).unwrap();
        assert_eq!(a, b);
        let sum = |p| {
            fold_n(
                n,
                9,
                p,
                || 0.0,
                |acc: &mut f64, rng| {
                    *acc += rng.random::<f64>();
                    Ok(())
                },
                |x, y| x + y,
            )
            .unwrap()
        };
        assert_eq!(sum(ExecPolicy::Sequential).to_bits(), sum(ExecPolicy::Parallel).to_bits());
    }
}
