//! Deterministic parallel Monte Carlo.
//!
//! A run of `n` samples is cut into fixed-size blocks; block `b` draws from
//! `RngStream::new(seed, b)`. Workers pick up blocks round-robin, and
//! results come back in block order, so the output depends only on
//! `(seed, n)` and never on the worker count.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::samplers::RngStream;

/// Samples per block; fixed so the stream partition is stable across runs.
pub const BLOCK_SIZE: usize = 4096;

pub fn blocks(n_samples: usize) -> impl Iterator<Item = (u64, Range<usize>)> {
    (0..n_samples.div_ceil(BLOCK_SIZE)).map(move |b| {
        let start = b * BLOCK_SIZE;
        (b as u64, start..(start + BLOCK_SIZE).min(n_samples))
    })
}

/// Runs `work` on every block and returns per-block results in block order.
pub fn run_blocks<T, F>(seed: u64, n_samples: usize, workers: usize, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream, Range<usize>) -> Result<T> + Sync,
{
    if workers == 0 {
        return Err(Error::Configuration("workers must be >= 1".into()));
    }
    let all: Vec<(u64, Range<usize>)> = blocks(n_samples).collect();
    if workers == 1 || all.len() <= 1 {
        return all
            .into_iter()
            .map(|(id, range)| work(&mut RngStream::new(seed, id), range))
            .collect();
    }
    let work = &work;
    let all = &all;
    let per_worker: Vec<Vec<(usize, Result<T>)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    all.iter()
                        .enumerate()
                        .skip(w)
                        .step_by(workers)
                        .map(|(i, (id, range))| (i, work(&mut RngStream::new(seed, *id), range.clone())))
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut slots: Vec<Option<Result<T>>> = (0..all.len()).map(|_| None).collect();
    for (i, r) in per_worker.into_iter().flatten() {
        slots[i] = Some(r);
    }
    slots.into_iter().map(|s| s.expect("every block visited")).collect()
}

/// Collects one value per sample, in sample order.
pub fn collect<T, F>(seed: u64, n_samples: usize, workers: usize, draw: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream) -> Result<T> + Sync,
{
    let chunks = run_blocks(seed, n_samples, workers, |rng, range| range.map(|_| draw(rng)).collect::<Result<Vec<T>>>())?;
    Ok(chunks.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn partition_covers_range() {
        let b: Vec<_> = blocks(10_000).collect();
        assert_eq!(b.len(), 3);
        assert_eq!(b[2].1, 8192..10_000);
        assert_eq!(blocks(0).count(), 0);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let draw = |rng: &mut RngStream| -> Result<u64> { Ok(rng.random()) };
        let one = collect(42, 20_000, 1, draw).unwrap();
        let four = collect(42, 20_000, 4, draw).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.len(), 20_000);
        assert!(collect(42, 10, 0, draw).is_err());
    }
}
