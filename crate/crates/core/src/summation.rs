//! Compensated summation with a reduction order that does not depend on how
//! the work is split across threads.
//!
//! Terms are cut into fixed-size chunks. Each chunk is accumulated with the
//! Neumaier variant of Kahan summation, and the chunk partials are then merged
//! left to right, again with compensation. Chunk boundaries depend only on the
//! number of terms, so any thread count yields bit-identical totals.

use rayon::prelude::*;

/// Number of terms per independently accumulated chunk.
pub const CHUNK_LEN: usize = 4096;

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Merge another partial sum, carrying its compensation term along.
    #[inline]
    pub fn merge(&mut self, other: &NeumaierSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Sum `term(i)` for `i in 0..len` in deterministic chunked order, evaluating
/// chunks in parallel.
pub fn chunked_sum<F>(len: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    chunk_partials(len, CHUNK_LEN, &term)
        .iter()
        .fold(NeumaierSum::new(), |mut acc, p| {
            acc.merge(p);
            acc
        })
        .value()
}

fn chunk_partials<F>(len: usize, chunk: usize, term: &F) -> Vec<NeumaierSum>
where
    F: Fn(usize) -> f64 + Sync,
{
    let n_chunks = len.div_ceil(chunk);
    (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            let end = (start + chunk).min(len);
            (start..end).map(term).collect::<NeumaierSum>()
        })
        .collect()
}
