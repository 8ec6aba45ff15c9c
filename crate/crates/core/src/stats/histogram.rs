use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fixed-edge histogram. Bins are half-open `[e_i, e_{i+1})` except the last,
/// which includes its right edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
    total: u64,
}

impl Histogram {
    pub fn with_edges(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::Configuration("histogram needs at least two edges".into()));
        }
        if !edges.windows(2).all(|w| w[0] < w[1]) || edges.iter().any(|e| !e.is_finite()) {
            return Err(Error::Configuration("histogram edges must be finite and strictly increasing".into()));
        }
        let bins = edges.len() - 1;
        Ok(Self { edges, counts: vec![0; bins], total: 0 })
    }

    pub fn uniform(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::Configuration("histogram needs at least one bin".into()));
        }
        let w = (hi - lo) / bins as f64;
        let mut edges: Vec<f64> = (0..bins).map(|i| lo + w * i as f64).collect();
        edges.push(hi);
        Self::with_edges(edges)
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Bin index of `x`, if inside the edge range.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        let (first, last) = (self.edges[0], self.edges[self.edges.len() - 1]);
        if !(x >= first && x <= last) {
            return None;
        }
        let idx = self.edges.partition_point(|&e| e <= x);
        Some((idx - 1).min(self.counts.len() - 1))
    }

    pub fn add(&mut self, x: f64) -> Result<()> {
        let bin = self
            .bin_of(x)
            .ok_or_else(|| Error::Domain(format!("{x} outside histogram range")))?;
        self.counts[bin] += 1;
        self.total += 1;
        Ok(())
    }

    pub fn extend(&mut self, xs: impl IntoIterator<Item = f64>) -> Result<()> {
        xs.into_iter().try_for_each(|x| self.add(x))
    }

    /// Adds the counts of `other`, which must share the edges exactly.
    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.edges != other.edges {
            return Err(Error::Configuration("cannot merge histograms with different edges".into()));
        }
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.total += other.total;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binning_edges() {
        let mut h = Histogram::uniform(0.0, 1.0, 4).unwrap();
        h.extend([0.0, 0.25, 0.999, 1.0]).unwrap();
        assert_eq!(h.counts(), &[1, 1, 0, 2]);
        assert_eq!(h.total(), 4);
        assert!(h.add(1.5).is_err());
        assert!(h.add(f64::NAN).is_err());
    }

    #[test]
    fn bad_edges() {
        assert!(Histogram::with_edges(vec![0.0]).is_err());
        assert!(Histogram::with_edges(vec![0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn merge_requires_same_edges() {
        let mut a = Histogram::uniform(0.0, 1.0, 4).unwrap();
        let b = Histogram::uniform(0.0, 2.0, 4).unwrap();
        assert!(a.merge(&b).is_err());
    }
}
