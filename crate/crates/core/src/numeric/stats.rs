//! Streaming mean/variance and compensated summation.

use serde::{Deserialize, Serialize};

/// Welford accumulator with Chan's parallel merge.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&self, other: &Self) -> Self {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let n = self.count + other.count;
        let (na, nb) = (self.count as f64, other.count as f64);
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * nb / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * na * nb / n as f64;
        Self { count: n, mean, m2 }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

impl RunningStats {
    pub fn estimate(&self) -> Estimate {
        Estimate::new(self.mean(), self.std_error())
    }
}

/// A value with its standard error; deterministic values carry zero error.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn new(value: f64, std_error: f64) -> Self {
        Self { value, std_error }
    }

    pub fn exact(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    pub fn scale(self, c: f64) -> Self {
        Self::new(self.value * c, self.std_error * c.abs())
    }

    /// Sum of independent estimates.
    pub fn add(self, other: Self) -> Self {
        Self::new(self.value + other.value, self.std_error.hypot(other.std_error))
    }
}

impl FromIterator<f64> for RunningStats {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.push(x);
        }
        s
    }
}

/// Merges accumulators along a balanced binary tree so the result depends only
/// on the slice order, never on scheduling.
pub fn merge_tree(parts: &[RunningStats]) -> RunningStats {
    match parts.len() {
        0 => RunningStats::new(),
        1 => parts[0],
        n => {
            let (l, r) = parts.split_at(n / 2);
            merge_tree(l).merge(&merge_tree(r))
        }
    }
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let (l, r) = xs.split_at(xs.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let whole: RunningStats = xs.iter().copied().collect();
        let parts: Vec<RunningStats> = xs.chunks(77).map(|c| c.iter().copied().collect()).collect();
        let merged = merge_tree(&parts);
        assert_eq!(merged.count(), 1000);
        assert!((merged.mean() - whole.mean()).abs() < 1e-12);
        assert!((merged.variance() - whole.variance()).abs() < 1e-10);
    }

    #[test]
    fn pairwise_sum_small_error() {
        let xs = vec![0.1; 1_000_000];
        assert!((pairwise_sum(&xs) - 100_000.0).abs() < 1e-8);
    }
}
