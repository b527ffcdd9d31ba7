//! Monte Carlo estimates over Gaussian point clouds.
//!
//! Sample `i` draws from its own stream keyed by `(seed, i)` and contributes
//! an integer success count, so estimates are identical for any worker count.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::geometry::{sample_subspace_with, PointConfig, RadonTable};
use crate::partition::{full_mask, Partition};
use crate::random::normals;

/// Half-width multiplier of the reported interval (99.7% normal coverage).
pub const CI_SIGMAS: f64 = 3.0;

/// A binomial proportion with its 3σ normal-approximation half-width.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub p_hat: f64,
    pub successes: u64,
    pub samples: u64,
    pub ci_half_width: f64,
    pub seed: u64,
    pub workers: usize,
}

impl Estimate {
    pub fn from_counts(successes: u64, samples: u64, seed: u64, workers: usize) -> Self {
        let p = if samples == 0 {
            0.0
        } else {
            successes as f64 / samples as f64
        };
        Self {
            p_hat: p,
            successes,
            samples,
            ci_half_width: CI_SIGMAS * (p * (1.0 - p) / samples.max(1) as f64).sqrt(),
            seed,
            workers,
        }
    }

    /// Standard error `sqrt(p(1-p)/n)`.
    pub fn std_error(&self) -> f64 {
        self.ci_half_width / CI_SIGMAS
    }

    pub fn covers(&self, value: f64) -> bool {
        (self.p_hat - value).abs() <= self.ci_half_width
    }
}

/// Sample count, seed and worker threads of a simulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SimConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            workers: 1,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

/// `n` standard Gaussian points in `R^d` for sample `index`.
pub fn sample_gaussian_points(n: usize, d: usize, seed: u64, index: u64) -> Vec<Vec<f64>> {
    normals(seed, index).vectors(n, d)
}

/// Counts the samples for which `trial` holds, on `cfg.workers` threads.
pub fn count_successes<F>(cfg: SimConfig, trial: F) -> Result<Estimate>
where
    F: Fn(u64) -> Result<bool> + Sync,
{
    if cfg.workers == 0 {
        return Err(Error::InvalidArgument("workers must be at least 1".into()));
    }
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let successes = pool.install(|| {
        (0..cfg.samples)
            .into_par_iter()
            .map(|i| trial(i).map(u64::from))
            .try_reduce(|| 0, |a, b| Ok(a + b))
    })?;
    Ok(Estimate::from_counts(successes, cfg.samples, cfg.seed, cfg.workers))
}

/// Frequency with which `({1..m}, {m+1..m+n})` is a Radon partition of
/// `m + n` Gaussian points in `R^d`.
pub fn estimate_partition_probability(d: usize, m: usize, n: usize, cfg: SimConfig) -> Result<Estimate> {
    if m == 0 || n == 0 {
        return Err(Error::Domain(format!("need m, n >= 1, got ({m}, {n})")));
    }
    let total = m + n;
    let part = Partition::from_masks(total, full_mask(m), full_mask(total) & !full_mask(m))?;
    count_successes(cfg, |i| {
        // fewer than d + 2 Gaussian points are affinely independent a.s.
        if total < d + 2 {
            return Ok(false);
        }
        let pc = PointConfig::new(sample_gaussian_points(total, d, cfg.seed, i))?;
        pc.is_radon(&part)
    })
}

/// Frequency with which `n` Gaussian points in `R^d` admit a Reay triple.
pub fn estimate_reay_probability(n: usize, d: usize, cfg: SimConfig) -> Result<Estimate> {
    count_successes(cfg, |i| {
        if n < d + 2 {
            return Ok(false);
        }
        let pts = sample_gaussian_points(n, d, cfg.seed, i);
        Ok(RadonTable::from_points(&pts, d)?.has_reay())
    })
}

/// Frequency with which `n` Gaussian points in `R^d` admit a Radon
/// partition with tolerance.
pub fn estimate_tolerance_probability(n: usize, d: usize, cfg: SimConfig) -> Result<Estimate> {
    count_successes(cfg, |i| {
        if n < d + 2 {
            return Ok(false);
        }
        let pts = sample_gaussian_points(n, d, cfg.seed, i);
        Ok(RadonTable::from_points(&pts, d)?.has_tolerant_partition())
    })
}

/// Result of a two-sample chi-square homogeneity test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Chi-square test that two count vectors over the same categories come from
/// one distribution. Categories empty in both samples are dropped.
pub fn homogeneity_test(left: &[u64], right: &[u64]) -> Result<ChiSquareTest> {
    if left.len() != right.len() {
        return Err(Error::DimensionMismatch {
            expected: left.len(),
            found: right.len(),
        });
    }
    let (nl, nr): (u64, u64) = (left.iter().sum(), right.iter().sum());
    if nl == 0 || nr == 0 {
        return Err(Error::InvalidArgument("both samples must be nonempty".into()));
    }
    let total = (nl + nr) as f64;
    let mut stat = 0.0;
    let mut used = 0;
    for (&l, &r) in left.iter().zip(right) {
        let col = (l + r) as f64;
        if col == 0.0 {
            continue;
        }
        used += 1;
        for (obs, rows) in [(l, nl), (r, nr)] {
            let expected = rows as f64 * col / total;
            stat += (obs as f64 - expected).powi(2) / expected;
        }
    }
    let dof = used.max(1) - 1;
    let p_value = if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?;
        1.0 - dist.cdf(stat)
    };
    Ok(ChiSquareTest {
        statistic: stat,
        dof,
        p_value,
    })
}

/// Frequencies of minimal-partition types under the two samplers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplerComparison {
    pub n: usize,
    pub d: usize,
    pub samples: u64,
    pub seed: u64,
    /// Category labels: the circuits on `{1..d+2}` and `{2..d+3}`, each
    /// oriented so that its smallest index is positive.
    pub categories: Vec<String>,
    pub gaussian: Vec<u64>,
    pub gram_schmidt: Vec<u64>,
    pub test: ChiSquareTest,
}

/// Type of a configuration: the circuits on two overlapping `(d+2)`-subsets.
fn circuit_type(pc: &PointConfig) -> Result<String> {
    let d = pc.dim();
    let minimal = pc.minimal_partitions()?;
    let pick = |mask: u64| -> Result<String> {
        minimal
            .iter()
            .map(|(p, _)| p)
            .find(|p| p.support_mask() == mask && p.a_mask() & (mask & mask.wrapping_neg()) != 0)
            .map(Partition::label)
            .ok_or_else(|| Error::Degenerate("no circuit on a (d+2)-subset".into()))
    };
    let first = full_mask(d + 2);
    Ok(format!("{}|{}", pick(first)?, pick(first << 1)?))
}

/// Compares Gaussian point sampling with Gram–Schmidt subspace sampling by
/// a chi-square test on circuit types.
pub fn compare_samplers(n: usize, d: usize, samples: u64, seed: u64) -> Result<SamplerComparison> {
    if n < d + 3 {
        return Err(Error::Domain(format!(
            "sampler comparison needs N >= d + 3, got N = {n}, d = {d}"
        )));
    }
    let mut gaussian: BTreeMap<String, u64> = BTreeMap::new();
    let mut gram: BTreeMap<String, u64> = BTreeMap::new();
    for i in 0..samples {
        let pc = PointConfig::new(sample_gaussian_points(n, d, seed, 2 * i))?;
        *gaussian.entry(circuit_type(&pc)?).or_default() += 1;
        let pc = sample_subspace_with(n, d, &mut normals(seed, 2 * i + 1))?;
        *gram.entry(circuit_type(&pc)?).or_default() += 1;
    }
    let mut categories: Vec<String> = gaussian.keys().chain(gram.keys()).cloned().collect();
    categories.sort();
    categories.dedup();
    let count = |m: &BTreeMap<String, u64>| -> Vec<u64> {
        categories.iter().map(|c| m.get(c).copied().unwrap_or(0)).collect()
    };
    let (gaussian, gram_schmidt) = (count(&gaussian), count(&gram));
    let test = homogeneity_test(&gaussian, &gram_schmidt)?;
    Ok(SamplerComparison {
        n,
        d,
        samples,
        seed,
        categories,
        gaussian,
        gram_schmidt,
        test,
    })
}
