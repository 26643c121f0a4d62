//! Seeded sampling of claim counts and aggregate claims.
//!
//! Draws are produced in shards of [`SHARD_SIZE`]. Shard `i` uses a ChaCha8
//! generator seeded from the run seed with stream number `i`, so the output
//! depends only on `(seed, replicates)` and is identical whether shards run
//! sequentially or on the rayon pool.

use rand::distr::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma, Geometric, Poisson};
use serde::{Deserialize, Serialize};

use crate::compound::{CompoundModel, Primary};
use crate::error::{Error, Result};
use crate::ndoppe::NdoppeDist;

pub const SHARD_SIZE: usize = 65_536;

/// Generator identification recorded alongside every summary.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(seed), stream = shard index";

/// Count mass ignored by inverse-cdf sampling tables.
const TABLE_TAIL_EPS: f64 = 1e-17;

/// How shards are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    /// Rayon work-stealing over shards; falls back to sequential without the
    /// `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub seed: u64,
    pub replicates: usize,
    pub execution: Execution,
}

impl SimConfig {
    pub fn new(seed: u64, replicates: usize) -> Result<Self> {
        if replicates == 0 {
            return Err(Error::invalid("replicates", "at least one replicate is required"));
        }
        Ok(Self {
            seed,
            replicates,
            execution: Execution::default(),
        })
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

/// Runs `draw` `cfg.replicates` times across seeded shards, preserving shard order.
pub fn run_sharded<T, F>(cfg: &SimConfig, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    let shards = cfg.replicates.div_ceil(SHARD_SIZE);
    let shard = |i: usize| -> Vec<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i as u64);
        let len = SHARD_SIZE.min(cfg.replicates - i * SHARD_SIZE);
        (0..len).map(|_| draw(&mut rng)).collect()
    };
    let parts: Vec<Vec<T>> = match cfg.execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..shards).into_par_iter().map(shard).collect()
        }
        _ => (0..shards).map(shard).collect(),
    };
    parts.into_iter().flatten().collect()
}

/// Inverse-cdf lookup for count laws without a convenient direct sampler.
#[derive(Debug, Clone)]
struct CdfTable {
    cumulative: Vec<f64>,
}

impl CdfTable {
    fn new(pmf: impl Fn(u64) -> f64, last: u64) -> Self {
        let mut total = 0.0;
        let cumulative = (0..=last)
            .map(|n| {
                total += pmf(n);
                total
            })
            .collect();
        Self { cumulative }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        self.cumulative.partition_point(|&c| c < u) as u64
    }
}

/// A ready-to-use sampler for one primary distribution.
#[derive(Debug, Clone)]
enum CountSampler {
    Mixture {
        components: WeightedIndex<f64>,
        geometric: Geometric,
    },
    Poisson(Poisson<f64>),
    GammaPoisson(Gamma<f64>),
    Table(CdfTable),
}

impl CountSampler {
    fn ndoppe(d: &NdoppeDist) -> Result<Self> {
        Ok(CountSampler::Mixture {
            components: WeightedIndex::new(d.weights().iter().copied())
                .map_err(|e| Error::invalid("weights", e.to_string()))?,
            geometric: Geometric::new(d.theta()).map_err(|e| Error::invalid("theta", e.to_string()))?,
        })
    }

    fn new(primary: &Primary) -> Result<Self> {
        Ok(match primary {
            Primary::Ndoppe(d) => Self::ndoppe(d)?,
            Primary::Poisson(d) => {
                CountSampler::Poisson(Poisson::new(d.rate()).map_err(|e| Error::invalid("rate", e.to_string()))?)
            }
            Primary::NegBin(d) => {
                let scale = d.prob() / (1.0 - d.prob());
                CountSampler::GammaPoisson(
                    Gamma::new(d.size(), scale).map_err(|e| Error::invalid("size", e.to_string()))?,
                )
            }
            other => {
                let last = other.tail_count(TABLE_TAIL_EPS) + 1;
                CountSampler::Table(CdfTable::new(|n| other.pmf(n), last))
            }
        })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            CountSampler::Mixture { components, geometric } => {
                let k = components.sample(rng);
                (0..=k).map(|_| geometric.sample(rng)).sum()
            }
            CountSampler::Poisson(p) => p.sample(rng) as u64,
            CountSampler::GammaPoisson(g) => {
                let rate = g.sample(rng);
                if rate > 0.0 {
                    Poisson::new(rate).map_or(0, |p| p.sample(rng) as u64)
                } else {
                    0
                }
            }
            CountSampler::Table(t) => t.sample(rng),
        }
    }
}

/// NDOPPE draws: component `k` with probability `w_k`, then a sum of `k+1` geometric(θ) failures.
pub fn sample_ndoppe(d: &NdoppeDist, cfg: &SimConfig) -> Result<Vec<u64>> {
    let sampler = CountSampler::ndoppe(d)?;
    Ok(run_sharded(cfg, |rng| sampler.sample(rng)))
}

/// Draws from any compound primary.
pub fn sample_counts(primary: &Primary, cfg: &SimConfig) -> Result<Vec<u64>> {
    let sampler = CountSampler::new(primary)?;
    Ok(run_sharded(cfg, |rng| sampler.sample(rng)))
}

/// Aggregate claims: a count from the primary, then that many exponential(γ) claims.
pub fn sample_aggregate(model: &CompoundModel, cfg: &SimConfig) -> Result<Vec<f64>> {
    let sampler = CountSampler::new(model.primary())?;
    let claim = Exp::new(model.gamma()).map_err(|e| Error::invalid("gamma", e.to_string()))?;
    Ok(run_sharded(cfg, |rng| {
        let n = sampler.sample(rng);
        (0..n).map(|_| claim.sample(rng)).sum()
    }))
}

/// Empirical moments of a sample, with generator metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub replicates: usize,
    pub seed: u64,
    pub rng: String,
    pub mean: f64,
    pub variance: f64,
    /// Share of draws equal to zero.
    pub zero_share: f64,
}

impl SampleSummary {
    pub fn new(samples: &[f64], cfg: &SimConfig) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let variance = if samples.len() > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            replicates: samples.len(),
            seed: cfg.seed,
            rng: RNG_ALGORITHM.to_string(),
            mean,
            variance,
            zero_share: samples.iter().filter(|x| **x == 0.0).count() as f64 / n,
        }
    }

    /// Standard error of the mean.
    pub fn mean_se(&self) -> f64 {
        (self.variance / self.replicates as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ndoppe::CoefficientVector;

    fn geometric(theta: f64) -> NdoppeDist {
        NdoppeDist::new(CoefficientVector::new(vec![1.0]).unwrap(), theta).unwrap()
    }

    #[test]
    fn rejects_zero_replicates() {
        assert!(SimConfig::new(1, 0).is_err());
    }

    #[test]
    fn deterministic_and_mode_independent() {
        let d = NdoppeDist::new(CoefficientVector::new(vec![1.0, 1.0]).unwrap(), 0.3).unwrap();
        let cfg = SimConfig::new(42, 3 * SHARD_SIZE + 17).unwrap();
        let a = sample_ndoppe(&d, &cfg.with_execution(Execution::Sequential)).unwrap();
        let b = sample_ndoppe(&d, &cfg.with_execution(Execution::Parallel)).unwrap();
        assert_eq!(a.len(), cfg.replicates);
        assert_eq!(a, b);
        assert_eq!(a, sample_ndoppe(&d, &cfg).unwrap());
        let c = sample_ndoppe(&d, &SimConfig::new(43, cfg.replicates).unwrap()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn geometric_mean() {
        let cfg = SimConfig::new(7, 1_000_000).unwrap();
        let draws = sample_ndoppe(&geometric(0.5), &cfg).unwrap();
        let mean = draws.iter().sum::<u64>() as f64 / draws.len() as f64;
        assert!((mean - 1.0).abs() < 4.0 * (2.0f64 / 1e6).sqrt(), "{mean}");
    }

    #[test]
    fn empirical_pmf_matches() {
        let d = NdoppeDist::new(CoefficientVector::new(vec![1.0, 0.5, 2.0]).unwrap(), 0.4).unwrap();
        let cfg = SimConfig::new(11, 1_000_000).unwrap();
        let draws = sample_ndoppe(&d, &cfg).unwrap();
        for x in 0..3u64 {
            let p = d.pmf(x);
            let freq = draws.iter().filter(|v| **v == x).count() as f64 / 1e6;
            let se = (p * (1.0 - p) / 1e6).sqrt();
            assert!((freq - p).abs() < 4.0 * se, "x={x}: {freq} vs {p}");
        }
    }

    #[test]
    fn high_theta_aggregate_is_mostly_zero() {
        let m = CompoundModel::new(Primary::Ndoppe(geometric(0.99)), 1.0).unwrap();
        let cfg = SimConfig::new(3, 10_000).unwrap();
        let draws = sample_aggregate(&m, &cfg).unwrap();
        let zeros = draws.iter().filter(|x| **x == 0.0).count();
        assert!(zeros >= 9_500, "{zeros}");
    }

    #[test]
    fn table_sampler_counts() {
        for m in [
            CompoundModel::discrete_lindley(0.4, 1.0).unwrap(),
            CompoundModel::negbin(2.5, 0.3, 1.0).unwrap(),
            CompoundModel::poisson(1.5, 1.0).unwrap(),
        ] {
            let cfg = SimConfig::new(5, 400_000).unwrap();
            let draws = sample_counts(m.primary(), &cfg).unwrap();
            let p0 = m.primary().pmf(0);
            let freq = draws.iter().filter(|v| **v == 0).count() as f64 / 4e5;
            assert!(
                (freq - p0).abs() < 4.0 * (p0 * (1.0 - p0) / 4e5).sqrt(),
                "{m}: {freq} vs {p0}"
            );
        }
    }

    #[test]
    fn summary() {
        let cfg = SimConfig::new(1, 4).unwrap();
        let s = SampleSummary::new(&[0.0, 1.0, 2.0, 3.0], &cfg);
        assert_eq!(s.mean, 1.5);
        assert!((s.variance - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.zero_share, 0.25);
        assert_eq!(s.rng, RNG_ALGORITHM);
    }
}
