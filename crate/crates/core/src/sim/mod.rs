//! Verification harness: exhaustive oracles, seeded Monte Carlo samplers,
//! distance and normality diagnostics, and value set bound checks.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combin::{rat, Rational};
use crate::dist::ExactDistribution;
use crate::error::{Error, Result};

mod bounds;
mod enumerate;
mod sample;
mod stats;

pub use bounds::{check_bounds, BoundRecord, BoundReport, BoundRule, BoundViolation};
pub use enumerate::{enumerate_branch_tuples, enumerate_occupancy, enumerate_union};
pub use sample::{sample_occupancy, sample_union, sample_valueset, MonteCarlo};
pub use stats::{ks_normal, ks_normal_counts, normal_cdf, tv_distance};

/// Environment variable that overrides every enumeration budget at once.
pub const BUDGET_ENV: &str = "VSLAB_BUDGET";

/// Master seed of a counter-based stream family: trial `i` always draws from
/// ChaCha8 keyed by the master seed on stream `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(trial);
        rng
    }
}

/// Hard caps on exhaustive enumerations, in number of cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budgets {
    pub occupancy: u64,
    pub branch_tuples: u64,
    pub union: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            occupancy: 10_000_000,
            branch_tuples: 100_000_000,
            union: 1_000_000,
        }
    }
}

impl Budgets {
    /// Defaults, or `VSLAB_BUDGET` applied to every cap when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => {
                let cap = v
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("{BUDGET_ENV}={v:?} is not an integer")))?;
                Ok(Self::uniform(cap))
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn uniform(cap: u64) -> Self {
        Self {
            occupancy: cap,
            branch_tuples: cap,
            union: cap,
        }
    }
}

pub(crate) fn check_budget(what: &'static str, needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::Budget {
            what,
            needed,
            budget,
        })
    } else {
        Ok(())
    }
}

/// Counts of observed values over `trials` outcomes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EmpiricalDistribution {
    counts: BTreeMap<u64, u64>,
    trials: u64,
}

impl EmpiricalDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut d = Self::new();
        for (v, c) in counts {
            d.add(v, c);
        }
        d
    }

    pub fn record(&mut self, v: u64) {
        self.add(v, 1);
    }

    pub fn add(&mut self, v: u64, count: u64) {
        if count > 0 {
            *self.counts.entry(v).or_default() += count;
            self.trials += count;
        }
    }

    pub fn merge(&mut self, other: &Self) {
        for (&v, &c) in &other.counts {
            self.add(v, c);
        }
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn is_empty(&self) -> bool {
        self.trials == 0
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn count(&self, v: u64) -> u64 {
        self.counts.get(&v).copied().unwrap_or(0)
    }

    pub fn freq(&self, v: u64) -> Rational {
        rat(self.count(v), self.trials.max(1))
    }

    /// Relative frequencies as an exact law; fails when no trials were run.
    pub fn to_exact(&self) -> Result<ExactDistribution> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("empty sample has no distribution".into()));
        }
        ExactDistribution::new(self.counts.iter().map(|(&v, &c)| (v, rat(c, self.trials))))
    }

    pub fn map_values(&self, f: impl Fn(u64) -> u64) -> Self {
        Self::from_counts(self.counts.iter().map(|(&v, &c)| (f(v), c)))
    }

    pub fn mean(&self) -> f64 {
        let sum: f64 = self.counts.iter().map(|(&v, &c)| v as f64 * c as f64).sum();
        sum / self.trials as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let ss: f64 = self
            .counts
            .iter()
            .map(|(&v, &c)| c as f64 * (v as f64 - mean).powi(2))
            .sum();
        ss / (self.trials as f64 - 1.0)
    }
}
