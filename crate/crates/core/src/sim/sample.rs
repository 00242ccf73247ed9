use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{EmpiricalDistribution, Seed};
use crate::cyclo::ValueSetCounter;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::union::UnionModel;

/// Trials per work unit. Fixed so that the unit boundaries, and with them
/// the merged counts, do not depend on the worker count.
const CHUNK: u64 = 1024;

/// Monte Carlo run settings; `workers = None` uses every available core.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MonteCarlo {
    pub trials: u64,
    pub seed: Seed,
    pub workers: Option<usize>,
}

impl MonteCarlo {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed: Seed(seed),
            workers: None,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    fn run<S>(
        &self,
        state: impl Fn() -> S + Sync,
        draw: impl Fn(&mut S, &mut ChaCha8Rng) -> u64 + Sync,
    ) -> Result<EmpiricalDistribution> {
        let chunks = self.trials.div_ceil(CHUNK);
        let job = || {
            (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut s = state();
                    let mut out = EmpiricalDistribution::new();
                    for trial in c * CHUNK..((c + 1) * CHUNK).min(self.trials) {
                        out.record(draw(&mut s, &mut self.seed.rng(trial)));
                    }
                    out
                })
                .reduce(EmpiricalDistribution::new, |mut a, b| {
                    a.merge(&b);
                    a
                })
        };
        match self.workers {
            None => Ok(job()),
            Some(0) => Err(Error::InvalidParameter("workers must be positive".into())),
            Some(w) => rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
                .map(|pool| pool.install(job)),
        }
    }
}

/// `|V|` of random cyclotomic mappings with branches uniform on `F_q`
/// (or on `F_q^*` when `nonzero_only`).
pub fn sample_valueset(
    field: &FieldSpec,
    ell: u64,
    r: u64,
    nonzero_only: bool,
    mc: &MonteCarlo,
) -> Result<EmpiricalDistribution> {
    ValueSetCounter::new(field, r, ell)?;
    let lo = nonzero_only as u32;
    let q = field.q();
    mc.run(
        || {
            let counter = ValueSetCounter::new(field, r, ell).expect("validated above");
            (counter, vec![FieldElement::ZERO; ell as usize])
        },
        |(counter, branches), rng| {
            for b in branches.iter_mut() {
                *b = FieldElement::from_code(rng.random_range(lo..q));
            }
            counter.size(branches)
        },
    )
}

/// Empty boxes after `ell` uniform balls into `t ell` boxes.
pub fn sample_occupancy(t: u64, ell: u64, mc: &MonteCarlo) -> Result<EmpiricalDistribution> {
    if t == 0 || ell == 0 {
        return Err(Error::InvalidParameter("t and ell must be positive".into()));
    }
    let n = t * ell;
    mc.run(
        || (vec![0u64; n as usize], 0u64),
        |(stamp, gen), rng| {
            *gen += 1;
            let mut hit = 0;
            for _ in 0..ell {
                let b = rng.random_range(0..n) as usize;
                if stamp[b] != *gen {
                    stamp[b] = *gen;
                    hit += 1;
                }
            }
            n - hit
        },
    )
}

/// `|A_1 u ... u A_ell|` with each `A_j` drawn by Floyd's subset sampler.
pub fn sample_union(model: &UnionModel, mc: &MonteCarlo) -> Result<EmpiricalDistribution> {
    let n = model.n();
    mc.run(
        || (vec![0u64; n as usize], vec![0u64; n as usize], 0u64, 0u64),
        |(member, covered, set_gen, trial_gen), rng| {
            *trial_gen += 1;
            let mut size = 0;
            for &m in model.sizes() {
                *set_gen += 1;
                for j in n - m..n {
                    let pick = rng.random_range(0..=j);
                    let x = if member[pick as usize] == *set_gen { j } else { pick } as usize;
                    member[x] = *set_gen;
                    if covered[x] != *trial_gen {
                        covered[x] = *trial_gen;
                        size += 1;
                    }
                }
            }
            size
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::{rat, to_f64};
    use crate::dist::occupancy_dist;
    use crate::union::union_dist;

    fn within_3_sigma(sample: &EmpiricalDistribution, mean: f64, var: f64) -> bool {
        (sample.mean() - mean).abs() <= 3.0 * (var / sample.trials() as f64).sqrt()
    }

    #[test]
    fn empty_runs() {
        let f = FieldSpec::prime(3).unwrap();
        let mc = MonteCarlo::new(0, 1);
        assert!(sample_valueset(&f, 2, 1, false, &mc).unwrap().is_empty());
        assert!(sample_occupancy(1, 5, &mc).unwrap().is_empty());
        assert!(sample_union(&UnionModel::new(5, vec![2]).unwrap(), &mc).unwrap().is_empty());
        assert!(sample_valueset(&f, 3, 1, false, &mc).is_err());
        assert!(sample_occupancy(1, 5, &MonteCarlo::new(10, 1).workers(0)).is_err());
    }

    #[test]
    fn valueset_q3_frequency() {
        let f = FieldSpec::prime(3).unwrap();
        let d = sample_valueset(&f, 2, 1, false, &MonteCarlo::new(100_000, 7)).unwrap();
        let p = 2.0 / 9.0;
        let freq = d.count(3) as f64 / d.trials() as f64;
        assert!((freq - p).abs() <= 3.0 * (p * (1.0 - p) / 1e5).sqrt());
        let again = sample_valueset(&f, 2, 1, false, &MonteCarlo::new(100_000, 7)).unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn occupancy_and_union_means() {
        let exact = occupancy_dist(1, 100).unwrap();
        let d = sample_occupancy(1, 100, &MonteCarlo::new(100_000, 3)).unwrap();
        assert!(within_3_sigma(&d, to_f64(&exact.mean()), to_f64(&exact.variance())));

        let model = UnionModel::equal(50, 5, 10).unwrap();
        let exact = union_dist(&model).unwrap();
        let d = sample_union(&model, &MonteCarlo::new(100_000, 5)).unwrap();
        assert!(within_3_sigma(&d, to_f64(&exact.mean()), to_f64(&exact.variance())));
    }

    #[test]
    fn small_union_sampler_is_uniform() {
        let model = UnionModel::new(4, vec![2, 2]).unwrap();
        let d = sample_union(&model, &MonteCarlo::new(60_000, 11)).unwrap();
        for (x, p) in [(2, rat(1, 6)), (3, rat(2, 3)), (4, rat(1, 6))] {
            let p = to_f64(&p);
            let freq = d.count(x) as f64 / 60_000.0;
            assert!((freq - p).abs() < 4.0 * (p * (1.0 - p) / 60_000.0).sqrt());
        }
    }

    #[test]
    fn worker_count_does_not_change_counts() {
        let f = FieldSpec::prime(13).unwrap();
        let base = MonteCarlo::new(5000, 99);
        let one = sample_valueset(&f, 6, 2, false, &base.workers(1)).unwrap();
        let three = sample_valueset(&f, 6, 2, false, &base.workers(3)).unwrap();
        assert_eq!(one, three);
        let model = UnionModel::new(20, vec![3, 7]).unwrap();
        assert_eq!(
            sample_union(&model, &base.workers(1)).unwrap(),
            sample_union(&model, &base.workers(4)).unwrap()
        );
    }
}
