use std::collections::BTreeSet;

use num_traits::Signed;

use super::EmpiricalDistribution;
use crate::combin::{rat, Rational};
use crate::dist::ExactDistribution;
use crate::error::{Error, Result};

const MIN_KS_SAMPLES: u64 = 100;

/// `(1/2) sum_k |a_k - b_k|`, exact.
pub fn tv_distance(a: &ExactDistribution, b: &ExactDistribution) -> Rational {
    let support: BTreeSet<u64> = a.support().iter().chain(b.support()).copied().collect();
    let total: Rational = support.into_iter().map(|v| (a.prob(v) - b.prob(v)).abs()).sum();
    total * rat(1, 2)
}

/// Standard normal distribution function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Kolmogorov-Smirnov distance between the standardized samples
/// `(x - mu) / sigma` and the standard normal law.
pub fn ks_normal(samples: &[f64], mu: f64, sigma: f64) -> Result<f64> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut groups: Vec<(f64, u64)> = Vec::new();
    for x in sorted {
        match groups.last_mut() {
            Some((v, c)) if *v == x => *c += 1,
            _ => groups.push((x, 1)),
        }
    }
    ks_sorted(&groups, mu, sigma)
}

/// [`ks_normal`] on a table of integer counts.
pub fn ks_normal_counts(sample: &EmpiricalDistribution, mu: f64, sigma: f64) -> Result<f64> {
    let groups: Vec<(f64, u64)> = sample.counts().iter().map(|(&v, &c)| (v as f64, c)).collect();
    ks_sorted(&groups, mu, sigma)
}

fn ks_sorted(groups: &[(f64, u64)], mu: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let n: u64 = groups.iter().map(|g| g.1).sum();
    if n < MIN_KS_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "KS needs at least {MIN_KS_SAMPLES} samples, got {n}"
        )));
    }
    let mut below = 0u64;
    let mut d = 0.0f64;
    for &(x, c) in groups {
        let phi = normal_cdf((x - mu) / sigma);
        let lo = below as f64 / n as f64;
        below += c;
        let hi = below as f64 / n as f64;
        d = d.max((phi - lo).abs()).max((hi - phi).abs());
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn tv_examples() {
        let a = ExactDistribution::point_mass(0);
        let b = ExactDistribution::point_mass(1);
        assert_eq!(tv_distance(&a, &a), int(0));
        assert_eq!(tv_distance(&a, &b), int(1));
        let c = ExactDistribution::new([(0, rat(1, 4)), (1, rat(3, 4))]).unwrap();
        assert_eq!(tv_distance(&a, &c), rat(3, 4));
    }

    #[test]
    fn cdf_values() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-12);
        assert!((normal_cdf(-1.959_963_984_540_054) - 0.025).abs() < 1e-12);
        assert!(normal_cdf(-40.0) >= 0.0 && normal_cdf(40.0) <= 1.0);
    }

    #[test]
    fn ks_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let normal = Normal::new(10.0, 2.0).unwrap();
        let xs: Vec<f64> = (0..10_000).map(|_| normal.sample(&mut rng)).collect();
        let d = ks_normal(&xs, 10.0, 2.0).unwrap();
        assert!(d < 1.63 / 100.0, "{d}");
        assert!(ks_normal(&[3.0; 500], 3.0, 1.0).unwrap() >= 0.5);
        assert!(ks_normal(&[3.0; 500], 0.0, 1.0).unwrap() >= 0.5);
        assert!(ks_normal(&xs, 10.0, 0.0).is_err());
        assert!(ks_normal(&xs[..99], 10.0, 1.0).is_err());
        let counts = EmpiricalDistribution::from_counts([(4, 60), (5, 40), (6, 100)]);
        let flat: Vec<f64> = [(4.0, 60), (5.0, 40), (6.0, 100)]
            .iter()
            .flat_map(|&(v, c)| std::iter::repeat_n(v, c))
            .collect();
        assert_eq!(ks_normal_counts(&counts, 5.0, 1.0).unwrap(), ks_normal(&flat, 5.0, 1.0).unwrap());
    }
}
