//! Size of the union of independent uniformly random subsets of an `n`-set.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::combin::{binomial, binomial_row, falling, int, pow, rat, Rational};
use crate::dist::{
    check_exact_limit, check_order, AsymptoticParams, ExactDistribution, NormalityThresholds,
    DEFAULT_EXACT_LIMIT,
};
use crate::error::{Error, Result};

/// `ell` random subsets of `{1..n}`, the `j`-th of size `m_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionModel {
    n: u64,
    sizes: Vec<u64>,
}

impl UnionModel {
    pub fn new(n: u64, sizes: Vec<u64>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidParameter("at least one subset size is required".into()));
        }
        if let Some(&m) = sizes.iter().find(|&&m| m == 0 || m > n) {
            return Err(Error::InvalidParameter(format!(
                "subset size {m} outside 1..={n}"
            )));
        }
        Ok(Self { n, sizes })
    }

    /// `ell` subsets, all of size `m`.
    pub fn equal(n: u64, m: u64, ell: u64) -> Result<Self> {
        Self::new(n, vec![m; ell as usize])
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn ell(&self) -> u64 {
        self.sizes.len() as u64
    }

    /// `u_j = m_j / n`.
    pub fn ratios(&self) -> Vec<f64> {
        self.sizes.iter().map(|&m| m as f64 / self.n as f64).collect()
    }

    pub fn max_size(&self) -> u64 {
        *self.sizes.iter().max().expect("nonempty")
    }

    /// `prod_j C(n, m_j)`, the number of subset tuples.
    pub fn tuple_count(&self) -> BigInt {
        self.sizes.iter().map(|&m| binomial(self.n, m)).product()
    }

    /// `prod_j C(a, m_j)` for `a = 0..=n`.
    fn products(&self) -> Vec<BigInt> {
        let mut prods = vec![BigInt::one(); self.n as usize + 1];
        let mut distinct = self.sizes.clone();
        distinct.sort_unstable();
        distinct.dedup();
        for m in distinct {
            let mult = self.sizes.iter().filter(|&&x| x == m).count();
            let mut c = BigInt::one();
            for a in m..=self.n {
                if a > m {
                    c = c * a / (a - m);
                }
                prods[a as usize] *= num_traits::pow::pow(c.clone(), mult);
            }
            prods[..m as usize].iter_mut().for_each(|p| *p = BigInt::zero());
        }
        prods
    }
}

/// `E((Y)_k) = (n)_k prod_j (n - m_j)_k / (n)_k` for the uncovered count `Y = n - X`.
pub fn union_moment(model: &UnionModel, k: u64) -> Result<Rational> {
    let n = model.n();
    check_order(k, n)?;
    let nk = falling(n, k);
    let mut acc = int(nk.clone());
    for &m in model.sizes() {
        acc *= rat(falling(n - m, k), nk.clone());
    }
    Ok(acc)
}

/// `S_k = C(n, k) prod_j C(n - k, m_j) / C(n, m_j)` for `k = 0..=n`.
pub fn union_sieve_terms(model: &UnionModel) -> Vec<Rational> {
    let n = model.n();
    let prods = model.products();
    let den = &prods[n as usize];
    binomial_row(n)
        .into_iter()
        .enumerate()
        .map(|(k, c)| rat(c * &prods[n as usize - k], den.clone()))
        .collect()
}

/// Law of `X = |A_1 u ... u A_ell|`:
/// `P(X = i) = C(n, i) sum_h (-1)^h C(i, h) prod_j C(i - h, m_j) / C(n, m_j)`.
pub fn union_dist(model: &UnionModel) -> Result<ExactDistribution> {
    let n = model.n();
    check_exact_limit("union ground set", n, DEFAULT_EXACT_LIMIT)?;
    let prods = model.products();
    let den = prods[n as usize].clone();
    let outer = binomial_row(n);
    let lo = model.max_size();
    let hi = n.min(model.sizes().iter().sum());
    let pairs = (lo..=hi).map(|i| {
        let mut sum = BigInt::zero();
        for (h, c) in binomial_row(i).into_iter().enumerate() {
            let term = c * &prods[i as usize - h];
            if h % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        (i, rat(&outer[i as usize] * sum, den.clone()))
    });
    ExactDistribution::new(pairs.collect::<Vec<_>>())
}

/// Exact `(E(X), V(X))` for `ell` subsets of common size `m`.
///
/// `V` is computed as `E(Y(Y-1)) + E(Y) - E(Y)^2` with `Y = n - X`.
pub fn bp_moments(n: u64, m: u64, ell: u64) -> Result<(Rational, Rational)> {
    if ell == 0 {
        return Err(Error::InvalidParameter("ell must be positive".into()));
    }
    UnionModel::new(n, vec![m])?;
    let miss = rat(pow(n - m, ell), pow(n, ell));
    let ey = int(n) * &miss;
    let eyy = if n < 2 {
        Rational::zero()
    } else {
        int(n * (n - 1)) * &miss * rat(pow(n - 1 - m.min(n - 1), ell), pow(n - 1, ell))
    };
    let ex = int(n) - &ey;
    let var = eyy + &ey - &ey * &ey;
    Ok((ex, var))
}

/// `mu = n prod(1 - u_i)`, `sigma^2 = n (1 - (1 + sum u_i) prod(1 - u_i)) prod(1 - u_i)`
/// for the uncovered count, with the regime flag set when
/// `max u_j ell <= max_u_times_ell` and `sum u_j >= min_sum_u`.
pub fn union_asymptotic(model: &UnionModel, thresholds: &NormalityThresholds) -> AsymptoticParams {
    let u = model.ratios();
    let n = model.n() as f64;
    let prod: f64 = u.iter().map(|x| 1.0 - x).product();
    let sum: f64 = u.iter().sum();
    let max = u.iter().copied().fold(0.0, f64::max);
    let regime_ok =
        max * model.ell() as f64 <= thresholds.max_u_times_ell && sum >= thresholds.min_sum_u;
    AsymptoticParams::new(n * prod, n * (1.0 - (1.0 + sum) * prod) * prod, regime_ok, thresholds)
}
