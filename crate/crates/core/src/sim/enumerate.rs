use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{check_budget, EmpiricalDistribution};
use crate::cyclo::ValueSetCounter;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::union::UnionModel;

fn power(base: u64, e: u64) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

/// Empty-box counts over all `(t ell)^ell` placements of `ell` balls.
pub fn enumerate_occupancy(t: u64, ell: u64, budget: u64) -> Result<EmpiricalDistribution> {
    if t == 0 || ell == 0 {
        return Err(Error::InvalidParameter("t and ell must be positive".into()));
    }
    let n = t * ell;
    check_budget("ball placements", power(n, ell), budget)?;
    let mut balls = vec![0usize; ell as usize];
    let mut load = vec![0u32; n as usize];
    load[0] = ell as u32;
    let mut empty = n - 1;
    let mut out = EmpiricalDistribution::new();
    loop {
        out.record(empty);
        let mut i = 0;
        loop {
            if i == balls.len() {
                return Ok(out);
            }
            let b = balls[i];
            load[b] -= 1;
            if load[b] == 0 {
                empty += 1;
            }
            let next = if b + 1 == n as usize { 0 } else { b + 1 };
            balls[i] = next;
            if load[next] == 0 {
                empty -= 1;
            }
            load[next] += 1;
            if next != 0 {
                break;
            }
            i += 1;
        }
    }
}

/// `|V|` counts over every branch tuple in `F_q^ell` (or `(F_q^*)^ell`).
pub fn enumerate_branch_tuples(
    field: &FieldSpec,
    ell: u64,
    r: u64,
    nonzero_only: bool,
    budget: u64,
) -> Result<EmpiricalDistribution> {
    ValueSetCounter::new(field, r, ell)?;
    let lo = nonzero_only as u32;
    let q = field.q();
    check_budget("branch tuples", power((q - lo) as u64, ell), budget)?;
    let parts: Vec<EmpiricalDistribution> = (lo..q)
        .into_par_iter()
        .map(|first| {
            let mut counter = ValueSetCounter::new(field, r, ell).expect("validated above");
            let mut branches = vec![FieldElement::from_code(lo); ell as usize];
            branches[0] = FieldElement::from_code(first);
            let mut out = EmpiricalDistribution::new();
            loop {
                out.record(counter.size(&branches));
                let mut i = 1;
                loop {
                    if i == branches.len() {
                        return out;
                    }
                    let next = branches[i].code() + 1;
                    if next < q {
                        branches[i] = FieldElement::from_code(next);
                        break;
                    }
                    branches[i] = FieldElement::from_code(lo);
                    i += 1;
                }
            }
        })
        .collect();
    let mut out = EmpiricalDistribution::new();
    parts.iter().for_each(|p| out.merge(p));
    Ok(out)
}

/// All `m`-subsets of `0..n` as bitsets, in lexicographic order.
fn subsets(n: usize, m: usize) -> Vec<Vec<u64>> {
    let words = n.div_ceil(64);
    let mut idx: Vec<usize> = (0..m).collect();
    let mut out = Vec::new();
    loop {
        let mut bits = vec![0u64; words];
        for &i in &idx {
            bits[i / 64] |= 1 << (i % 64);
        }
        out.push(bits);
        let Some(pos) = (0..m).rev().find(|&j| idx[j] < n - m + j) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `|A_1 u ... u A_ell|` counts over every tuple of subsets.
pub fn enumerate_union(model: &UnionModel, budget: u64) -> Result<EmpiricalDistribution> {
    let needed = model.tuple_count().to_u128().unwrap_or(u128::MAX);
    check_budget("subset tuples", needed, budget)?;
    let n = model.n() as usize;
    let choices: Vec<Vec<Vec<u64>>> = model.sizes().iter().map(|&m| subsets(n, m as usize)).collect();
    let mut stack = vec![vec![0u64; n.div_ceil(64)]; choices.len() + 1];
    let mut out = EmpiricalDistribution::new();
    fn walk(level: usize, choices: &[Vec<Vec<u64>>], stack: &mut [Vec<u64>], out: &mut EmpiricalDistribution) {
        if level == choices.len() {
            out.record(stack[level].iter().map(|w| w.count_ones() as u64).sum());
            return;
        }
        for set in &choices[level] {
            let (lower, upper) = stack.split_at_mut(level + 1);
            for ((dst, a), b) in upper[0].iter_mut().zip(&lower[level]).zip(set) {
                *dst = a | b;
            }
            walk(level + 1, choices, stack, out);
        }
    }
    walk(0, &choices, &mut stack, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::rat;
    use crate::dist::{occupancy_dist, random_poly_valueset_dist, CycloModel};
    use crate::union::union_dist;
    use crate::field::FieldSpec;

    #[test]
    fn occupancy_examples() {
        let d = enumerate_occupancy(1, 2, 100).unwrap();
        assert_eq!((d.freq(0), d.freq(1)), (rat(1, 2), rat(1, 2)));
        assert_eq!(enumerate_occupancy(2, 2, 100).unwrap().to_exact().unwrap().mean(), rat(9, 4));
        assert_eq!(enumerate_occupancy(1, 1, 1).unwrap().freq(0), rat(1, 1));
        assert!(enumerate_occupancy(2, 4, 1000).is_err());
        for (t, ell) in [(1, 3), (2, 3), (3, 3), (1, 5), (2, 4)] {
            let d = enumerate_occupancy(t, ell, 10_000_000).unwrap().to_exact().unwrap();
            assert_eq!(d, occupancy_dist(t, ell).unwrap());
        }
    }

    #[test]
    fn branch_tuple_examples() {
        let f3 = FieldSpec::prime(3).unwrap();
        let d = enumerate_branch_tuples(&f3, 2, 1, false, 100).unwrap();
        assert_eq!(d.trials(), 9);
        assert_eq!((d.count(1), d.count(2), d.count(3)), (1, 6, 2));
        let d = enumerate_branch_tuples(&f3, 2, 1, true, 100).unwrap();
        assert_eq!(d.freq(3), rat(1, 2));
        let f5 = FieldSpec::prime(5).unwrap();
        let d = enumerate_branch_tuples(&f5, 4, 1, true, 1000).unwrap();
        assert_eq!(d.count(5), 24);
        assert_eq!(d.trials(), 256);
        assert!(enumerate_branch_tuples(&f5, 4, 1, false, 624).is_err());
        assert!(enumerate_branch_tuples(&f5, 3, 1, false, 1000).is_err());
        let f9 = FieldSpec::of_order(9).unwrap();
        for (ell, r) in [(4, 2), (4, 3), (2, 4)] {
            let d = enumerate_branch_tuples(&f9, ell, r, false, 100_000_000).unwrap();
            let exact = random_poly_valueset_dist(&CycloModel::new(9, ell, r).unwrap()).unwrap();
            assert_eq!(d.to_exact().unwrap(), exact);
        }
    }

    #[test]
    fn union_examples() {
        let d = enumerate_union(&UnionModel::new(4, vec![2, 3]).unwrap(), 100).unwrap();
        assert_eq!(d.trials(), 24);
        assert_eq!((d.freq(3), d.freq(4)), (rat(1, 2), rat(1, 2)));
        let d = enumerate_union(&UnionModel::new(4, vec![2, 2]).unwrap(), 100).unwrap();
        assert_eq!((d.count(2), d.count(3), d.count(4)), (6, 24, 6));
        let d = enumerate_union(&UnionModel::new(70, vec![2]).unwrap(), 10_000).unwrap();
        assert_eq!(d.counts().len(), 1);
        assert!(enumerate_union(&UnionModel::new(10, vec![5, 5]).unwrap(), 1000).is_err());
        let m = UnionModel::new(80, vec![1, 2]).unwrap();
        assert_eq!(enumerate_union(&m, 1_000_000).unwrap().to_exact().unwrap(), union_dist(&m).unwrap());
    }
}
