//! `r`-th order cyclotomic mappings and their value sets.
//!
//! A mapping of index `ell` sends `0` to `0` and `x` in the coset
//! `C_i = gamma^i C_0` to `a_i x^r`. With `s = (q-1)/ell` and `t = gcd(r, s)`,
//! `x^r` maps `C_0` onto the subgroup `T_0` of `t*ell`-th powers, which has
//! `s/t` elements, so `C_i` lands on the coset `a_i gamma^{ir} T_0` (or on
//! `{0}` when `a_i = 0`). Counting distinct target cosets gives `|V|`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{gcd, FieldElement, FieldSpec};
use crate::poly::{self, Polynomial};

/// The map `x -> a_i x^r` on `C_i`, `0 -> 0`.
#[derive(Clone)]
pub struct CyclotomicMapping {
    field: Arc<FieldSpec>,
    r: u64,
    ell: u64,
    branches: Vec<FieldElement>,
}

impl fmt::Debug for CyclotomicMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CyclotomicMapping")
            .field("q", &self.field.q())
            .field("r", &self.r)
            .field("ell", &self.ell)
            .field("branches", &self.branches)
            .finish()
    }
}

impl PartialEq for CyclotomicMapping {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field
            && self.r == other.r
            && self.ell == other.ell
            && self.branches == other.branches
    }
}

/// Value set size together with the coset bookkeeping that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValueSetReport {
    pub size: u64,
    /// Distinct images among `a_i gamma^{ir} T_0`, counting `{0}` once when
    /// some branch is zero.
    pub c: u64,
    /// Residues `dlog(a_i gamma^{ir}) mod t*ell` of the nonzero branches.
    pub hit_cosets: Vec<u64>,
    pub has_zero_branch: bool,
}

impl CyclotomicMapping {
    pub fn new(field: Arc<FieldSpec>, r: u64, ell: u64, branches: Vec<FieldElement>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("order r must be positive".into()));
        }
        field.check_index(ell)?;
        if branches.len() as u64 != ell {
            return Err(Error::InvalidParameter(format!(
                "index {ell} needs {ell} branch coefficients, got {}",
                branches.len()
            )));
        }
        if let Some(&bad) = branches.iter().find(|&&a| !field.contains(a)) {
            return Err(Error::ForeignElement {
                code: bad.code() as u64,
                q: field.q(),
            });
        }
        Ok(Self {
            field,
            r,
            ell,
            branches,
        })
    }

    pub fn identity(field: Arc<FieldSpec>) -> Self {
        Self {
            field,
            r: 1,
            ell: 1,
            branches: vec![FieldElement::ONE],
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// `(q - 1) / ell`.
    pub fn s(&self) -> u64 {
        self.field.order() / self.ell
    }

    /// `gcd(r, s)`.
    pub fn t(&self) -> u64 {
        gcd(self.r, self.s())
    }

    pub fn branches(&self) -> &[FieldElement] {
        &self.branches
    }

    pub fn eval(&self, x: FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Ok(FieldElement::ZERO);
        }
        let i = self.field.coset_index(self.ell, x)?;
        Ok(self
            .field
            .mul(self.branches[i as usize], self.field.pow(x, self.r)))
    }

    pub fn value_set_size_fast(&self) -> ValueSetReport {
        let classes = self.t() * self.ell;
        let mut hit = vec![false; classes as usize];
        let step = self.r % classes;
        let mut shift = 0u64;
        let mut has_zero_branch = false;
        for &a in &self.branches {
            if a.is_zero() {
                has_zero_branch = true;
            } else {
                let cls = (shift + self.field.log_unchecked(a) as u64) % classes;
                hit[cls as usize] = true;
            }
            shift = (shift + step) % classes;
        }
        let hit_cosets: Vec<u64> = (0..classes).filter(|&c| hit[c as usize]).collect();
        let distinct = hit_cosets.len() as u64;
        ValueSetReport {
            size: 1 + self.s() / self.t() * distinct,
            c: distinct + has_zero_branch as u64,
            hit_cosets,
            has_zero_branch,
        }
    }

    /// `{ eval(x) : x in F_q }` by direct evaluation.
    pub fn value_set_brute(&self) -> BTreeSet<FieldElement> {
        self.field
            .elements()
            .map(|x| self.eval(x).expect("x ranges over the mapping's own field"))
            .collect()
    }

    pub fn is_permutation(&self) -> bool {
        self.value_set_size_fast().size == self.field.q() as u64
    }

    /// Interpolating polynomial of shape `x^r * F(x^s)`.
    pub fn to_polynomial(&self) -> Polynomial {
        poly::from_cyclotomic(self)
    }
}

/// Allocation-free value set sizing for many branch tuples sharing
/// `(field, r, ell)`, as needed by the enumerators and samplers.
pub struct ValueSetCounter<'a> {
    field: &'a FieldSpec,
    step: u64,
    classes: u64,
    coset_size: u64,
    stamp: u32,
    seen: Vec<u32>,
}

impl<'a> ValueSetCounter<'a> {
    pub fn new(field: &'a FieldSpec, r: u64, ell: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("order r must be positive".into()));
        }
        field.check_index(ell)?;
        let s = field.order() / ell;
        let t = gcd(r, s);
        let classes = t * ell;
        Ok(Self {
            field,
            step: r % classes,
            classes,
            coset_size: s / t,
            stamp: 0,
            seen: vec![0; classes as usize],
        })
    }

    /// Number of cosets of index `t*ell`, i.e. the possible nonzero images.
    pub fn classes(&self) -> u64 {
        self.classes
    }

    /// `s / t`, the size of each image coset.
    pub fn coset_size(&self) -> u64 {
        self.coset_size
    }

    /// `|V|` for the mapping with the given branches.
    pub fn size(&mut self, branches: &[FieldElement]) -> u64 {
        self.begin();
        let mut shift = 0u64;
        let mut distinct = 0u64;
        for &a in branches {
            if !a.is_zero() {
                distinct += self.mark(shift, a) as u64;
            }
            shift += self.step;
            if shift >= self.classes {
                shift -= self.classes;
            }
        }
        1 + self.coset_size * distinct
    }

    fn begin(&mut self) {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.stamp = 1;
        }
    }

    #[inline]
    fn mark(&mut self, shift: u64, a: FieldElement) -> bool {
        let cls = ((shift + self.field.log_unchecked(a) as u64) % self.classes) as usize;
        if self.seen[cls] == self.stamp {
            false
        } else {
            self.seen[cls] = self.stamp;
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u64) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::of_order(q).unwrap())
    }

    fn elems(codes: &[u32]) -> Vec<FieldElement> {
        codes.iter().map(|&c| FieldElement::from_code(c)).collect()
    }

    fn mapping(q: u64, r: u64, ell: u64, a: &[u32]) -> CyclotomicMapping {
        CyclotomicMapping::new(f(q), r, ell, elems(a)).unwrap()
    }

    #[test]
    fn eval_examples() {
        let m = mapping(5, 1, 2, &[1, 2]);
        assert_eq!(m.eval(FieldElement::ZERO).unwrap(), FieldElement::ZERO);
        assert_eq!(m.eval(elems(&[3])[0]).unwrap().code(), 1);
        let id = CyclotomicMapping::identity(f(9));
        for x in id.field().clone().elements() {
            assert_eq!(id.eval(x).unwrap(), x);
        }
    }

    #[test]
    fn value_set_examples() {
        let id = CyclotomicMapping::identity(f(7));
        assert_eq!(id.value_set_size_fast().size, 7);
        assert!(id.is_permutation());
        assert_eq!(id.value_set_brute().len(), 7);

        let zero = mapping(7, 1, 3, &[0, 0, 0]);
        let rep = zero.value_set_size_fast();
        assert_eq!(rep.size, 1);
        assert_eq!(rep.c, 1);
        assert!(rep.has_zero_branch);
        assert_eq!(zero.value_set_brute(), BTreeSet::from([FieldElement::ZERO]));

        let m = mapping(5, 1, 2, &[1, 2]);
        let rep = m.value_set_size_fast();
        assert_eq!(rep.size, 3);
        assert_eq!(rep.hit_cosets, vec![0]);
        assert_eq!(rep.c, 1);
        assert_eq!(m.value_set_brute(), BTreeSet::from_iter(elems(&[0, 1, 4])));
    }

    #[test]
    fn rejects_bad_shapes() {
        let field = f(7);
        assert!(matches!(
            CyclotomicMapping::new(field.clone(), 1, 4, elems(&[1, 1, 1, 1])),
            Err(Error::IndexNotDivisor { .. })
        ));
        assert!(CyclotomicMapping::new(field.clone(), 1, 2, elems(&[1])).is_err());
        assert!(CyclotomicMapping::new(field.clone(), 0, 1, elems(&[1])).is_err());
        assert!(CyclotomicMapping::new(field, 1, 1, elems(&[9])).is_err());
    }

    #[test]
    fn exhaustive_fast_equals_brute_small_fields() {
        for q in [3u64, 4, 5, 7, 8, 9] {
            let field = f(q);
            for ell in field.indices().into_iter().filter(|&l| (q as u128).pow(l as u32) <= 5000) {
                for r in 1..=(q - 1) {
                    let total = q.pow(ell as u32);
                    for mut code in 0..total {
                        let mut a = Vec::with_capacity(ell as usize);
                        for _ in 0..ell {
                            a.push(FieldElement::from_code((code % q) as u32));
                            code /= q;
                        }
                        let m = CyclotomicMapping::new(field.clone(), r, ell, a.clone()).unwrap();
                        let fast = m.value_set_size_fast();
                        let brute = m.value_set_brute();
                        assert_eq!(fast.size, brute.len() as u64, "{m:?}");
                        let mut counter = ValueSetCounter::new(&field, r, ell).unwrap();
                        assert_eq!(counter.size(&a), fast.size);
                        // permutation iff bijective
                        let bijective = field.elements().map(|x| m.eval(x).unwrap()).collect::<BTreeSet<_>>().len()
                            == q as usize;
                        assert_eq!(m.is_permutation(), bijective);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn fast_matches_brute_and_congruence(
            qi in 0usize..6,
            ell_pick in 0usize..16,
            r in 1u64..40,
            seed in proptest::collection::vec(0u32..1_000_000, 64),
        ) {
            let q = [11u64, 13, 16, 25, 27, 49][qi];
            let field = f(q);
            let divs = field.indices();
            let ell = divs[ell_pick % divs.len()];
            let a: Vec<FieldElement> = (0..ell as usize)
                .map(|i| FieldElement::from_code(seed[i % 64].wrapping_mul(i as u32 + 1) % q as u32))
                .collect();
            let m = CyclotomicMapping::new(field, r, ell, a).unwrap();
            let rep = m.value_set_size_fast();
            prop_assert_eq!(rep.size, m.value_set_brute().len() as u64);
            let unit = m.s() / m.t();
            prop_assert_eq!((rep.size - 1) % unit, 0);
            let expected = if rep.has_zero_branch { (rep.c - 1) * unit + 1 } else { rep.c * unit + 1 };
            prop_assert_eq!(rep.size, expected);
        }
    }
}
