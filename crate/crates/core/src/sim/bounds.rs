use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::check_budget;
use crate::cyclo::CyclotomicMapping;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::from_cyclotomic;

/// Shape of one checked polynomial: value set size, degree and index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BoundRecord {
    pub size: u64,
    pub degree: u64,
    pub index: u64,
    pub is_pp: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundRule {
    /// Non-PP: `|V| <= q - (q-1)/d`.
    DegreeUpper,
    /// Non-PP of index `ell > 1`: `|V| <= q - (q-1)/ell`.
    IndexUpper,
    /// Nonconstant: `|V| >= ceil(q/d)`.
    MinimalLower,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub rule: BoundRule,
    pub r: u64,
    pub ell: u64,
    pub branches: Vec<FieldElement>,
    pub record: BoundRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecordCount {
    #[serde(flatten)]
    pub record: BoundRecord,
    pub count: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub q: u64,
    pub instances: u64,
    pub skipped_constant: u64,
    pub records: Vec<RecordCount>,
    pub violations: Vec<BoundViolation>,
}

impl BoundReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn permutations(&self) -> u64 {
        self.records.iter().filter(|rc| rc.record.is_pp).map(|rc| rc.count).sum()
    }
}

#[derive(Default)]
struct Tally {
    instances: u64,
    skipped: u64,
    records: BTreeMap<BoundRecord, u64>,
    violations: Vec<BoundViolation>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.instances += other.instances;
        self.skipped += other.skipped;
        for (k, v) in other.records {
            *self.records.entry(k).or_default() += v;
        }
        self.violations.extend(other.violations);
        self
    }
}

fn violated(q: u64, rec: &BoundRecord) -> Vec<BoundRule> {
    let mut out = Vec::new();
    let (v, d, ell) = (rec.size, rec.degree, rec.index);
    if !rec.is_pp {
        if d * v > d * q - (q - 1) {
            out.push(BoundRule::DegreeUpper);
        }
        if ell > 1 && ell * v > ell * q - (q - 1) {
            out.push(BoundRule::IndexUpper);
        }
    }
    if d * v < q {
        out.push(BoundRule::MinimalLower);
    }
    out
}

fn check_one(field: &Arc<FieldSpec>, r: u64, ell: u64, branches: &[FieldElement], tally: &mut Tally) -> Result<()> {
    let q = field.q() as u64;
    let mapping = CyclotomicMapping::new(field.clone(), r, ell, branches.to_vec())?;
    let poly = from_cyclotomic(&mapping);
    tally.instances += 1;
    let degree = match poly.degree() {
        Some(d) if d > 0 => d as u64,
        _ => {
            tally.skipped += 1;
            return Ok(());
        }
    };
    let size = mapping.value_set_size_fast().size;
    let record = BoundRecord {
        size,
        degree,
        index: poly.index_decompose()?.ell,
        is_pp: size == q,
    };
    *tally.records.entry(record).or_default() += 1;
    for rule in violated(q, &record) {
        tally.violations.push(BoundViolation {
            rule,
            r,
            ell,
            branches: branches.to_vec(),
            record,
        });
    }
    Ok(())
}

/// Interpolates every cyclotomic mapping of order `r` in `rs` and index
/// `ell <= ell_max` (branches over all of `F_q`) and checks the upper bounds
/// for non-permutations together with the minimal value set lower bound.
///
/// With `ell = q - 1` and `r = 1` this covers every polynomial of degree
/// below `q` with `g(0) = 0`.
pub fn check_bounds(field: &Arc<FieldSpec>, ell_max: u64, rs: &[u64], budget: u64) -> Result<BoundReport> {
    if rs.contains(&0) {
        return Err(Error::InvalidParameter("order r must be positive".into()));
    }
    let q = field.q();
    let ells: Vec<u64> = field.indices().into_iter().filter(|&l| l <= ell_max).collect();
    let needed: u128 = ells
        .iter()
        .map(|&l| (0..l).fold(1u128, |a, _| a.saturating_mul(q as u128)))
        .fold(0u128, |a, b| a.saturating_add(b))
        .saturating_mul(rs.len() as u128);
    check_budget("mappings", needed, budget)?;
    let mut total = Tally::default();
    for &ell in &ells {
        for &r in rs {
            let part = (0..q)
                .into_par_iter()
                .map(|first| -> Result<Tally> {
                    let mut tally = Tally::default();
                    let mut branches = vec![FieldElement::ZERO; ell as usize];
                    branches[0] = FieldElement::from_code(first);
                    loop {
                        check_one(field, r, ell, &branches, &mut tally)?;
                        let mut i = 1;
                        loop {
                            if i == branches.len() {
                                return Ok(tally);
                            }
                            let next = branches[i].code() + 1;
                            if next < q {
                                branches[i] = FieldElement::from_code(next);
                                break;
                            }
                            branches[i] = FieldElement::ZERO;
                            i += 1;
                        }
                    }
                })
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
            total = total.merge(part);
        }
    }
    total.violations.sort_by(|a, b| (a.rule, a.r, a.ell, &a.branches).cmp(&(b.rule, b.r, b.ell, &b.branches)));
    Ok(BoundReport {
        q: q as u64,
        instances: total.instances,
        skipped_constant: total.skipped,
        records: total
            .records
            .into_iter()
            .map(|(record, count)| RecordCount { record, count })
            .collect(),
        violations: total.violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::factorial;
    use num_traits::ToPrimitive;

    #[test]
    fn rules_fire_on_bad_records() {
        let rec = |size, degree, index, is_pp| BoundRecord { size, degree, index, is_pp };
        assert!(violated(7, &rec(7, 5, 6, true)).is_empty());
        assert_eq!(violated(7, &rec(6, 2, 1, false)), vec![BoundRule::DegreeUpper]);
        assert_eq!(violated(7, &rec(6, 6, 2, false)), vec![BoundRule::IndexUpper]);
        assert_eq!(violated(7, &rec(2, 3, 1, false)), vec![BoundRule::MinimalLower]);
    }

    #[test]
    fn small_fields_are_clean() {
        let f5 = Arc::new(FieldSpec::prime(5).unwrap());
        let report = check_bounds(&f5, 4, &[1, 2, 3], 10_000).unwrap();
        assert!(report.is_clean(), "{:?}", report.violations);
        assert_eq!(report.instances, 3 * (5 + 25 + 625));

        let f7 = Arc::new(FieldSpec::prime(7).unwrap());
        let report = check_bounds(&f7, 6, &[1], 1_000_000).unwrap();
        assert!(report.is_clean());
        // one zero mapping per index 1, 2, 3, 6
        assert_eq!(report.skipped_constant, 4);
        // index 6 alone already yields every PP vanishing at zero
        assert!(report.permutations() >= factorial(6).to_u64().unwrap());
        assert!(check_bounds(&f7, 6, &[1], 1000).is_err());
    }
}
