//! Value set sizes of cyclotomic mappings from the coset classes, checked
//! against direct evaluation, and a count of permutation mappings.

use std::sync::Arc;

use vslab::{CyclotomicMapping, FieldSpec, ValueSetCounter};

fn main() -> vslab::Result<()> {
    let f = Arc::new(FieldSpec::prime(13)?);
    let branches = [1u64, 0, 5, 5].iter().map(|&c| f.element(c)).collect::<vslab::Result<Vec<_>>>()?;
    let m = CyclotomicMapping::new(f.clone(), 2, 4, branches)?;
    let report = m.value_set_size_fast();
    println!("{m:?}");
    println!("fast |V| = {}, hit cosets {:?}", report.size, report.hit_cosets);
    println!("brute |V| = {}", m.value_set_brute().len());

    // permutations among index-3 mappings of order 1 over F_7 with nonzero branches
    let f7 = FieldSpec::prime(7)?;
    let mut counter = ValueSetCounter::new(&f7, 1, 3)?;
    let mut pp = 0;
    for a in 1..7u64 {
        for b in 1..7u64 {
            for c in 1..7u64 {
                let branches = [a, b, c].map(|x| f7.element(x).unwrap());
                pp += (counter.size(&branches) == 7) as u32;
            }
        }
    }
    println!("{pp} of 216 index-3 mappings over F_7 permute");
    Ok(())
}
