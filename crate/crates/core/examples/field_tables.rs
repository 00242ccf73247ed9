//! Builds a few fields and prints their primitive element, modulus and a
//! slice of the discrete log table.

use vslab::{FieldBuilder, FieldSpec};

fn main() -> vslab::Result<()> {
    for q in [5u64, 7, 8, 9, 16] {
        let f = FieldSpec::of_order(q)?;
        println!(
            "F_{q}: p={} k={} modulus={:?} gamma={}",
            f.p(),
            f.k(),
            f.modulus(),
            f.gamma()
        );
    }

    // explicit modulus x^2 + x + 2 over F_3, elements printed as coefficient vectors
    let f9 = FieldBuilder::new(3, 2).modulus(&[2, 1, 1]).build()?;
    for x in f9.nonzero_elements() {
        println!("{:?} = gamma^{}", f9.coeffs(x), f9.dlog(x)?);
    }

    // cosets of index 4 in F_13^*
    let f13 = FieldSpec::prime(13)?;
    for i in 0..4 {
        let coset: Vec<u32> = f13
            .nonzero_elements()
            .filter(|&x| f13.coset_index(4, x).unwrap() == i)
            .map(|x| x.code())
            .collect();
        println!("C_{i} = {coset:?}");
    }
    Ok(())
}
