//! Index form of a polynomial and the round trip through its cyclotomic
//! mapping.

use std::sync::Arc;

use vslab::{from_cyclotomic, FieldSpec, Polynomial};

fn main() -> vslab::Result<()> {
    let f = Arc::new(FieldSpec::prime(11)?);
    // x^3 + x^5
    let g = Polynomial::from_codes(f.clone(), &[0, 0, 0, 1, 0, 1])?;
    let form = g.index_decompose()?;
    println!("r={} s={} l={} f exponents {:?}", form.r, form.s, form.ell, form.f_exponents);

    let m = g.to_cyclotomic()?;
    println!("branches {:?}", m.branches());
    println!("|V| = {} (brute force {})", m.value_set_size_fast().size, g.value_set_brute().len());
    assert_eq!(from_cyclotomic(&m), g);

    let f16 = Arc::new(FieldSpec::of_order(16)?);
    let h = Polynomial::from_codes(f16, &[0, 3, 0, 0, 0, 0, 0, 5, 0, 0, 0, 0, 0, 1])?;
    let form = h.index_decompose()?;
    println!("over F_16: r={} s={} l={}", form.r, form.s, form.ell);
    Ok(())
}
