//! Exact law of |V_g| for a uniformly random polynomial with g(0) = 0, and
//! the small value set approximation.

use vslab::combin::{ln_rational, to_f64};
use vslab::dist::{full_poly_valueset_prob, random_poly_valueset_dist, small_valueset_asymptotic_ln};
use vslab::CycloModel;

fn main() -> vslab::Result<()> {
    let d = random_poly_valueset_dist(&CycloModel::new(7, 6, 1)?)?;
    for (size, p) in d.iter() {
        println!("P(|V| = {size}) = {p} ~ {:.6}", to_f64(p));
    }
    println!("mean {}", to_f64(&d.mean()));

    for q in [101u64, 499, 997] {
        let exact = ln_rational(&full_poly_valueset_prob(q, 2)?);
        let approx = small_valueset_asymptotic_ln(q, 2);
        println!("q={q}: P(|V| = 3) exact/approx = {:.5}", (exact - approx).exp());
    }
    Ok(())
}
