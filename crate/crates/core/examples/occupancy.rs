//! Empty boxes in the occupancy problem: closed form, sieve inversion and
//! exhaustive enumeration agree exactly.

use vslab::dist::{occupancy_dist, occupancy_moment, occupancy_sieve_terms, sieve_p_from_s};
use vslab::sim::{enumerate_occupancy, tv_distance};

fn main() -> vslab::Result<()> {
    let (t, ell) = (2, 4);
    let exact = occupancy_dist(t, ell)?;
    for (k, p) in exact.iter() {
        println!("P(Y = {k}) = {p}");
    }
    println!("E(Y) = {}", occupancy_moment(t, ell, 1)?);
    assert_eq!(sieve_p_from_s(&occupancy_sieve_terms(t, ell)?)?, exact);
    let enumerated = enumerate_occupancy(t, ell, 10_000_000)?.to_exact()?;
    println!("TV(enumeration, formula) = {}", tv_distance(&enumerated, &exact));
    Ok(())
}
