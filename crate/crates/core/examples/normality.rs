//! KS distance between standardized missing-value counts and N(0, 1) as q
//! grows.

use vslab::dist::{asymptotic_params_random_poly, NormalityThresholds};
use vslab::sim::{ks_normal_counts, sample_valueset};
use vslab::{FieldSpec, MonteCarlo};

fn main() -> vslab::Result<()> {
    let thr = NormalityThresholds::default();
    for q in [101u64, 499, 1999] {
        let f = FieldSpec::prime(q)?;
        let sizes = sample_valueset(&f, q - 1, 1, false, &MonteCarlo::new(10_000, 7))?;
        let p = asymptotic_params_random_poly(q, &thr);
        let ks = ks_normal_counts(&sizes.map_values(|v| q - v), p.mu, p.sigma())?;
        println!("q={q}: KS = {ks:.4}");
    }
    Ok(())
}
