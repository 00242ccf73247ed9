//! Seeded, worker-count independent sampling of value set sizes, compared to
//! the exact mean.

use vslab::combin::to_f64;
use vslab::dist::random_poly_moment;
use vslab::{CycloModel, FieldSpec, MonteCarlo};
use vslab::sim::sample_valueset;

fn main() -> vslab::Result<()> {
    let q = 1009;
    let f = FieldSpec::prime(q)?;
    let mc = MonteCarlo::new(20_000, 2024);
    let sizes = sample_valueset(&f, q - 1, 1, false, &mc)?;
    let again = sample_valueset(&f, q - 1, 1, false, &mc.workers(1))?;
    assert_eq!(sizes, again);

    let missing = sizes.map_values(|v| q - v);
    let exact = to_f64(&random_poly_moment(&CycloModel::new(q, q - 1, 1)?, 1)?);
    println!("missing values: sample mean {:.3}, exact {exact:.3}, q/e {:.3}", missing.mean(), q as f64 / std::f64::consts::E);
    Ok(())
}
