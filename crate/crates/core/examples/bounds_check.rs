//! Runs the value set bound checks over every mapping of F_7 and F_8.

use std::sync::Arc;

use vslab::sim::check_bounds;
use vslab::FieldSpec;

fn main() -> vslab::Result<()> {
    for q in [7u64, 8] {
        let f = Arc::new(FieldSpec::of_order(q)?);
        let report = check_bounds(&f, q - 1, &[1], 100_000_000)?;
        println!(
            "q={q}: {} mappings, {} permutations, {} violations",
            report.instances,
            report.permutations(),
            report.violations.len()
        );
    }
    Ok(())
}
