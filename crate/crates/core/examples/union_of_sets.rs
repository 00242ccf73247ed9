//! Size of a union of random subsets: exact law, moments and normal
//! parameters.

use vslab::dist::NormalityThresholds;
use vslab::union::{bp_moments, union_asymptotic, union_dist};
use vslab::UnionModel;

fn main() -> vslab::Result<()> {
    let model = UnionModel::new(4, vec![2, 2])?;
    for (x, p) in union_dist(&model)?.iter() {
        println!("P(X = {x}) = {p}");
    }
    let (mean, var) = bp_moments(4, 2, 2)?;
    println!("E(X) = {mean}, V(X) = {var}");

    let big = UnionModel::equal(1000, 1, 1000)?;
    let p = union_asymptotic(&big, &NormalityThresholds::default());
    println!("n=1000, 1000 singletons: mu = {:.3}, sigma^2 = {:.3}, ok = {}", p.mu, p.sigma2, p.hypotheses_ok());
    Ok(())
}
