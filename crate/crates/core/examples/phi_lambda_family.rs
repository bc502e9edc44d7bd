//! The family Tr - λ Ad_V: analytic thresholds against brute-force
//! projection sampling.

use mapcone::family::{self, brute_force_k_positivity, PhiLambdaSpec};
use mapcone::linalg::ComplexMatrix;

fn main() -> mapcone::Result<()> {
    let v = ComplexMatrix::diag_real(&[2.0, 1.0, 0.5]);
    println!("V = diag(2, 1, 0.5)");
    println!("CP threshold 1/Tr(VV†) = {:.6}", family::cp_threshold(&v)?);
    for k in 1..=3 {
        let thr = family::k_positivity_threshold(&v, k)?;
        let spec = PhiLambdaSpec::new(v.clone(), thr)?;
        let below = brute_force_k_positivity(&spec.with_lambda(0.99 * thr), k, 500, k as u64, 1e-9)?;
        let above = brute_force_k_positivity(&spec.with_lambda(1.01 * thr), k, 500, k as u64, 1e-9)?;
        println!(
            "k = {k}: threshold {thr:.6}; at 0.99x k-positive = {}, at 1.01x k-positive = {} (min eig {:.3e})",
            below.k_positive, above.k_positive, above.min_eigenvalue
        );
    }
    Ok(())
}
