//! k-positivity and k-superpositivity: refuting a disguised non-positive
//! map, and certifying a superpositive one by Kraus operators of low rank.

use mapcone::cones::{member, ConeExpr, MemberConfig, Status};
use mapcone::family::{self, PhiLambdaSpec};
use mapcone::linalg::{complex_gaussian, random_low_rank, seeded_rng, ComplexMatrix};
use mapcone::superop::{compose, MapDims, SuperOperator};

fn main() -> mapcone::Result<()> {
    let cfg = MemberConfig::default();
    let mut rng = seeded_rng(11);

    // Tr - 0.7 Ad_I is 1-positive but not 2-positive; conjugating hides the form.
    let base = family::build(&PhiLambdaSpec::new(ComplexMatrix::identity(3), 0.7)?);
    let a = SuperOperator::conjugation(&complex_gaussian(3, 3, &mut rng));
    let b = SuperOperator::conjugation(&complex_gaussian(3, 3, &mut rng));
    let phi = compose(&a, &compose(&base, &b)?)?;
    for k in 1..=2 {
        let v = member(&phi, &ConeExpr::k_positive(k), &cfg)?;
        println!("P_{k}: {:?}", v.status);
        if v.status == Status::NotMember {
            let w = v.witness.as_ref().unwrap();
            println!("  witness pairing {:.3e}, evidence {:?}", w.pairing, kind(&w.evidence));
            println!("  re-verified: {}", v.reverify(&phi));
        }
    }

    // A sum of two rank-2 conjugations is 2-superpositive.
    let dims = MapDims::new(3, 3)?;
    let ops = [random_low_rank(3, 3, 2, &mut rng), random_low_rank(3, 3, 2, &mut rng)];
    let psi = SuperOperator::from_kraus(&ops)?;
    for k in 1..dims.min() {
        let v = member(&psi, &ConeExpr::k_superpositive(k), &cfg)?;
        println!("SP_{k}: {:?} (re-verified {})", v.status, v.reverify(&psi));
    }
    Ok(())
}

fn kind(e: &mapcone::cones::Evidence) -> &'static str {
    use mapcone::cones::Evidence::*;
    match e {
        NegativeEigenvector { .. } => "negative eigenvector",
        VectorPair { .. } => "vector pair",
        ProjectionPair { .. } => "projection pair",
        Composition { .. } => "composition",
        DualPairing => "dual pairing",
        Transposed { .. } => "transposed",
    }
}
