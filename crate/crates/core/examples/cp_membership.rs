//! Complete positivity: certificates, witnesses, and checking them again.

use mapcone::cones::{member, witness_search, ConeExpr, MemberConfig};
use mapcone::linalg::{complex_gaussian, seeded_rng};
use mapcone::superop::SuperOperator;

fn main() -> mapcone::Result<()> {
    let cfg = MemberConfig::default();
    let cp = ConeExpr::cp();

    let id = SuperOperator::identity(2);
    let v = member(&id, &cp, &cfg)?;
    println!("id: {:?}, certificate {:?}", v.status, v.certificate);

    let t = SuperOperator::transposition(2);
    let v = member(&t, &cp, &cfg)?;
    let w = v.witness.as_ref().expect("transposition is not CP");
    println!("t: {:?}, pairing with dual element {:.6}, re-verified {}", v.status, w.pairing, v.reverify(&t));

    if let Some(found) = witness_search(&t, &cp, &cfg)? {
        println!("witness in {} with value {:.6}", found.dual_cone, found.value);
    }

    let mut rng = seeded_rng(3);
    let ops: Vec<_> = (0..3).map(|_| complex_gaussian(3, 2, &mut rng)).collect();
    let phi = SuperOperator::from_kraus(&ops)?;
    let v = member(&phi, &cp, &cfg)?;
    println!("three Kraus operators 3x2: {:?}", v.status);
    println!("{}", serde_json::to_string_pretty(&v.certificate).unwrap());
    Ok(())
}
