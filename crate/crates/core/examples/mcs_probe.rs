//! Closure of cones under composition with CP maps on both sides, and
//! symmetry of duals under the transpose twirl and adjoints.

use mapcone::cones::{mcs_stability_probe, symmetric_dual_probe, ConeExpr, MemberConfig};
use mapcone::superop::MapDims;

fn main() -> mapcone::Result<()> {
    let cfg = MemberConfig { samples: 50, restarts: 8, ..MemberConfig::default() };
    let dims = MapDims::new(2, 3)?;
    for c in [ConeExpr::cp(), ConeExpr::superpositive(), ConeExpr::transposed(ConeExpr::cp())] {
        let r = mcs_stability_probe(&c, dims, 40, &cfg)?;
        println!(
            "{:>6}: {} samples, {} certified, min dual pairing {:.3e}, pass {}",
            r.cone,
            r.samples,
            r.certified,
            r.min_pairing.unwrap_or(f64::NAN),
            r.pass
        );
    }
    let square = MapDims::new(3, 3)?;
    for c in [ConeExpr::positive(), ConeExpr::k_superpositive(2), ConeExpr::cp()] {
        let r = symmetric_dual_probe(&c, square, 20, 0, 1e-9)?;
        println!("{:>7}: twirl/adjoint of dual samples, min pairing {:.3e}", r.cone, r.min_pairing.unwrap_or(f64::NAN));
    }
    Ok(())
}
