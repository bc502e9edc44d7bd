//! Dual cone expressions, and pairing between sampled generators of a cone
//! and of its dual.

use mapcone::cones::{bidual_inclusion, dual_expr, ConeExpr};
use mapcone::superop::MapDims;

fn main() -> mapcone::Result<()> {
    for text in ["P", "CP", "Pk(2)", "meet(CP,t(CP))", "dual(join(SP,t(Pk(2))))"] {
        let c: ConeExpr = text.parse()?;
        let dual = dual_expr(&c.normalize(None)?)?;
        println!("{text:>28}  dual = {dual}");
    }

    let dims = MapDims::new(3, 3)?;
    for text in ["Pk(2)", "SPk(2)", "t(CP)", "meet(CP,t(CP))"] {
        let c: ConeExpr = text.parse()?;
        let r = bidual_inclusion(&c, dims, 20, 0, 1e-9)?;
        println!(
            "{text:>16}: {} x {} generator pairs, min pairing {:.3e}, pass {}",
            r.samples,
            r.samples,
            r.min_pairing.unwrap_or(f64::NAN),
            r.pass
        );
    }
    Ok(())
}
