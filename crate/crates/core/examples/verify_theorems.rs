//! Runs the full numerical check suite and prints a one-line summary per check.
//!
//! cargo run --example verify_theorems -- [seed]

use mapcone::superop::MapDims;
use mapcone::verifier::run_all;

fn main() -> mapcone::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let dims = [MapDims::new(2, 2)?, MapDims::new(2, 3)?, MapDims::new(3, 3)?];
    let reports = run_all(&dims, seed, 1e-9)?;
    for r in &reports {
        println!(
            "{:<4} {:<34} ({},{})  trials {:>4}  max violation {:.2e}",
            if r.pass { "ok" } else { "FAIL" },
            r.check_id,
            r.m,
            r.n,
            r.trials,
            r.max_violation
        );
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    println!("{} checks, {} failed", reports.len(), failed);
    if failed > 0 {
        std::process::exit(1);
    }
    Ok(())
}
