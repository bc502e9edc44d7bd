//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use mapcone::cones::{
    bidual_inclusion, dual_expr, mcs_stability_probe, member, pair, sample_generators, symmetric_dual_probe,
    witness_search, ConeExpr, Evidence, MemberConfig, Status,
};
use mapcone::family;
use mapcone::linalg::{complex_gaussian, hs_inner, seeded_rng, ComplexMatrix};
use mapcone::superop::{compose, MapDims, SuperOperator};
use mapcone::verifier::{check_isometry, check_lemma6, check_prop1, check_thm2, check_thm5, check_threshold_flip};

const TOL: f64 = 1e-9;

type Outcome = Result<(), Box<dyn std::error::Error>>;
type Criterion = (&'static str, fn() -> Outcome);

fn dims(m: usize, n: usize) -> MapDims {
    MapDims::new(m, n).unwrap()
}

fn shapes() -> [MapDims; 3] {
    [dims(2, 2), dims(2, 3), dims(3, 3)]
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg().into())
    }
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn report(r: &mapcone::verifier::CheckReport) -> Outcome {
    ensure(r.pass, || format!("{} at ({},{}): {}", r.check_id, r.m, r.n, r.violation.clone().unwrap_or_default()))
}

fn isometry() -> Outcome {
    let start = Instant::now();
    for (i, d) in shapes().into_iter().enumerate() {
        report(&check_isometry(d, 100, i as u64, TOL)?)?;
        // Independent pass: the Choi inner product against the sum of block
        // inner products computed from `apply` on matrix units.
        let mut rng = seeded_rng(50 + i as u64);
        for _ in 0..100 {
            let phi = SuperOperator::random(d, &mut rng);
            let psi = SuperOperator::random(d, &mut rng);
            let mut sum = num_complex::Complex64::new(0.0, 0.0);
            for k in 0..d.m {
                for l in 0..d.m {
                    let f = ComplexMatrix::unit(d.m, d.m, k, l);
                    sum += hs_inner(&phi.apply(&f)?, &psi.apply(&f)?)?;
                }
            }
            let choi = hs_inner(phi.choi(), psi.choi())?;
            let dev = (sum - choi).norm();
            ensure(dev <= TOL, || format!("({},{}): deviation {dev:e}", d.m, d.n))?;
        }
    }
    within(start, Duration::from_secs(5))
}

fn adjoint_identities() -> Outcome {
    let start = Instant::now();
    for (i, d) in shapes().into_iter().enumerate() {
        let r = check_prop1(d, 100, i as u64, TOL)?;
        report(&r)?;
        ensure(r.max_violation <= TOL, || format!("max violation {:e}", r.max_violation))?;
    }
    within(start, Duration::from_secs(5))
}

fn conjugation_choi() -> Outcome {
    for (i, d) in shapes().into_iter().enumerate() {
        let r = check_lemma6(d, 50, i as u64, 1e-12)?;
        report(&r)?;
    }
    Ok(())
}

fn cp_classifier() -> Outcome {
    let cfg = MemberConfig::default();
    let cp = ConeExpr::cp();
    for m in 1..=4 {
        let v = member(&SuperOperator::identity(m), &cp, &cfg)?;
        ensure(v.status == Status::Member, || format!("id on C^{m}: {:?}", v.status))?;
    }
    let t = SuperOperator::transposition(2);
    let v = member(&t, &cp, &cfg)?;
    ensure(v.status == Status::NotMember, || format!("transposition: {:?}", v.status))?;
    let w = v.witness.as_ref().ok_or("transposition: no witness")?;
    match &w.evidence {
        Evidence::NegativeEigenvector { eigenvalue, .. } => {
            ensure((eigenvalue + 1.0).abs() <= TOL, || format!("witness eigenvalue {eigenvalue}"))?
        }
        other => return Err(format!("unexpected evidence {other:?}").into()),
    }
    ensure(v.reverify(&t), || "transposition witness does not re-verify".into())?;

    let mut rng = seeded_rng(4);
    for i in 0..50 {
        let d = shapes()[i % 3];
        let count = 1 + i % (d.m * d.n);
        let ops: Vec<_> = (0..count).map(|_| complex_gaussian(d.n, d.m, &mut rng)).collect();
        let phi = SuperOperator::from_kraus(&ops)?;
        let v = member(&phi, &cp, &cfg)?;
        ensure(v.status == Status::Member && v.reverify(&phi), || format!("Kraus map {i}: {:?}", v.status))?;
    }
    Ok(())
}

/// Cone expressions of depth at most 3 over the base cones.
fn expressions() -> Vec<ConeExpr> {
    let leaves = ["CP", "P", "SP", "Pk(2)", "SPk(2)"].map(|s| s.parse::<ConeExpr>().unwrap());
    let mut out: Vec<ConeExpr> = leaves.to_vec();
    for l in &leaves {
        out.push(ConeExpr::transposed(l.clone()));
        out.push(ConeExpr::dual(l.clone()));
    }
    for (i, a) in leaves.iter().enumerate() {
        for b in &leaves[i + 1..] {
            out.push(ConeExpr::meet(a.clone(), b.clone()));
            out.push(ConeExpr::join(a.clone(), b.clone()));
        }
    }
    let tcp = ConeExpr::transposed(ConeExpr::cp());
    for l in &leaves {
        out.push(ConeExpr::meet(tcp.clone(), l.clone()));
        out.push(ConeExpr::join(tcp.clone(), l.clone()));
        out.push(ConeExpr::dual(ConeExpr::meet(ConeExpr::cp(), l.clone())));
        out.push(ConeExpr::transposed(ConeExpr::join(ConeExpr::cp(), l.clone())));
    }
    out
}

fn duality_pairing() -> Outcome {
    for d in shapes() {
        for k in 1..d.min() {
            let p = sample_generators(&ConeExpr::k_positive(k), d, 40, k as u64)?.maps;
            let sp = sample_generators(&ConeExpr::k_superpositive(k), d, 40, 10 + k as u64)?.maps;
            for phi in &p {
                for psi in &sp {
                    let value = pair(psi, phi)?;
                    ensure(value >= -TOL, || format!("P_{k}/SP_{k} at {d}: pairing {value:e}"))?;
                }
            }
        }
    }
    let exprs = expressions();
    for c in &exprs {
        ensure(c.depth() <= 3, || format!("{c} has depth {}", c.depth()))?;
        let r = bidual_inclusion(c, dims(3, 3), 12, 3, TOL)?;
        ensure(r.pass, || format!("bidual {c}: {:?}", r.violations))?;
    }
    let dual_p = dual_expr(&"P".parse()?)?;
    let dual_cp = dual_expr(&"CP".parse()?)?;
    ensure(dual_p == ConeExpr::superpositive(), || format!("dual(P) = {dual_p}"))?;
    ensure(dual_cp == ConeExpr::cp(), || format!("dual(CP) = {dual_cp}"))?;
    ensure(dual_p.to_string() == "SP" && dual_cp.to_string() == "CP", || "display".into())
}

fn dual_compositions() -> Outcome {
    let start = Instant::now();
    let d = dims(3, 3);
    for c in [ConeExpr::cp(), ConeExpr::k_superpositive(2)] {
        report(&check_thm2(&c, d, 20, 6, TOL)?)?;
    }
    let cfg = MemberConfig::default();
    let t = SuperOperator::transposition(3);
    let found = witness_search(&t, &ConeExpr::cp(), &cfg)?.ok_or("transposition not refuted")?;
    let floor = compose(&found.psi.adjoint(), &t)?.choi_min_eigenvalue(TOL)?;
    ensure(floor < -TOL, || format!("Ψ*∘t has Choi floor {floor:e}"))?;
    within(start, Duration::from_secs(60))
}

fn projection_conditions() -> Outcome {
    let start = Instant::now();
    let v = ComplexMatrix::identity(3);
    let cp = family::cp_threshold(&v)?;
    ensure((cp - 1.0 / 3.0).abs() <= TOL, || format!("CP threshold {cp}"))?;
    let spec = family::PhiLambdaSpec::new(v.clone(), 1.0)?;
    for (lambda, expect) in [(cp * 0.99, true), (cp * 1.01, false)] {
        let is_cp = family::build(&spec.with_lambda(lambda)).choi_min_eigenvalue(TOL)? >= -TOL;
        ensure(is_cp == expect, || format!("λ = {lambda}: CP {is_cp}"))?;
    }
    for k in 1..=3 {
        let thr = family::k_positivity_threshold(&v, k)?;
        ensure((thr - 1.0 / k as f64).abs() <= TOL, || format!("k = {k}: threshold {thr}"))?;
        report(&check_threshold_flip(&v, k, 2000, 0.02, k as u64, TOL)?)?;
        for factor in [0.5, 1.5] {
            let phi = family::build(&spec.with_lambda(thr * factor));
            report(&check_thm5(&phi, k, 20, 70 + k as u64, TOL)?)?;
        }
    }
    within(start, Duration::from_secs(120))
}

fn probes() -> Outcome {
    let cfg = MemberConfig { samples: 50, restarts: 8, seed: 8, ..MemberConfig::default() };
    let tcp = ConeExpr::transposed(ConeExpr::cp());
    for d in [dims(2, 3), dims(3, 3)] {
        for c in [ConeExpr::cp(), ConeExpr::superpositive(), tcp.clone()] {
            let r = mcs_stability_probe(&c, d, 100, &cfg)?;
            ensure(r.pass && r.samples == 100, || format!("{c} at {d}: {:?}", r.violations))?;
            ensure(r.certified == 100, || format!("{c} at {d}: {} of 100 certified", r.certified))?;
        }
    }
    // The two-sided twirl keeps CP maps CP.
    let mut rng = seeded_rng(9);
    for _ in 0..100 {
        let phi = SuperOperator::random_cp(dims(3, 3), 3, &mut rng).transpose_twirl();
        let floor = phi.choi_min_eigenvalue(TOL)?;
        ensure(floor >= -TOL, || format!("twirled CP map has floor {floor:e}"))?;
    }
    for c in ["P", "Pk(2)", "SP", "SPk(2)", "CP", "t(CP)"] {
        let r = symmetric_dual_probe(&c.parse()?, dims(3, 3), 30, 9, TOL)?;
        ensure(r.pass, || format!("symmetric dual {c}: {:?}", r.violations))?;
    }
    Ok(())
}

fn determinism() -> Outcome {
    let run = || -> Result<Vec<u8>, Box<dyn std::error::Error>> {
        let out = Command::new(env!("CARGO_BIN_EXE_mapcone")).args(["verify", "--seed", "7"]).output()?;
        ensure(out.status.success(), || format!("verify exited with {}", out.status))?;
        Ok(out.stdout)
    };
    let (a, b) = (run()?, run()?);
    ensure(!a.is_empty(), || "empty report".into())?;
    serde_json::from_slice::<serde_json::Value>(&a)?;
    ensure(a == b, || "reports differ between runs".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 isometry", isometry),
        ("2 adjoint identities", adjoint_identities),
        ("3 conjugation Choi exactness", conjugation_choi),
        ("4 CP classifier", cp_classifier),
        ("5 duality pairing and biduals", duality_pairing),
        ("6 compositions with dual elements", dual_compositions),
        ("7 projection conditions and threshold flip", projection_conditions),
        ("8 stability and symmetric duals", probes),
        ("9 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        match f() {
            Ok(()) => println!("PASS criterion {name} ({:.2?})", start.elapsed()),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {name} ({:.2?}): {e}", start.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
