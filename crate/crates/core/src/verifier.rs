//! Seeded numerical checks of the identities and characterization theorems
//! for mapping cones. Each check reports the worst violation it saw; a check
//! passes iff that violation is at most `tol`.
//!
//! Statements that quantify over continua (all dual elements, all
//! projections) are checked on samples, together with planted
//! counterexamples that must be refuted.

use serde::{Deserialize, Serialize};

use crate::cones::{
    bidual_inclusion, dual_expr, mcs_stability_probe, sample_generators, search, symmetric_dual_probe, witness_search,
    BaseCone, ConeExpr, MemberConfig, ProbeReport,
};
use crate::error::{Error, Result};
use crate::family::{self, recognize, PhiLambdaSpec};
use crate::linalg::{
    complex_gaussian, random_low_rank, random_projection_with, range_projection, seeded_rng, ComplexMatrix, SeededRng,
    C64, ONE,
};
use crate::superop::{compose, map_inner, map_inner_by_blocks, vectorize, MapDims, SuperOperator};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub m: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_violation: f64,
    pub pass: bool,
    /// Description of the worst violation; present only when the check fails.
    pub violation: Option<String>,
}

/// Keeps the worst violation and its description.
struct Tracker {
    tol: f64,
    max: f64,
    worst: Option<String>,
}

impl Tracker {
    fn new(tol: f64) -> Self {
        Tracker { tol, max: 0.0, worst: None }
    }

    fn observe(&mut self, violation: f64, what: impl FnOnce() -> String) {
        let violation = if violation.is_nan() { f64::INFINITY } else { violation };
        if violation > self.max {
            self.max = violation;
            if violation > self.tol {
                self.worst = Some(what());
            }
        }
    }

    fn report(self, id: impl Into<String>, dims: MapDims, trials: usize, seed: u64) -> CheckReport {
        let pass = self.max <= self.tol;
        CheckReport {
            check_id: id.into(),
            m: dims.m,
            n: dims.n,
            trials,
            seed,
            tol: self.tol,
            max_violation: self.max,
            pass,
            violation: if pass { None } else { self.worst },
        }
    }
}

fn require_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    Ok(())
}

fn random_map(dims: MapDims, rng: &mut SeededRng) -> SuperOperator {
    SuperOperator::random(dims, rng).normalized()
}

fn inner(a: &SuperOperator, b: &SuperOperator) -> C64 {
    map_inner(a, b).expect("matching dimensions")
}

fn comp(a: &SuperOperator, b: &SuperOperator) -> SuperOperator {
    compose(a, b).expect("composable dimensions")
}

/// Adjoint identities for the inner product of maps, on random (not
/// necessarily Hermiticity-preserving) `Φ, Ψ: B(K) → B(H)`, `α` on `B(H)`
/// and `β` on `B(K)`:
///
/// - `⟨Φ∘β, Ψ⟩ = ⟨β, Φ*∘Ψ⟩ = ⟨Ψ*∘Φ, β*⟩`
/// - `⟨α∘Φ, Ψ⟩ = ⟨α, Ψ∘Φ*⟩ = ⟨Φ∘Ψ*, α*⟩`
/// - `⟨α∘Φ∘β, Ψ⟩ = ⟨Φ, α*∘Ψ∘β*⟩`
/// - `⟨Φ, Ψ⟩ = ⟨Ψ*, Φ*⟩`
pub fn check_prop1(dims: MapDims, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    require_trials(trials)?;
    let mut rng = seeded_rng(seed);
    let mut t = Tracker::new(tol);
    for i in 0..trials {
        let phi = random_map(dims, &mut rng);
        let psi = random_map(dims, &mut rng);
        let alpha = random_map(MapDims { m: dims.n, n: dims.n }, &mut rng);
        let beta = random_map(MapDims { m: dims.m, n: dims.m }, &mut rng);
        let (phi_a, psi_a) = (phi.adjoint(), psi.adjoint());

        let one = [
            inner(&comp(&phi, &beta), &psi),
            inner(&beta, &comp(&phi_a, &psi)),
            inner(&comp(&psi_a, &phi), &beta.adjoint()),
        ];
        let two = [
            inner(&comp(&alpha, &phi), &psi),
            inner(&alpha, &comp(&psi, &phi_a)),
            inner(&comp(&phi, &psi_a), &alpha.adjoint()),
        ];
        let three = [
            inner(&comp(&alpha, &comp(&phi, &beta)), &psi),
            inner(&phi, &comp(&alpha.adjoint(), &comp(&psi, &beta.adjoint()))),
        ];
        let lemma = [inner(&phi, &psi), inner(&psi_a, &phi_a)];
        for (name, group) in
            [("point 1", &one[..]), ("point 2", &two[..]), ("point 3", &three[..]), ("swap", &lemma[..])]
        {
            for (j, z) in group.iter().enumerate().skip(1) {
                let dev = (z - group[0]).norm();
                t.observe(dev, || format!("trial {i}, {name}, term {j}: deviation {dev:e}"));
            }
        }
    }
    Ok(t.report("prop1", dims, trials, seed))
}

/// The inner product computed from the definition agrees with the
/// Hilbert-Schmidt product of Choi matrices.
pub fn check_isometry(dims: MapDims, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    require_trials(trials)?;
    let mut rng = seeded_rng(seed);
    let mut t = Tracker::new(tol);
    for i in 0..trials {
        let phi = random_map(dims, &mut rng);
        let psi = random_map(dims, &mut rng);
        let by_blocks = map_inner_by_blocks(&phi, &psi)?;
        let by_choi = crate::linalg::hs_inner(phi.choi(), psi.choi())?;
        let dev = (by_blocks - by_choi).norm();
        t.observe(dev, || format!("trial {i}: deviation {dev:e}"));
    }
    Ok(t.report("isometry", dims, trials, seed))
}

/// `C(Ad_V) = |υ⟩⟨υ|` entrywise for `V` of every rank, and
/// `V f_kl V† = Σ_ri V_rk conj(V_il) e_ri`.
pub fn check_lemma6(dims: MapDims, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    require_trials(trials)?;
    let mut rng = seeded_rng(seed);
    let mut t = Tracker::new(tol);
    let (m, n) = (dims.m, dims.n);
    for i in 0..trials {
        let rank = 1 + i % dims.min();
        let v = random_low_rank(n, m, rank, &mut rng);
        let choi = SuperOperator::conjugation(&v).into_choi();
        let u = vectorize(&v);
        let outer = ComplexMatrix::outer(&u, &u);
        let dev = choi.max_abs_diff(&outer);
        t.observe(dev, || format!("trial {i} (rank {rank}): Choi deviation {dev:e}"));
        for k in 0..m {
            for l in 0..m {
                let direct = v.conjugate_by(&ComplexMatrix::unit(m, m, k, l));
                let formula = ComplexMatrix::from_fn(n, n, |r, c| v[(r, k)] * v[(c, l)].conj());
                let dev = direct.max_abs_diff(&formula);
                t.observe(dev, || format!("trial {i}: V f_{k}{l} V† deviation {dev:e}"));
            }
        }
    }
    Ok(t.report("lemma6", dims, trials, seed))
}

fn member_cfg(seed: u64, tol: f64) -> MemberConfig {
    MemberConfig { tol, samples: 100, seed, max_iters: 200, restarts: 8 }
}

/// Smallest Choi eigenvalue; `Err` only on non-HP input.
fn choi_floor(phi: &SuperOperator) -> Result<f64> {
    phi.choi_min_eigenvalue(f64::INFINITY)
}

/// A map outside `c`, built so that the refutation is known.
pub fn planted_non_member(c: &ConeExpr, dims: MapDims, rng: &mut SeededRng) -> Result<SuperOperator> {
    let (m, n) = (dims.m, dims.n);
    Ok(match c {
        ConeExpr::Base(BaseCone::CompletelyPositive) => {
            let v = complex_gaussian(n, m, rng);
            let lambda = 2.0 * family::cp_threshold(&v)?;
            family::build(&PhiLambdaSpec::new(v, lambda)?)
        }
        ConeExpr::Base(BaseCone::SuperPositive(k)) => {
            SuperOperator::conjugation(&random_low_rank(n, m, (k + 1).min(dims.min()), rng))
        }
        ConeExpr::Base(BaseCone::Positive(k)) => {
            let v = complex_gaussian(n, m, rng);
            let lambda = 1.5 * family::k_positivity_threshold(&v, *k)?;
            family::build(&PhiLambdaSpec::new(v, lambda)?)
        }
        ConeExpr::Transposed(child) => planted_non_member(child, dims, rng)?.compose_transpose(),
        ConeExpr::Meet(a, _) => planted_non_member(a, dims, rng)?,
        ConeExpr::Join(_, _) => {
            let v = complex_gaussian(n, m, rng);
            let lambda = 1.5 * family::k_positivity_threshold(&v, 1)?;
            family::build(&PhiLambdaSpec::new(v, lambda)?)
        }
        ConeExpr::Dual(_) => return Err(Error::Grammar("planting needs a normalized expression".into())),
    }
    .normalized())
}

/// For sampled `Φ ∈ c` and `Ψ ∈ c°`, `Ψ*∘Φ` and `Φ∘Ψ*` are CP. A planted
/// `Φ ∉ c` must be refuted by a certified `Ψ ∈ c°` with `Ψ*∘Φ` not CP.
pub fn check_thm2(cone: &ConeExpr, dims: MapDims, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    require_trials(trials)?;
    let c = cone.normalize(Some(dims))?;
    let dual = dual_expr(&c)?.normalize(Some(dims))?;
    let gens = sample_generators(&c, dims, trials, seed)?.maps;
    let dual_gens = sample_generators(&dual, dims, trials, seed.wrapping_add(1))?.maps;
    let mut t = Tracker::new(tol);
    for (i, phi) in gens.iter().enumerate() {
        for (j, psi) in dual_gens.iter().enumerate() {
            let psi_a = psi.adjoint();
            let left = choi_floor(&comp(&psi_a, phi))?;
            t.observe(-left, || format!("generator {i}, dual {j}: Ψ*∘Φ has eigenvalue {left:e}"));
            let right = choi_floor(&comp(phi, &psi_a))?;
            t.observe(-right, || format!("generator {i}, dual {j}: Φ∘Ψ* has eigenvalue {right:e}"));
        }
    }
    planted_refutation(&c, dims, seed, tol, &mut t)?;
    Ok(t.report(format!("thm2[{c}]"), dims, trials, seed))
}

fn planted_refutation(c: &ConeExpr, dims: MapDims, seed: u64, tol: f64, t: &mut Tracker) -> Result<()> {
    let mut rng = seeded_rng(seed.wrapping_add(2));
    let planted = planted_non_member(c, dims, &mut rng)?;
    match witness_search(&planted, c, &member_cfg(seed, tol))? {
        Some(found) => {
            let floor = choi_floor(&comp(&found.psi.adjoint(), &planted))?;
            if floor >= -tol {
                t.observe(1.0, || format!("planted non-member: witness composition has floor {floor:e}"));
            }
        }
        None => t.observe(1.0, || "planted non-member was not refuted".into()),
    }
    Ok(())
}

/// For `m = n` and ∗-invariant cones: `Ψ∘Φ` and `Φ∘Ψ` are CP for sampled
/// `Φ ∈ c`, `Ψ ∈ c°`; a planted non-member is refuted.
pub fn check_thm3(cone: &ConeExpr, dims: MapDims, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    require_trials(trials)?;
    if dims.m != dims.n {
        return Err(Error::DimensionMismatch(format!("the ∗-invariant form needs m = n, got {dims}")));
    }
    let c = cone.normalize(Some(dims))?;
    if !matches!(c, ConeExpr::Base(_)) {
        return Err(Error::InvalidConfig(format!("{c} is not one of P_k, SP_k, CP")));
    }
    let dual = dual_expr(&c)?;
    let gens = sample_generators(&c, dims, trials, seed)?.maps;
    let dual_gens = sample_generators(&dual, dims, trials, seed.wrapping_add(1))?.maps;
    let mut t = Tracker::new(tol);
    for (i, phi) in gens.iter().enumerate() {
        for (j, psi) in dual_gens.iter().enumerate() {
            let left = choi_floor(&comp(psi, phi))?;
            t.observe(-left, || format!("generator {i}, dual {j}: Ψ∘Φ has eigenvalue {left:e}"));
            let right = choi_floor(&comp(phi, psi))?;
            t.observe(-right, || format!("generator {i}, dual {j}: Φ∘Ψ has eigenvalue {right:e}"));
        }
    }
    planted_refutation(&c, dims, seed, tol, &mut t)?;
    Ok(t.report(format!("thm3[{c}]"), dims, trials, seed))
}

/// `k`-positivity of `phi` when it is settled analytically: CP maps are
/// `k`-positive for all `k`, and recognized `Tr − λ Ad_V` maps have a threshold.
pub fn known_k_positivity(phi: &SuperOperator, k: usize, tol: f64) -> Option<bool> {
    if choi_floor(phi).ok()? >= -tol {
        return Some(true);
    }
    if k >= phi.dims().min() {
        return Some(false);
    }
    recognize(phi, tol).and_then(|r| r.is_k_positive(k, tol).ok())
}

fn settled(phi: &SuperOperator, k: usize, tol: f64) -> Result<bool> {
    known_k_positivity(phi, k, tol)
        .ok_or_else(|| Error::InvalidConfig("the k-positivity of this map is not known analytically".into()))
}

/// `Φ` is `k`-positive iff `Ad_{V†}∘Φ` (equivalently `Φ∘Ad_{V†}`) is CP for
/// every `V` with `rk V ≤ k`. Checked on sampled `V` plus the minimizer of
/// `⟨Ad_U, Φ⟩` over `rk U ≤ k`, against the known status of `Φ`.
pub fn check_thm4(phi: &SuperOperator, k: usize, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    require_trials(trials)?;
    let dims = phi.dims();
    if k == 0 || k > dims.min() {
        return Err(Error::RankOutOfRange { rank: k, dim: dims.min() });
    }
    let expected = settled(phi, k, tol)?;
    let phi = phi.normalized();
    let mut rng = seeded_rng(seed);
    let mut candidates: Vec<ComplexMatrix> = (0..trials)
        .map(|_| {
            let v = random_low_rank(dims.n, dims.m, k, &mut rng);
            v.scale_real(1.0 / v.frobenius_norm())
        })
        .collect();
    if let Some(best) = search::multistart(phi.choi(), dims, k, 8, 200, &mut rng) {
        candidates.push(best.operator);
    }
    let mut t = Tracker::new(tol);
    let (mut left_refuted, mut right_refuted) = (false, false);
    for (i, v) in candidates.iter().enumerate() {
        let ad = SuperOperator::conjugation(&v.dagger());
        let left = choi_floor(&comp(&ad, &phi))?;
        let right = choi_floor(&comp(&phi, &ad))?;
        if expected {
            t.observe(-left, || format!("V {i}: Ad_V†∘Φ has eigenvalue {left:e}"));
            t.observe(-right, || format!("V {i}: Φ∘Ad_V† has eigenvalue {right:e}"));
        }
        left_refuted |= left < -tol;
        right_refuted |= right < -tol;
    }
    if !expected && !(left_refuted && right_refuted) {
        t.observe(1.0, || format!("map is not {k}-positive but no V refuted it"));
    }
    Ok(t.report(format!("thm4[k={k}]"), dims, candidates.len(), seed))
}

/// The four projection conditions for `k`-positivity agree with the known
/// status of `Φ` on sampled `E ∈ Π_k(H)`, `F ∈ Π_k(K)` plus the range and
/// rank projections of the pairing minimizer; and every `U` with `rk U ≤ k`
/// factors as `E·U·F` with those projections.
pub fn check_thm5(phi: &SuperOperator, k: usize, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    require_trials(trials)?;
    let dims = phi.dims();
    if k == 0 || k > dims.min() {
        return Err(Error::RankOutOfRange { rank: k, dim: dims.min() });
    }
    let expected = settled(phi, k, tol)?;
    let phi = phi.normalized();
    let mut rng = seeded_rng(seed);
    let mut t = Tracker::new(tol);

    for i in 0..trials {
        let u = random_low_rank(dims.n, dims.m, k, &mut rng);
        let e = range_projection(&u, k)?;
        let f = range_projection(&u.dagger(), k)?;
        let dev = (&(&e * &u) * &f).max_abs_diff(&u) / u.max_abs();
        t.observe(dev, || format!("EVF factorization {i}: deviation {dev:e}"));
    }

    let mut pairs = Vec::with_capacity(trials + 1);
    if let Some(best) = search::multistart(phi.choi(), dims, k, 8, 200, &mut rng) {
        pairs.push((range_projection(&best.operator, k)?, range_projection(&best.operator.dagger(), k)?));
    }
    for _ in 0..trials {
        pairs.push((random_projection_with(dims.n, k, &mut rng)?, random_projection_with(dims.m, k, &mut rng)?));
    }
    let mut refuted = [false; 3];
    for (i, (e, f)) in pairs.iter().enumerate() {
        let ad_e = SuperOperator::conjugation(e);
        let ad_f = SuperOperator::conjugation(f);
        let floors = [
            choi_floor(&comp(&ad_e, &phi))?,
            choi_floor(&comp(&phi, &ad_f))?,
            choi_floor(&comp(&ad_e, &comp(&phi, &ad_f)))?,
        ];
        for (c, floor) in floors.iter().enumerate() {
            if expected {
                t.observe(-floor, || format!("pair {i}, condition {}: eigenvalue {floor:e}", c + 2));
            }
            refuted[c] |= *floor < -tol;
        }
    }
    if !expected {
        for (c, r) in refuted.iter().enumerate() {
            if !r {
                t.observe(1.0, || format!("map is not {k}-positive but condition {} held on all pairs", c + 2));
            }
        }
    }
    Ok(t.report(format!("thm5[k={k}]"), dims, pairs.len(), seed))
}

/// `Tr − λ Ad_V` checked just below and above its `k`-positivity threshold
/// with `samples` random projections `E ∈ Π_k(H)` (condition `Ad_E∘Φ` CP)
/// and `F ∈ Π_k(K)` (condition `Φ∘Ad_F` CP); also the CP threshold
/// `1/Tr(VV†)`. A verdict that does not flip within `±window` is a violation.
pub fn check_threshold_flip(
    v: &ComplexMatrix,
    k: usize,
    samples: usize,
    window: f64,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    require_trials(samples)?;
    let spec = PhiLambdaSpec::new(v.clone(), 1.0)?;
    let dims = spec.dims();
    let threshold = family::k_positivity_threshold(v, k)?;
    let cp_threshold = family::cp_threshold(v)?;
    let mut rng = seeded_rng(seed);
    let mut t = Tracker::new(tol);
    for (factor, expect_positive) in [(1.0 - window / 2.0, true), (1.0 + window / 2.0, false)] {
        let lambda = threshold * factor;
        let phi = family::build(&spec.with_lambda(lambda));
        let mut positive = true;
        let mut floor = f64::INFINITY;
        for _ in 0..samples {
            let e = SuperOperator::conjugation(&random_projection_with(dims.n, k, &mut rng)?);
            let f = SuperOperator::conjugation(&random_projection_with(dims.m, k, &mut rng)?);
            for x in [comp(&e, &phi), comp(&phi, &f)] {
                let value = choi_floor(&x)?;
                floor = floor.min(value);
                positive &= value >= -tol;
            }
        }
        if positive != expect_positive {
            t.observe(1.0, || {
                format!("λ = {lambda} (threshold {threshold}): sampled verdict {positive}, floor {floor:e}")
            });
        }
        let lambda = cp_threshold * factor;
        let cp = choi_floor(&family::build(&spec.with_lambda(lambda)))? >= -tol;
        if cp != expect_positive {
            t.observe(1.0, || format!("λ = {lambda}: CP verdict {cp} against threshold {cp_threshold}"));
        }
    }
    Ok(t.report(format!("thm5_flip[k={k}]"), dims, samples, seed))
}

fn probe_report(id: &str, probe: ProbeReport, seed: u64, tol: f64) -> CheckReport {
    let mut t = Tracker::new(tol);
    let worst = probe.min_pairing.map_or(0.0, |p| -p);
    t.observe(worst, || format!("minimum pairing {worst:e}"));
    for v in &probe.violations {
        t.observe(1.0, || v.clone());
    }
    t.report(format!("{id}[{}]", probe.cone), probe.dims, probe.samples, seed)
}

/// Closure of cones and their duals under `Υ∘·∘Ω` with CP `Υ`, `Ω`.
pub fn check_prop5(cone: &ConeExpr, dims: MapDims, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    require_trials(trials)?;
    let cfg = MemberConfig { samples: 20, restarts: 4, ..member_cfg(seed, tol) };
    Ok(probe_report("prop5", mcs_stability_probe(cone, dims, trials, &cfg)?, seed, tol))
}

/// Duals of `P_k`, `SP_k`, `CP` are closed under the transpose twirl and
/// under adjoints.
pub fn check_prop7(cone: &ConeExpr, dims: MapDims, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    require_trials(trials)?;
    Ok(probe_report("prop7", symmetric_dual_probe(cone, dims, trials, seed, tol)?, seed, tol))
}

/// Generators of `c` pair nonnegatively with generators of `c°`.
pub fn check_bidual(cone: &ConeExpr, dims: MapDims, trials: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    require_trials(trials)?;
    Ok(probe_report("bidual", bidual_inclusion(cone, dims, trials, seed, tol)?, seed, tol))
}

/// Identifiers accepted by [`run_checks`].
pub const CHECK_IDS: &[&str] =
    &["prop1", "isometry", "lemma6", "thm2", "thm3", "thm4", "thm5", "thm5_flip", "prop5", "prop7", "bidual"];

/// Cones exercised by the cone-level checks at the given dimensions.
pub fn cones_for(dims: MapDims) -> Vec<ConeExpr> {
    let k = 2.min(dims.min());
    let tcp = ConeExpr::transposed(ConeExpr::cp());
    let mut cones = vec![ConeExpr::cp(), ConeExpr::superpositive(), ConeExpr::positive()];
    if k < dims.min() {
        cones.push(ConeExpr::k_superpositive(k));
        cones.push(ConeExpr::k_positive(k));
    }
    cones.push(tcp.clone());
    cones.push(ConeExpr::meet(ConeExpr::cp(), tcp.clone()));
    cones.push(ConeExpr::join(ConeExpr::cp(), tcp));
    cones
}

/// Rectangular identity `n×m`.
fn flat(dims: MapDims) -> ComplexMatrix {
    ComplexMatrix::from_fn(dims.n, dims.m, |i, j| if i == j { ONE } else { C64::new(0.0, 0.0) })
}

/// Maps with settled `k`-positivity: the identity (or `Ad` of a rectangular
/// identity), and `Tr − λ Ad_V` at half and one and a half times the threshold.
fn known_maps(dims: MapDims, k: usize, rng: &mut SeededRng) -> Result<Vec<SuperOperator>> {
    let v = complex_gaussian(dims.n, dims.m, rng);
    let thr = family::k_positivity_threshold(&v, k)?;
    let spec = PhiLambdaSpec::new(v, thr)?;
    Ok(vec![
        SuperOperator::conjugation(&flat(dims)),
        family::build(&spec.with_lambda(0.5 * thr)),
        family::build(&spec.with_lambda(1.5 * thr)),
    ])
}

/// Runs the checks named by `ids` (all of [`CHECK_IDS`] when empty) at each
/// dimension pair. Sub-check seeds are derived from `seed` in a fixed order.
pub fn run_checks(ids: &[&str], dims_list: &[MapDims], trials: usize, seed: u64, tol: f64) -> Result<Vec<CheckReport>> {
    require_trials(trials)?;
    for id in ids {
        if !CHECK_IDS.contains(id) {
            return Err(Error::InvalidConfig(format!("unknown check '{id}'")));
        }
    }
    let wanted = |id: &str| ids.is_empty() || ids.contains(&id);
    let mut reports = Vec::new();
    for &dims in dims_list {
        let mut rng = seeded_rng(seed);
        if wanted("prop1") {
            reports.push(check_prop1(dims, trials, seed, tol)?);
        }
        if wanted("isometry") {
            reports.push(check_isometry(dims, trials, seed, tol)?);
        }
        if wanted("lemma6") {
            reports.push(check_lemma6(dims, trials, seed, tol.min(1e-12))?);
        }
        let cones = cones_for(dims);
        let few = trials.clamp(1, 12);
        for (i, c) in cones.iter().enumerate() {
            let s = seed.wrapping_add(100 + i as u64);
            if wanted("thm2") {
                reports.push(check_thm2(c, dims, few, s, tol)?);
            }
            if wanted("bidual") {
                reports.push(check_bidual(c, dims, few, s, tol)?);
            }
        }
        if dims.m == dims.n {
            for (i, c) in cones.iter().filter(|c| matches!(c, ConeExpr::Base(_))).enumerate() {
                let s = seed.wrapping_add(200 + i as u64);
                if wanted("thm3") {
                    reports.push(check_thm3(c, dims, few, s, tol)?);
                }
                if wanted("prop7") {
                    reports.push(check_prop7(c, dims, few, s, tol)?);
                }
            }
        }
        if wanted("prop5") {
            let tcp = ConeExpr::transposed(ConeExpr::cp());
            for (i, c) in [ConeExpr::cp(), ConeExpr::superpositive(), tcp].iter().enumerate() {
                reports.push(check_prop5(c, dims, few, seed.wrapping_add(300 + i as u64), tol)?);
            }
        }
        for k in 1..=dims.min() {
            let s = seed.wrapping_add(400 + k as u64);
            if wanted("thm4") || wanted("thm5") {
                let labelled = |mut r: CheckReport, label: &str| {
                    r.check_id = r.check_id.replace(']', &format!(",{label}]"));
                    r
                };
                for (phi, label) in known_maps(dims, k, &mut rng)?.iter().zip(["ad", "below", "above"]) {
                    if wanted("thm4") {
                        reports.push(labelled(check_thm4(phi, k, trials, s, tol)?, label));
                    }
                    if wanted("thm5") {
                        reports.push(labelled(check_thm5(phi, k, trials, s, tol)?, label));
                    }
                }
            }
            if wanted("thm5_flip") {
                reports.push(check_threshold_flip(&flat(dims), k, trials.max(100), 0.02, s, tol)?);
            }
        }
    }
    Ok(reports)
}

/// Every check at each dimension pair.
pub fn run_all(dims_list: &[MapDims], seed: u64, tol: f64) -> Result<Vec<CheckReport>> {
    run_checks(&[], dims_list, 20, seed, tol)
}
