//! Membership decisions: exact for `CP`, certify-or-refute for `SP_k`,
//! refute-or-unknown for `P_k` outside the analytic family.

use serde::{Deserialize, Serialize};

use super::expr::{dual_expr, BaseCone, ConeExpr};
use super::sample::sample_base_with;
use super::search::multistart;
use super::verdict::{Certificate, Diagnostics, Evidence, MemberConfig, Side, Status, Verdict, Witness, RANK_TOL};
use crate::error::{Error, Result};
use crate::family::{self, ky_fan_quantity, recognize, PhiLambdaSpec};
use crate::linalg::{
    hermitian_eigen, kron, numerical_rank, random_projection_with, range_projection, seeded_rng, vnorm, ComplexMatrix,
    SeededRng, C64, DEFAULT_TOL, ZERO,
};
use crate::superop::{compose, map_inner, unvectorize, vectorize, MapDims, SuperOperator};

/// A refuting dual element together with its own membership certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessFound {
    pub psi: SuperOperator,
    pub value: f64,
    pub dual_cone: String,
    pub dual_certificate: Certificate,
}

struct Outcome {
    status: Status,
    certificate: Option<Certificate>,
    witness: Option<Witness>,
    diagnostics: Diagnostics,
}

impl Outcome {
    fn member(certificate: Certificate, diagnostics: Diagnostics) -> Self {
        Outcome { status: Status::Member, certificate: Some(certificate), witness: None, diagnostics }
    }

    fn not_member(witness: Witness, diagnostics: Diagnostics) -> Self {
        Outcome { status: Status::NotMember, certificate: None, witness: Some(witness), diagnostics }
    }

    fn unknown(diagnostics: Diagnostics) -> Self {
        Outcome { status: Status::Unknown, certificate: None, witness: None, diagnostics }
    }
}

fn scaled_tol(tol: f64, m: &ComplexMatrix) -> f64 {
    tol * m.max_abs().max(1.0)
}

fn check_hp(phi: &SuperOperator, tol: f64) -> Result<()> {
    let deviation = phi.hermiticity_deviation();
    if deviation > scaled_tol(tol, phi.choi()) {
        return Err(Error::NotHermiticityPreserving { deviation });
    }
    Ok(())
}

/// Real pairing `⟨Ψ, Φ⟩` of two Hermiticity-preserving maps.
pub fn pair(psi: &SuperOperator, phi: &SuperOperator) -> Result<f64> {
    check_hp(psi, DEFAULT_TOL)?;
    check_hp(phi, DEFAULT_TOL)?;
    let z = map_inner(psi, phi)?;
    let bound = DEFAULT_TOL * (psi.choi().frobenius_norm() * phi.choi().frobenius_norm()).max(1.0);
    if z.im.abs() > bound {
        return Err(Error::ImaginaryResidue { residue: z.im });
    }
    Ok(z.re)
}

/// Decides `phi ∈ c`. Deterministic in `(phi, c, cfg)`.
pub fn member(phi: &SuperOperator, c: &ConeExpr, cfg: &MemberConfig) -> Result<Verdict> {
    cfg.validate()?;
    check_hp(phi, cfg.tol)?;
    let c = c.normalize(Some(phi.dims()))?;
    let mut rng = seeded_rng(cfg.seed);
    let out = decide(phi, &c, cfg, &mut rng)?;
    Ok(Verdict {
        status: out.status,
        cone: c.to_string(),
        certificate: out.certificate,
        witness: out.witness,
        diagnostics: out.diagnostics,
        config: cfg.clone(),
    })
}

/// Looks for `Ψ ∈ c°` with `⟨Ψ, Φ⟩ < -tol`, and returns it only when `Ψ`
/// itself is certified to lie in the dual cone.
pub fn witness_search(phi: &SuperOperator, c: &ConeExpr, cfg: &MemberConfig) -> Result<Option<WitnessFound>> {
    let verdict = member(phi, c, cfg)?;
    let Some(witness) = verdict.witness else {
        return Ok(None);
    };
    let dual = dual_expr(&c.normalize(Some(phi.dims()))?)?.normalize(Some(phi.dims()))?;
    let check = member(&witness.dual_element, &dual, cfg)?;
    match (check.status, check.certificate) {
        (Status::Member, Some(cert)) => Ok(Some(WitnessFound {
            psi: witness.dual_element,
            value: witness.pairing,
            dual_cone: dual.to_string(),
            dual_certificate: cert,
        })),
        _ => Ok(None),
    }
}

fn decide(phi: &SuperOperator, c: &ConeExpr, cfg: &MemberConfig, rng: &mut SeededRng) -> Result<Outcome> {
    match c {
        ConeExpr::Base(BaseCone::CompletelyPositive) => decide_cp(phi, cfg),
        ConeExpr::Base(BaseCone::Positive(k)) => decide_pk(phi, *k, cfg, rng),
        ConeExpr::Base(BaseCone::SuperPositive(k)) => decide_spk(phi, *k, cfg, rng),
        ConeExpr::Transposed(child) => {
            let out = decide(&phi.compose_transpose(), child, cfg, rng)?;
            Ok(Outcome {
                status: out.status,
                certificate: out.certificate.map(|c| Certificate::Transposed { inner: Box::new(c) }),
                witness: out.witness.map(Witness::transposed),
                diagnostics: out.diagnostics,
            })
        }
        ConeExpr::Meet(a, b) => {
            let left = decide(phi, a, cfg, rng)?;
            if left.status == Status::NotMember {
                return Ok(left);
            }
            let right = decide(phi, b, cfg, rng)?;
            if right.status == Status::NotMember {
                let mut diagnostics = left.diagnostics;
                diagnostics.merge(right.diagnostics);
                return Ok(Outcome { diagnostics, ..right });
            }
            let mut diagnostics = left.diagnostics;
            diagnostics.merge(right.diagnostics);
            match (left.certificate, right.certificate) {
                (Some(l), Some(r)) => {
                    Ok(Outcome::member(Certificate::Meet { left: Box::new(l), right: Box::new(r) }, diagnostics))
                }
                _ => Ok(Outcome::unknown(diagnostics)),
            }
        }
        ConeExpr::Join(a, b) => {
            let mut diagnostics = Diagnostics::default();
            for (side, child) in [(Side::Left, a), (Side::Right, b)] {
                let out = decide(phi, child, cfg, rng)?;
                diagnostics.merge(out.diagnostics);
                if let Some(cert) = out.certificate {
                    return Ok(Outcome::member(Certificate::Join { side, inner: Box::new(cert) }, diagnostics));
                }
            }
            // Every cone in the family sits inside P, and SP = P° sits inside
            // the dual of the join, so a positivity witness refutes.
            let out = decide_pk(phi, 1, cfg, rng)?;
            diagnostics.merge(out.diagnostics);
            match out.witness {
                Some(w) => Ok(Outcome::not_member(w, diagnostics)),
                None => {
                    diagnostics
                        .notes
                        .push("join: neither side certified and the map is not refuted as positive".into());
                    Ok(Outcome::unknown(diagnostics))
                }
            }
        }
        ConeExpr::Dual(_) => unreachable!("normalized expressions contain no dual nodes"),
    }
}

fn decide_cp(phi: &SuperOperator, cfg: &MemberConfig) -> Result<Outcome> {
    let eig = phi.choi_eigen(f64::INFINITY)?;
    let mut diagnostics = Diagnostics::default();
    let lam = eig.min_value();
    diagnostics.record(lam);
    if lam >= -cfg.tol {
        return Ok(Outcome::member(Certificate::PsdFloor { min_eigenvalue: lam }, diagnostics));
    }
    Ok(Outcome::not_member(eigenvector_witness(phi, eig.vector(0), lam)?, diagnostics))
}

fn eigenvector_witness(phi: &SuperOperator, u: Vec<C64>, eigenvalue: f64) -> Result<Witness> {
    let dual_element = SuperOperator::conjugation(&unvectorize(&u, phi.dims())?);
    let pairing = map_inner(&dual_element, phi)?.re;
    Ok(Witness { dual_element, pairing, evidence: Evidence::NegativeEigenvector { vector: u, eigenvalue } })
}

/// Turns an operator `W` with `rk W ≤ k` and `⟨Ad_W, Φ⟩ < 0` into a witness
/// against `P_k`.
fn low_rank_witness(phi: &SuperOperator, w: &ComplexMatrix, k: usize, tol: f64) -> Result<Option<Witness>> {
    let norm = w.frobenius_norm();
    if norm == 0.0 {
        return Ok(None);
    }
    let w = w.scale_real(1.0 / norm);
    if k == 1 {
        let col = (0..w.cols()).max_by(|&a, &b| vnorm(&w.column(a)).total_cmp(&vnorm(&w.column(b)))).unwrap_or(0);
        let omega = crate::linalg::normalized(&w.column(col));
        let upsilon = crate::linalg::normalized(&w.dagger().mul_vec(&omega));
        let op = ComplexMatrix::outer(&omega, &upsilon);
        let dual_element = SuperOperator::conjugation(&op);
        let pairing = map_inner(&dual_element, phi)?.re;
        if pairing >= -tol {
            return Ok(None);
        }
        let value = phi.apply(&ComplexMatrix::outer(&upsilon, &upsilon))?.rayleigh_quotient(&omega);
        return Ok(Some(Witness { dual_element, pairing, evidence: Evidence::VectorPair { upsilon, omega, value } }));
    }
    let e = range_projection(&w, k)?;
    let f = range_projection(&w.dagger(), k)?;
    let w = &(&e * &w) * &f;
    let dual_element = SuperOperator::conjugation(&w).normalized();
    let pairing = map_inner(&dual_element, phi)?.re;
    if pairing >= -tol {
        return Ok(None);
    }
    let vector = vectorize(&w);
    let value = projected_choi(phi, &e, &f).rayleigh_quotient(&vector);
    Ok(Some(Witness { dual_element, pairing, evidence: Evidence::ProjectionPair { rank: k, e, f, vector, value } }))
}

/// Choi matrix of `Ad_E∘Φ∘Ad_F`, i.e. `(Fᵀ⊗E) C (Fᵀ⊗E)†`.
fn projected_choi(phi: &SuperOperator, e: &ComplexMatrix, f: &ComplexMatrix) -> ComplexMatrix {
    kron(&f.transpose(), e).conjugate_by(phi.choi())
}

fn decide_pk(phi: &SuperOperator, k: usize, cfg: &MemberConfig, rng: &mut SeededRng) -> Result<Outcome> {
    let dims = phi.dims();
    if k >= dims.min() {
        return decide_cp(phi, cfg);
    }
    let mut diagnostics = Diagnostics::default();
    let eig = phi.choi_eigen(f64::INFINITY)?;
    if eig.min_value() >= -cfg.tol {
        diagnostics.notes.push("Choi matrix is PSD, so the map is completely positive".into());
        return Ok(Outcome::member(Certificate::PsdFloor { min_eigenvalue: eig.min_value() }, diagnostics));
    }

    if let Some(rec) = recognize(phi, cfg.tol) {
        let threshold = family::k_positivity_threshold(&rec.spec.v, k)?;
        diagnostics
            .notes
            .push(format!("recognized as s·(Tr − λ Ad_V) with λ = {}, threshold {}", rec.spec.lambda, threshold));
        if rec.is_k_positive(k, cfg.tol)? {
            return Ok(Outcome::member(Certificate::FamilyThreshold { recognized: rec, k, threshold }, diagnostics));
        }
        if let Some(w) = low_rank_witness(phi, &rec.refuting_operator(k)?, k, cfg.tol)? {
            diagnostics.record(w.pairing);
            return Ok(Outcome::not_member(w, diagnostics));
        }
    }

    let scale = phi.choi().frobenius_norm().max(f64::MIN_POSITIVE);
    let best = multistart(phi.choi(), dims, k, cfg.restarts, cfg.max_iters, rng);
    diagnostics.restarts += cfg.restarts;
    if let Some(best) = best {
        diagnostics.record(best.value / scale);
        if best.value < -cfg.tol {
            if let Some(w) = low_rank_witness(phi, &best.operator, k, cfg.tol)? {
                return Ok(Outcome::not_member(w, diagnostics));
            }
        }
    }

    for _ in 0..cfg.samples {
        diagnostics.projection_samples += 1;
        let e = random_projection_with(dims.n, k, rng)?;
        let f = random_projection_with(dims.m, k, rng)?;
        let reduced = projected_choi(phi, &e, &f);
        let eig = hermitian_eigen(&reduced.hermitian_part(), f64::INFINITY)?;
        let lam = eig.min_value();
        diagnostics.record(lam / scale);
        if lam < -cfg.tol {
            let u = eig.vector(0);
            let w = &(&e * &unvectorize(&u, dims)?) * &f;
            let dual_element = SuperOperator::conjugation(&w).normalized();
            let pairing = map_inner(&dual_element, phi)?.re;
            if pairing < -cfg.tol {
                let witness = Witness {
                    dual_element,
                    pairing,
                    evidence: Evidence::ProjectionPair { rank: k, e, f, vector: u, value: lam },
                };
                return Ok(Outcome::not_member(witness, diagnostics));
            }
        }
    }
    diagnostics.notes.push(format!("no refutation of {k}-positivity found; membership is not certified"));
    Ok(Outcome::unknown(diagnostics))
}

/// Eigenvalues within this relative gap are treated as one degenerate cluster.
const CLUSTER_GAP: f64 = 1e-9;

fn decide_spk(phi: &SuperOperator, k: usize, cfg: &MemberConfig, rng: &mut SeededRng) -> Result<Outcome> {
    let dims = phi.dims();
    if k >= dims.min() {
        return decide_cp(phi, cfg);
    }
    let mut diagnostics = Diagnostics::default();
    let eig = phi.choi_eigen(f64::INFINITY)?;
    let lam_min = eig.min_value();
    if lam_min < -cfg.tol {
        diagnostics.record(lam_min);
        diagnostics.notes.push("Choi matrix has a negative eigenvalue".into());
        return Ok(Outcome::not_member(eigenvector_witness(phi, eig.vector(0), lam_min)?, diagnostics));
    }

    if let Some(operators) = kraus_decomposition(phi, k, cfg, rng) {
        return Ok(Outcome::member(Certificate::Kraus { rank_bound: k, operators }, diagnostics));
    }
    diagnostics.notes.push(format!("no Kraus decomposition with ranks ≤ {k} found"));

    // Ψ_W = Tr − Ad_W / ‖W‖²_(k) lies on the boundary of P_k and pairs to
    // Tr C − ⟨w, C w⟩ / ‖W‖²_(k).
    let trace = phi.choi().trace().re;
    let mut candidates: Vec<Vec<C64>> = (0..eig.values.len()).rev().map(|i| eig.vector(i)).collect();
    let positive: Vec<usize> = (0..eig.values.len()).filter(|&i| eig.values[i] > 0.0).collect();
    for _ in 0..cfg.samples {
        let g = crate::linalg::gaussian_vector(positive.len().max(1), rng);
        let mut w = vec![ZERO; dims.choi_dim()];
        for (gi, &i) in g.iter().zip(&positive) {
            let s = eig.values[i].sqrt();
            for (wj, vj) in w.iter_mut().zip(eig.vector(i)) {
                *wj += gi * s * vj;
            }
        }
        candidates.push(w);
    }
    let mut best: Option<(f64, ComplexMatrix)> = None;
    for w in candidates {
        diagnostics.dual_samples += 1;
        let op = unvectorize(&w, dims)?;
        let Ok(q) = ky_fan_quantity(&op, k) else { continue };
        if q <= 0.0 {
            continue;
        }
        let value = trace - phi.choi().rayleigh_quotient(&w) * vnorm(&w).powi(2) / q;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, op));
        }
    }
    if let Some((value, op)) = best {
        diagnostics.record(value);
        if value < -cfg.tol {
            let threshold = family::k_positivity_threshold(&op, k)?;
            let psi = family::build(&PhiLambdaSpec::new(op, threshold)?).normalized();
            let pairing = map_inner(&psi, phi)?.re;
            if pairing < -cfg.tol {
                return Ok(Outcome::not_member(
                    Witness { dual_element: psi, pairing, evidence: Evidence::DualPairing },
                    diagnostics,
                ));
            }
        }
    }

    for psi in sample_base_with(BaseCone::Positive(k), dims, cfg.samples, rng)?.maps {
        diagnostics.dual_samples += 1;
        let reduced = compose(&psi.adjoint(), phi)?;
        let eig = reduced.choi_eigen(f64::INFINITY)?;
        let lam = eig.min_value();
        if lam < -cfg.tol {
            let u = eig.vector(0);
            let v = unvectorize(&u, reduced.dims())?;
            let dual_element = compose(&psi, &SuperOperator::conjugation(&v))?.normalized();
            let pairing = map_inner(&dual_element, phi)?.re;
            diagnostics.record(pairing);
            if pairing < -cfg.tol {
                return Ok(Outcome::not_member(
                    Witness {
                        dual_element,
                        pairing,
                        evidence: Evidence::Composition { psi, vector: u, eigenvalue: lam },
                    },
                    diagnostics,
                ));
            }
        }
    }
    diagnostics.notes.push(format!("no dual element in P_{k} separating the map was found"));
    Ok(Outcome::unknown(diagnostics))
}

/// Kraus operators of rank ≤ `k` reproducing the Choi matrix, if found.
/// Eigenvectors first; inside degenerate eigenspaces, a basis of rank-`k`
/// vectors is searched for, since any orthonormal basis of the eigenspace
/// gives valid Kraus operators.
fn kraus_decomposition(
    phi: &SuperOperator,
    k: usize,
    cfg: &MemberConfig,
    rng: &mut SeededRng,
) -> Option<Vec<ComplexMatrix>> {
    let dims = phi.dims();
    let eig = phi.choi_eigen(f64::INFINITY).ok()?;
    let scale = eig.max_value().max(0.0);
    if scale == 0.0 {
        return Some(vec![ComplexMatrix::zeros(dims.n, dims.m)]);
    }
    let kept: Vec<usize> = (0..eig.values.len()).filter(|&i| eig.values[i] > 1e-13 * scale).collect();

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &kept {
        match clusters.last_mut() {
            Some(cl) if (eig.values[i] - eig.values[*cl.last().unwrap()]).abs() <= CLUSTER_GAP * scale => cl.push(i),
            _ => clusters.push(vec![i]),
        }
    }

    let low_rank = |v: &[C64]| unvectorize(v, dims).map(|op| numerical_rank(&op, RANK_TOL) <= k).unwrap_or(false);
    let mut operators = Vec::new();
    let mut budget = cfg.max_iters;
    for cluster in clusters {
        let mean = cluster.iter().map(|&i| eig.values[i]).sum::<f64>() / cluster.len() as f64;
        let basis: Vec<Vec<C64>> = cluster.iter().map(|&i| eig.vector(i)).collect();
        let vectors = if basis.iter().all(|v| low_rank(v)) {
            basis
        } else if basis.len() == 1 {
            return None;
        } else {
            low_rank_basis(&basis, dims, k, cfg, &mut budget, rng)?
        };
        for v in vectors {
            let op = unvectorize(&v, dims).ok()?;
            operators.push(op.scale_real(mean.sqrt()));
        }
    }
    let candidate = Certificate::Kraus { rank_bound: k, operators };
    if candidate.reverify(phi, cfg.tol) {
        match candidate {
            Certificate::Kraus { operators, .. } => Some(operators),
            _ => unreachable!(),
        }
    } else {
        None
    }
}

/// Orthonormal basis of `span(basis)` made of vectors `vec(U)` with
/// `rk U ≤ k`, found one vector at a time.
fn low_rank_basis(
    basis: &[Vec<C64>],
    dims: MapDims,
    k: usize,
    cfg: &MemberConfig,
    budget: &mut usize,
    rng: &mut SeededRng,
) -> Option<Vec<Vec<C64>>> {
    let d = dims.choi_dim();
    let projector = |vs: &[Vec<C64>]| {
        let mut p = ComplexMatrix::zeros(d, d);
        for v in vs {
            p = &p + &ComplexMatrix::outer(v, v);
        }
        p
    };
    let mut remaining = projector(basis);
    let mut found: Vec<Vec<C64>> = Vec::new();
    let restarts = cfg.restarts.clamp(1, 8);
    while found.len() < basis.len() {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let best = multistart(&remaining.scale_real(-1.0), dims, k, restarts, cfg.max_iters, rng)?;
        if best.value > -1.0 + 1e-6 {
            continue;
        }
        let v = polish(&vectorize(&best.operator), &remaining, dims, k)?;
        remaining = &remaining - &ComplexMatrix::outer(&v, &v);
        found.push(v);
    }
    Some(found)
}

/// Snaps an approximate rank-`k` vector in the range of `p` onto the
/// intersection of that range with `{vec(E X F)}`, where `E`, `F` are its
/// `k`-dimensional row and column projections.
fn polish(u: &[C64], p: &ComplexMatrix, dims: MapDims, k: usize) -> Option<Vec<C64>> {
    let op = unvectorize(u, dims).ok()?;
    let e = range_projection(&op, k).ok()?;
    let f = range_projection(&op.dagger(), k).ok()?;
    let q = kron(&f.transpose(), &e);
    let eig = hermitian_eigen(&(p + &q).hermitian_part(), f64::INFINITY).ok()?;
    let top = eig.values.len() - 1;
    if eig.values[top] < 2.0 - 1e-9 {
        return None;
    }
    let v = eig.vector(top);
    let op = unvectorize(&v, dims).ok()?;
    let v = vectorize(&(&(&e * &op) * &f));
    Some(crate::linalg::normalized(&v))
}
