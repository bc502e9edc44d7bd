//! Randomized checks of structural cone properties: closure under CP
//! conjugation, symmetric duals and bidual inclusion.

use serde::{Deserialize, Serialize};

use super::expr::{dual_expr, BaseCone, ConeExpr};
use super::member::{member, pair};
use super::sample::sample_generators;
use super::verdict::{Certificate, MemberConfig, Status};
use crate::error::{Error, Result};
use crate::linalg::{complex_gaussian, seeded_rng, ComplexMatrix};
use crate::superop::{compose, MapDims, SuperOperator};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub probe: String,
    pub cone: String,
    pub dims: MapDims,
    pub samples: usize,
    /// Smallest pairing seen on the dual side.
    pub min_pairing: Option<f64>,
    /// Samples whose membership was certified (Member verdict or rebuilt Kraus certificate).
    pub certified: usize,
    pub violations: Vec<String>,
    pub pass: bool,
}

impl ProbeReport {
    fn new(probe: &str, cone: &ConeExpr, dims: MapDims) -> Self {
        ProbeReport {
            probe: probe.into(),
            cone: cone.to_string(),
            dims,
            samples: 0,
            min_pairing: None,
            certified: 0,
            violations: Vec::new(),
            pass: true,
        }
    }

    fn record_pairing(&mut self, value: f64, tol: f64, what: impl FnOnce() -> String) {
        self.min_pairing = Some(self.min_pairing.map_or(value, |m| m.min(value)));
        if value < -tol {
            self.violations.push(format!("{}: pairing {value:e}", what()));
        }
    }

    fn finish(mut self) -> Self {
        self.pass = self.violations.is_empty();
        self
    }
}

struct CpFactor {
    kraus: Vec<ComplexMatrix>,
    map: SuperOperator,
}

fn random_cp_factor(dim: usize, rng: &mut crate::linalg::SeededRng) -> CpFactor {
    let kraus: Vec<ComplexMatrix> = (0..2).map(|_| complex_gaussian(dim, dim, rng)).collect();
    let map = SuperOperator::from_kraus(&kraus).expect("square Kraus operators");
    let s = map.choi().frobenius_norm().sqrt();
    let kraus: Vec<ComplexMatrix> = kraus.iter().map(|k| k.scale_real(1.0 / s)).collect();
    let map = SuperOperator::from_kraus(&kraus).expect("square Kraus operators");
    CpFactor { kraus, map }
}

/// Samples `Φ ∈ c` and CP maps `Υ` on `H`, `Ω` on `K`, and checks that
/// `Υ∘Φ∘Ω` is never refuted as a member of `c`. On the dual side, checks
/// `⟨Υ∘Ψ∘Ω, Φ'⟩ ≥ −tol` for `Ψ ∈ c°` and generators `Φ' ∈ c`.
pub fn mcs_stability_probe(c: &ConeExpr, dims: MapDims, trials: usize, cfg: &MemberConfig) -> Result<ProbeReport> {
    cfg.validate()?;
    let c = c.normalize(Some(dims))?;
    let dual = dual_expr(&c)?.normalize(Some(dims))?;
    let mut report = ProbeReport::new("mcs_stability", &c, dims);
    let mut rng = seeded_rng(cfg.seed);
    let gens = sample_generators(&c, dims, trials, cfg.seed)?.maps;
    let dual_gens = sample_generators(&dual, dims, trials, cfg.seed.wrapping_add(1))?.maps;
    let kraus_rank = match c {
        ConeExpr::Base(BaseCone::SuperPositive(k)) => Some(k),
        _ => None,
    };
    for (i, (phi, psi)) in gens.iter().zip(&dual_gens).enumerate() {
        report.samples += 1;
        let upsilon = random_cp_factor(dims.n, &mut rng);
        let omega = random_cp_factor(dims.m, &mut rng);
        let conj = compose(&upsilon.map, &compose(phi, &omega.map)?)?;
        let verdict = member(&conj, &c, cfg)?;
        match verdict.status {
            Status::NotMember => report.violations.push(format!("sample {i}: Υ∘Φ∘Ω refuted")),
            Status::Member => report.certified += 1,
            Status::Unknown => {}
        }
        if let Some(k) = kraus_rank {
            // Products A·V·B of Kraus operators keep rank ≤ k.
            let phi_kraus = match member(phi, &c, cfg)?.certificate {
                Some(Certificate::Kraus { operators, .. }) => operators,
                _ => {
                    report.violations.push(format!("sample {i}: generator has no Kraus certificate"));
                    continue;
                }
            };
            let mut operators = Vec::new();
            for a in &upsilon.kraus {
                for v in &phi_kraus {
                    for b in &omega.kraus {
                        operators.push(&(a * v) * b);
                    }
                }
            }
            let cert = Certificate::Kraus { rank_bound: k, operators };
            if cert.reverify(&conj, cfg.tol) {
                if verdict.status != Status::Member {
                    report.certified += 1;
                }
            } else {
                report.violations.push(format!("sample {i}: Kraus product certificate failed"));
            }
        }
        let dual_conj = compose(&upsilon.map, &compose(psi, &omega.map)?)?.normalized();
        for (j, other) in gens.iter().enumerate() {
            let value = pair(&dual_conj, other)?;
            report.record_pairing(value, cfg.tol, || format!("dual sample {i} vs generator {j}"));
        }
    }
    Ok(report.finish())
}

/// For `m = n`: `transpose_twirl(Ψ)` and `adjoint(Ψ)` of dual generators
/// still pair nonnegatively with generators of `c`.
pub fn symmetric_dual_probe(c: &ConeExpr, dims: MapDims, trials: usize, seed: u64, tol: f64) -> Result<ProbeReport> {
    if dims.m != dims.n {
        return Err(Error::DimensionMismatch(format!("symmetric dual probe needs m = n, got {dims}")));
    }
    let c = c.normalize(Some(dims))?;
    let dual = dual_expr(&c)?.normalize(Some(dims))?;
    let mut report = ProbeReport::new("symmetric_dual", &c, dims);
    let gens = sample_generators(&c, dims, trials, seed)?.maps;
    let dual_gens = sample_generators(&dual, dims, trials, seed.wrapping_add(1))?.maps;
    for (i, psi) in dual_gens.iter().enumerate() {
        report.samples += 1;
        let twirled = psi.transpose_twirl();
        let adjoint = psi.adjoint();
        for (j, phi) in gens.iter().enumerate() {
            let value = pair(&twirled, phi)?;
            report.record_pairing(value, tol, || format!("twirled dual {i} vs generator {j}"));
            let value = pair(&adjoint, phi)?;
            report.record_pairing(value, tol, || format!("adjoint dual {i} vs generator {j}"));
        }
    }
    Ok(report.finish())
}

/// Every sampled generator of `c` pairs nonnegatively with every sampled
/// generator of its dual.
pub fn bidual_inclusion(c: &ConeExpr, dims: MapDims, count: usize, seed: u64, tol: f64) -> Result<ProbeReport> {
    let c = c.normalize(Some(dims))?;
    let dual = dual_expr(&c)?.normalize(Some(dims))?;
    let mut report = ProbeReport::new("bidual_inclusion", &c, dims);
    let gens = sample_generators(&c, dims, count, seed)?.maps;
    let dual_gens = sample_generators(&dual, dims, count, seed.wrapping_add(1))?.maps;
    for (i, phi) in gens.iter().enumerate() {
        report.samples += 1;
        for (j, psi) in dual_gens.iter().enumerate() {
            let value = pair(psi, phi)?;
            report.record_pairing(value, tol, || format!("generator {i} vs dual generator {j}"));
        }
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: usize, n: usize) -> MapDims {
        MapDims::new(m, n).unwrap()
    }

    fn cfg() -> MemberConfig {
        MemberConfig { samples: 20, restarts: 4, ..MemberConfig::default() }
    }

    #[test]
    fn cp_is_stable() {
        let r = mcs_stability_probe(&ConeExpr::cp(), d(2, 2), 30, &cfg()).unwrap();
        assert!(r.pass, "{:?}", r.violations);
        assert_eq!(r.certified, 30);
    }

    #[test]
    fn superpositive_products_are_certified() {
        let r = mcs_stability_probe(&ConeExpr::superpositive(), d(2, 3), 15, &cfg()).unwrap();
        assert!(r.pass, "{:?}", r.violations);
        assert_eq!(r.certified, 15);
    }

    #[test]
    fn symmetric_duals() {
        for c in [ConeExpr::k_positive(1), ConeExpr::k_superpositive(2), ConeExpr::cp()] {
            let r = symmetric_dual_probe(&c, d(3, 3), 12, 5, 1e-9).unwrap();
            assert!(r.pass, "{c}: {:?}", r.violations);
        }
        assert!(symmetric_dual_probe(&ConeExpr::cp(), d(2, 3), 4, 0, 1e-9).is_err());
    }

    #[test]
    fn bidual_for_transposed_meet() {
        let c = ConeExpr::meet(ConeExpr::cp(), ConeExpr::transposed(ConeExpr::cp()));
        let r = bidual_inclusion(&c, d(2, 2), 12, 7, 1e-9).unwrap();
        assert!(r.pass, "{:?}", r.violations);
    }
}
