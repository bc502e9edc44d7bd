//! Membership verdicts, with certificates and witnesses that can be checked
//! again from scratch.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{ky_fan_quantity, Recognized};
use crate::linalg::{self, is_psd_with_shift, numerical_rank, ComplexMatrix, C64};
use crate::superop::{compose, map_inner, SuperOperator};

/// Relative cutoff for counting singular values of Kraus operators.
pub const RANK_TOL: f64 = 1e-10;
/// Allowed entrywise error when rebuilding a Choi matrix from a certificate.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberConfig {
    pub tol: f64,
    /// Number of random dual-side samples (projection pairs, dual generators).
    pub samples: usize,
    pub seed: u64,
    pub max_iters: usize,
    /// Random restarts of the low-rank pairing minimization.
    pub restarts: usize,
}

impl Default for MemberConfig {
    fn default() -> Self {
        Self { tol: linalg::DEFAULT_TOL, samples: 500, seed: 0, max_iters: 200, restarts: 32 }
    }
}

impl MemberConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Member,
    NotMember,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Evidence that a map lies in a cone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Certificate {
    /// The Choi matrix is PSD down to `min_eigenvalue ≥ -tol`.
    PsdFloor {
        min_eigenvalue: f64,
    },
    /// `Φ = Σ Ad_{V_i}` with every `rk V_i ≤ rank_bound`.
    Kraus {
        rank_bound: usize,
        operators: Vec<ComplexMatrix>,
    },
    /// `Φ = scale·(Tr − λ Ad_V)` with `λ` below the `k`-positivity threshold.
    FamilyThreshold {
        recognized: Recognized,
        k: usize,
        threshold: f64,
    },
    /// The certificate applies to `Φ∘t`.
    Transposed {
        inner: Box<Certificate>,
    },
    Meet {
        left: Box<Certificate>,
        right: Box<Certificate>,
    },
    Join {
        side: Side,
        inner: Box<Certificate>,
    },
}

impl Certificate {
    /// Re-checks the certificate against `phi` without reusing any value it
    /// stores except the data that defines it.
    pub fn reverify(&self, phi: &SuperOperator, tol: f64) -> bool {
        match self {
            Certificate::PsdFloor { .. } => is_psd_with_shift(phi.choi(), 2.0 * tol),
            Certificate::Kraus { rank_bound, operators } => {
                if operators.is_empty() {
                    return false;
                }
                if operators.iter().any(|v| numerical_rank(v, RANK_TOL) > *rank_bound) {
                    return false;
                }
                match SuperOperator::from_kraus(operators) {
                    Ok(rebuilt) if rebuilt.dims() == phi.dims() => {
                        let scale = phi.choi().max_abs().max(1.0);
                        rebuilt.choi().max_abs_diff(phi.choi()) <= RECONSTRUCTION_TOL * scale
                    }
                    _ => false,
                }
            }
            Certificate::FamilyThreshold { recognized, k, .. } => {
                let rebuilt = recognized.rebuild();
                if rebuilt.dims() != phi.dims() {
                    return false;
                }
                let scale = recognized.scale.max(1.0);
                if rebuilt.choi().max_abs_diff(phi.choi()) > RECONSTRUCTION_TOL * scale {
                    return false;
                }
                ky_fan_quantity(&recognized.spec.v, *k)
                    .map(|q| recognized.spec.lambda * q <= 1.0 + tol)
                    .unwrap_or(false)
            }
            Certificate::Transposed { inner } => inner.reverify(&phi.compose_transpose(), tol),
            Certificate::Meet { left, right } => left.reverify(phi, tol) && right.reverify(phi, tol),
            Certificate::Join { inner, .. } => inner.reverify(phi, tol),
        }
    }
}

/// How a witness was obtained, in enough detail to recompute its negativity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Evidence {
    /// `⟨u, C_Φ u⟩ < 0`.
    NegativeEigenvector { vector: Vec<C64>, eigenvalue: f64 },
    /// `⟨ω, Φ(|υ⟩⟨υ|) ω⟩ < 0` for unit vectors `υ ∈ K`, `ω ∈ H`.
    VectorPair { upsilon: Vec<C64>, omega: Vec<C64>, value: f64 },
    /// Rank-`k` projections `E ∈ B(H)`, `F ∈ B(K)` with `Ad_E∘Φ∘Ad_F` not CP,
    /// shown by `vector`.
    ProjectionPair { rank: usize, e: ComplexMatrix, f: ComplexMatrix, vector: Vec<C64>, value: f64 },
    /// A dual element `Ψ` with `Ψ*∘Φ` not CP, shown by `vector`.
    Composition { psi: SuperOperator, vector: Vec<C64>, eigenvalue: f64 },
    /// Only the pairing with the dual element.
    DualPairing,
    /// The evidence applies to `Φ∘t`.
    Transposed { inner: Box<Evidence> },
}

impl Evidence {
    fn reverify(&self, phi: &SuperOperator, tol: f64) -> bool {
        let below = |x: f64| x.is_finite() && x < -tol;
        match self {
            Evidence::NegativeEigenvector { vector, .. } => {
                vector.len() == phi.dims().choi_dim() && below(phi.choi().rayleigh_quotient(vector))
            }
            Evidence::VectorPair { upsilon, omega, .. } => {
                let dims = phi.dims();
                if upsilon.len() != dims.m || omega.len() != dims.n {
                    return false;
                }
                let rho = ComplexMatrix::outer(upsilon, upsilon);
                match phi.apply(&rho) {
                    Ok(out) => {
                        let norm = linalg::vdot(upsilon, upsilon).re;
                        below(out.rayleigh_quotient(omega) / norm)
                    }
                    Err(_) => false,
                }
            }
            Evidence::ProjectionPair { rank, e, f, vector, .. } => {
                let dims = phi.dims();
                if e.shape() != (dims.n, dims.n) || f.shape() != (dims.m, dims.m) {
                    return false;
                }
                if !is_rank_projection(e, *rank) || !is_rank_projection(f, *rank) {
                    return false;
                }
                let inner = compose(phi, &SuperOperator::conjugation(f))
                    .and_then(|x| compose(&SuperOperator::conjugation(e), &x));
                match inner {
                    Ok(x) => vector.len() == dims.choi_dim() && below(x.choi().rayleigh_quotient(vector)),
                    Err(_) => false,
                }
            }
            Evidence::Composition { psi, vector, .. } => match compose(&psi.adjoint(), phi) {
                Ok(x) => vector.len() == x.dims().choi_dim() && below(x.choi().rayleigh_quotient(vector)),
                Err(_) => false,
            },
            Evidence::DualPairing => true,
            Evidence::Transposed { inner } => inner.reverify(&phi.compose_transpose(), tol),
        }
    }
}

fn is_rank_projection(p: &ComplexMatrix, rank: usize) -> bool {
    let tol = 1e-9;
    p.is_hermitian(tol) && (p * p).max_abs_diff(p) <= tol && (p.trace().re - rank as f64).abs() <= tol
}

/// A dual-cone element `Ψ` with `⟨Ψ, Φ⟩ < 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub dual_element: SuperOperator,
    pub pairing: f64,
    pub evidence: Evidence,
}

impl Witness {
    /// Recomputes the pairing and the evidence.
    pub fn reverify(&self, phi: &SuperOperator, tol: f64) -> bool {
        let pairing = match map_inner(&self.dual_element, phi) {
            Ok(z) => z.re,
            Err(_) => return false,
        };
        pairing < -tol && self.evidence.reverify(phi, tol)
    }

    pub(crate) fn transposed(self) -> Self {
        Witness {
            dual_element: self.dual_element.compose_transpose(),
            pairing: self.pairing,
            evidence: Evidence::Transposed { inner: Box::new(self.evidence) },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub projection_samples: usize,
    pub dual_samples: usize,
    pub restarts: usize,
    /// Smallest normalized pairing or eigenvalue seen while searching for a witness.
    pub best_value: Option<f64>,
    pub notes: Vec<String>,
}

impl Diagnostics {
    pub(crate) fn record(&mut self, value: f64) {
        if value.is_finite() {
            self.best_value = Some(self.best_value.map_or(value, |b| b.min(value)));
        }
    }

    pub(crate) fn merge(&mut self, other: Diagnostics) {
        self.projection_samples += other.projection_samples;
        self.dual_samples += other.dual_samples;
        self.restarts += other.restarts;
        if let Some(v) = other.best_value {
            self.record(v);
        }
        self.notes.extend(other.notes);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub cone: String,
    pub certificate: Option<Certificate>,
    pub witness: Option<Witness>,
    pub diagnostics: Diagnostics,
    pub config: MemberConfig,
}

impl Verdict {
    /// Checks that a `Member` verdict's certificate and a `NotMember`
    /// verdict's witness both hold for `phi`.
    pub fn reverify(&self, phi: &SuperOperator) -> bool {
        match self.status {
            Status::Member => self.certificate.as_ref().is_some_and(|c| c.reverify(phi, self.config.tol)),
            Status::NotMember => self.witness.as_ref().is_some_and(|w| w.reverify(phi, self.config.tol)),
            Status::Unknown => self.certificate.is_none() && self.witness.is_none(),
        }
    }
}
