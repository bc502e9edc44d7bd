//! The maps `Φ_λ = Tr − λ·Ad_V` and their positivity thresholds.
//!
//! `C_{Φ_λ} = 𝟙 − λ|υ⟩⟨υ|` with `υ` the vectorization of `V`, so `Φ_λ` is
//! completely positive iff `λ·Tr(VV†) ≤ 1`. Composing with a rank-`k`
//! projection `E` on the output replaces `V` by `EV`; maximizing
//! `Tr(E VV†)` over such `E` gives the sum of the `k` largest eigenvalues of
//! `VV†`, and `Φ_λ` is `k`-positive iff `λ` times that sum is at most one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eigen, range_projection, seeded_rng, ComplexMatrix};
use crate::superop::{self, compose, MapDims, SuperOperator};

/// `V: K → H` (an `n×m` matrix) and the scalar `λ ≥ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiLambdaSpec {
    pub v: ComplexMatrix,
    pub lambda: f64,
}

impl PhiLambdaSpec {
    pub fn new(v: ComplexMatrix, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidConfig(format!("lambda must be a nonnegative real, got {lambda}")));
        }
        if v.max_abs() == 0.0 {
            return Err(Error::ZeroOperator);
        }
        Ok(Self { v, lambda })
    }

    pub fn dims(&self) -> MapDims {
        MapDims { m: self.v.cols(), n: self.v.rows() }
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self { v: self.v.clone(), lambda }
    }
}

/// `Tr − λ·Ad_V`, with Choi matrix `𝟙 − λ|υ⟩⟨υ|`.
pub fn build(spec: &PhiLambdaSpec) -> SuperOperator {
    let dims = spec.dims();
    let u = superop::vectorize(&spec.v);
    let choi = &ComplexMatrix::identity(dims.choi_dim()) - &ComplexMatrix::outer(&u, &u).scale_real(spec.lambda);
    SuperOperator::from_choi(choi, dims).expect("Choi size follows from V")
}

fn nonzero(v: &ComplexMatrix) -> Result<()> {
    if v.max_abs() == 0.0 {
        Err(Error::ZeroOperator)
    } else {
        Ok(())
    }
}

/// `1 / Tr(VV†)`.
pub fn cp_threshold(v: &ComplexMatrix) -> Result<f64> {
    nonzero(v)?;
    Ok(1.0 / v.frobenius_norm().powi(2))
}

/// Sum of the `k` largest eigenvalues of `VV†`, i.e. the maximum of
/// `Tr(E VV†)` over rank-`k` projections `E`.
pub fn ky_fan_quantity(v: &ComplexMatrix, k: usize) -> Result<f64> {
    let dim = v.rows().min(v.cols());
    if k == 0 || k > dim {
        return Err(Error::RankOutOfRange { rank: k, dim });
    }
    let s = linalg::singular_values(v);
    Ok(s.iter().take(k).map(|x| x * x).sum())
}

/// `1 / ky_fan_quantity(V, k)`: the largest `λ` with `Φ_λ` `k`-positive.
pub fn k_positivity_threshold(v: &ComplexMatrix, k: usize) -> Result<f64> {
    nonzero(v)?;
    Ok(1.0 / ky_fan_quantity(v, k)?)
}

/// Projection onto the top-`k` eigenspace of `VV†`; attains the maximum of
/// `Tr(E VV†)`.
pub fn top_k_projection(v: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    range_projection(v, k)
}

/// Result of sampling rank-`k` projections `E` and testing `Ad_E ∘ Φ_λ` for
/// complete positivity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BruteForceOutcome {
    pub k_positive: bool,
    pub samples: usize,
    pub min_eigenvalue: f64,
    /// A projection `E` with `Ad_E ∘ Φ_λ` not completely positive.
    pub witness: Option<ComplexMatrix>,
}

/// Smallest Choi eigenvalue of `Ad_E ∘ Φ`.
pub fn projected_min_eigenvalue(phi: &SuperOperator, e: &ComplexMatrix, tol: f64) -> Result<f64> {
    compose(&SuperOperator::conjugation(e), phi)?.choi_min_eigenvalue(tol.max(1e-9))
}

/// Samples `trials` random rank-`k` projections on the output space, plus
/// the top-`k` eigenspace projection of `VV†`, and tests `Ad_E ∘ Φ_λ` for
/// complete positivity.
pub fn brute_force_k_positivity(
    spec: &PhiLambdaSpec,
    k: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<BruteForceOutcome> {
    let dims = spec.dims();
    if k == 0 || k > dims.min() {
        return Err(Error::RankOutOfRange { rank: k, dim: dims.min() });
    }
    let phi = build(spec);
    let mut rng = seeded_rng(seed);
    let mut candidates = Vec::with_capacity(trials + 1);
    candidates.push(top_k_projection(&spec.v, k)?);
    for _ in 0..trials {
        candidates.push(linalg::random_projection_with(dims.n, k, &mut rng)?);
    }
    let mut min_eigenvalue = f64::INFINITY;
    let mut witness = None;
    for e in candidates {
        let value = projected_min_eigenvalue(&phi, &e, tol)?;
        if value < min_eigenvalue {
            min_eigenvalue = value;
            if value < -tol {
                witness = Some(e);
            }
        }
    }
    Ok(BruteForceOutcome { k_positive: witness.is_none(), samples: trials + 1, min_eigenvalue, witness })
}

/// A map recognized as `scale · Φ_λ` with a unit-norm `V`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recognized {
    pub spec: PhiLambdaSpec,
    pub scale: f64,
}

impl Recognized {
    /// `λ · ky_fan_quantity(V, k) ≤ 1 + tol`.
    pub fn is_k_positive(&self, k: usize, tol: f64) -> Result<bool> {
        Ok(self.spec.lambda * ky_fan_quantity(&self.spec.v, k)? <= 1.0 + tol)
    }

    pub fn rebuild(&self) -> SuperOperator {
        build(&self.spec).scaled(self.scale)
    }

    /// The Schmidt-truncated operator `E·V` with `E` the top-`k` projection.
    /// When `Φ_λ` is not `k`-positive, `Ad_{EV}` pairs negatively with it.
    pub fn refuting_operator(&self, k: usize) -> Result<ComplexMatrix> {
        Ok(&top_k_projection(&self.spec.v, k)? * &self.spec.v)
    }
}

/// Detects Choi matrices of the form `s·(𝟙 − λ|υ⟩⟨υ|)` with `s > 0`, `λ ≥ 0`.
pub fn recognize(phi: &SuperOperator, tol: f64) -> Option<Recognized> {
    let d = phi.dims().choi_dim();
    if d < 2 || !phi.is_hermiticity_preserving(tol) {
        return None;
    }
    let eig = hermitian_eigen(phi.choi(), f64::INFINITY).ok()?;
    let scale = eig.max_value();
    if scale <= 0.0 {
        return None;
    }
    let plateau_tol = tol * scale.max(1.0);
    if eig.values[1..].iter().any(|&x| (x - scale).abs() > plateau_tol) {
        return None;
    }
    let lambda = (1.0 - eig.values[0] / scale).max(0.0);
    let v = superop::unvectorize(&eig.vector(0), phi.dims()).ok()?;
    let rec = Recognized { spec: PhiLambdaSpec { v, lambda }, scale };
    if rec.rebuild().choi().max_abs_diff(phi.choi()) > 1e-8 * scale.max(1.0) {
        return None;
    }
    Some(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{complex_gaussian, normalized, C64};
    use approx::assert_abs_diff_eq;

    fn eye(d: usize) -> ComplexMatrix {
        ComplexMatrix::identity(d)
    }

    #[test]
    fn lambda_zero_is_trace_map() {
        let phi = build(&PhiLambdaSpec::new(eye(3), 0.0).unwrap());
        assert_eq!(phi.choi(), &eye(9));
    }

    #[test]
    fn reduction_type_spectrum() {
        let phi = build(&PhiLambdaSpec::new(eye(2), 1.0).unwrap());
        let eig = phi.choi_eigen(1e-12).unwrap();
        let expected = [-1.0, 1.0, 1.0, 1.0];
        for (got, want) in eig.values.iter().zip(expected) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn build_applies_as_formula() {
        let mut rng = seeded_rng(1);
        let v = complex_gaussian(3, 2, &mut rng);
        let spec = PhiLambdaSpec::new(v.clone(), 0.37).unwrap();
        let rho = complex_gaussian(2, 2, &mut rng);
        let expected = &eye(3).scale(rho.trace()) - &v.conjugate_by(&rho).scale_real(0.37);
        assert!(build(&spec).apply(&rho).unwrap().max_abs_diff(&expected) <= 1e-10);
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(PhiLambdaSpec::new(eye(2), -1.0).is_err());
        assert!(PhiLambdaSpec::new(ComplexMatrix::zeros(2, 2), 1.0).is_err());
        assert!(cp_threshold(&ComplexMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn cp_thresholds() {
        assert_abs_diff_eq!(cp_threshold(&eye(2)).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(cp_threshold(&eye(3)).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        let mut rng = seeded_rng(2);
        let u = normalized(&linalg::gaussian_vector(3, &mut rng));
        let w = normalized(&linalg::gaussian_vector(2, &mut rng));
        assert_abs_diff_eq!(cp_threshold(&ComplexMatrix::outer(&u, &w)).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn k_thresholds_for_identity() {
        for (k, want) in [(1, 1.0), (2, 0.5), (3, 1.0 / 3.0)] {
            assert_abs_diff_eq!(k_positivity_threshold(&eye(3), k).unwrap(), want, epsilon = 1e-12);
        }
        assert!(k_positivity_threshold(&eye(3), 0).is_err());
        assert!(k_positivity_threshold(&eye(3), 4).is_err());
    }

    #[test]
    fn k_threshold_with_singular_values_two_one() {
        let v = ComplexMatrix::diag_real(&[2.0, 1.0]);
        assert_abs_diff_eq!(k_positivity_threshold(&v, 1).unwrap(), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(k_positivity_threshold(&v, 2).unwrap(), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn rank_one_thresholds_are_flat() {
        let mut rng = seeded_rng(3);
        let v = linalg::random_low_rank(3, 3, 1, &mut rng);
        let t1 = k_positivity_threshold(&v, 1).unwrap();
        for k in 2..=3 {
            assert_abs_diff_eq!(k_positivity_threshold(&v, k).unwrap(), t1, epsilon = 1e-10 * t1);
        }
    }

    #[test]
    fn brute_force_brackets_threshold() {
        let mut rng = seeded_rng(4);
        let v = complex_gaussian(3, 3, &mut rng);
        for k in 1..=3 {
            let thr = k_positivity_threshold(&v, k).unwrap();
            let below =
                brute_force_k_positivity(&PhiLambdaSpec::new(v.clone(), 0.9 * thr).unwrap(), k, 200, 5, 1e-9).unwrap();
            assert!(below.k_positive);
            let above =
                brute_force_k_positivity(&PhiLambdaSpec::new(v.clone(), 1.1 * thr).unwrap(), k, 200, 5, 1e-9).unwrap();
            assert!(!above.k_positive);
            assert!(above.witness.is_some());
        }
    }

    #[test]
    fn brute_force_at_full_rank_matches_cp_test() {
        let mut rng = seeded_rng(6);
        let v = complex_gaussian(2, 2, &mut rng);
        for factor in [0.7, 1.3] {
            let spec = PhiLambdaSpec::new(v.clone(), factor * cp_threshold(&v).unwrap()).unwrap();
            let bf = brute_force_k_positivity(&spec, 2, 20, 1, 1e-9).unwrap();
            assert_eq!(bf.k_positive, build(&spec).is_completely_positive(1e-9).unwrap());
        }
    }

    #[test]
    fn recognizes_scaled_family_member() {
        let mut rng = seeded_rng(7);
        let v = complex_gaussian(2, 3, &mut rng);
        let spec = PhiLambdaSpec::new(v.clone(), 0.8).unwrap();
        let phi = build(&spec).scaled(2.5);
        let rec = recognize(&phi, 1e-9).expect("family member");
        assert_abs_diff_eq!(rec.scale, 2.5, epsilon = 1e-10);
        assert!(rec.rebuild().choi().max_abs_diff(phi.choi()) < 1e-9);
        for k in 1..=2 {
            let analytic = 0.8 <= k_positivity_threshold(&v, k).unwrap();
            assert_eq!(rec.is_k_positive(k, 1e-9).unwrap(), analytic);
        }
        assert!(recognize(&SuperOperator::identity(2), 1e-9).is_none());
        let mut choi = eye(4);
        choi[(0, 1)] = C64::new(0.0, 1.0);
        let not_hp = SuperOperator::from_choi(choi, MapDims::new(2, 2).unwrap()).unwrap();
        assert!(recognize(&not_hp, 1e-9).is_none());
    }
}
