//! Linear maps `B(K) → B(H)` stored through their Choi matrices.
//!
//! With orthonormal bases `f_k` of `K` (dimension `m`) and `e_i` of `H`
//! (dimension `n`), the Choi matrix of `Φ` is `Σ_kl f_kl ⊗ Φ(f_kl)`. The
//! `(k, l)` block of size `n×n` is therefore `Φ(f_kl)`, and the entry at row
//! `k·n + i`, column `l·n + j` is the coefficient `Φ_{ij,kl} = ⟨e_i, Φ(f_kl) e_j⟩`.
//!
//! Operators `V: K → H` are `n×m` matrices. They vectorize as
//! `υ = Σ_ij V_ij f_j ⊗ e_i`, i.e. `υ[j·n + i] = V[i, j]`, which makes the
//! Choi matrix of `Ad_V: ρ ↦ VρV†` exactly `|υ⟩⟨υ|`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eigen, kron, ComplexMatrix, HermitianEigen, C64, ZERO};

/// Dimensions of the domain `K = C^m` and codomain `H = C^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MapDims {
    pub m: usize,
    pub n: usize,
}

impl MapDims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::DimensionMismatch(format!("map dimensions must be positive, got ({m}, {n})")));
        }
        Ok(Self { m, n })
    }

    /// Side length of the Choi matrix, `m·n`.
    pub fn choi_dim(&self) -> usize {
        self.m * self.n
    }

    pub fn min(&self) -> usize {
        self.m.min(self.n)
    }

    /// Dimensions of the adjoint map `B(H) → B(K)`.
    pub fn swapped(&self) -> Self {
        Self { m: self.n, n: self.m }
    }
}

impl std::fmt::Display for MapDims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// A linear map `B(C^m) → B(C^n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SuperOperatorJson", into = "SuperOperatorJson")]
pub struct SuperOperator {
    dims: MapDims,
    choi: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct SuperOperatorJson {
    m: usize,
    n: usize,
    choi: ComplexMatrix,
}

impl TryFrom<SuperOperatorJson> for SuperOperator {
    type Error = Error;

    fn try_from(json: SuperOperatorJson) -> Result<Self> {
        SuperOperator::from_choi(json.choi, MapDims::new(json.m, json.n)?)
    }
}

impl From<SuperOperator> for SuperOperatorJson {
    fn from(op: SuperOperator) -> Self {
        SuperOperatorJson { m: op.dims.m, n: op.dims.n, choi: op.choi }
    }
}

/// `υ[j·n + i] = V[i, j]` for `V: n×m`.
pub fn vectorize(v: &ComplexMatrix) -> Vec<C64> {
    let (n, m) = v.shape();
    let mut out = vec![ZERO; m * n];
    for i in 0..n {
        for j in 0..m {
            out[j * n + i] = v[(i, j)];
        }
    }
    out
}

/// Inverse of [`vectorize`]: returns the `n×m` operator.
pub fn unvectorize(u: &[C64], dims: MapDims) -> Result<ComplexMatrix> {
    if u.len() != dims.choi_dim() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} does not reshape to {}x{}",
            u.len(),
            dims.n,
            dims.m
        )));
    }
    Ok(ComplexMatrix::from_fn(dims.n, dims.m, |i, j| u[j * dims.n + i]))
}

impl SuperOperator {
    /// Wraps a Choi matrix. It must be `(m·n)×(m·n)`.
    pub fn from_choi(choi: ComplexMatrix, dims: MapDims) -> Result<Self> {
        let d = dims.choi_dim();
        if choi.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix for dims {dims} must be {d}x{d}, got {}x{}",
                choi.rows(),
                choi.cols()
            )));
        }
        Ok(Self { dims, choi })
    }

    /// Builds a map from its action on matrix units, `(k, l) ↦ Φ(f_kl)`.
    pub fn from_blocks(dims: MapDims, mut block: impl FnMut(usize, usize) -> ComplexMatrix) -> Self {
        let (m, n) = (dims.m, dims.n);
        let mut choi = ComplexMatrix::zeros(m * n, m * n);
        for k in 0..m {
            for l in 0..m {
                let b = block(k, l);
                debug_assert_eq!(b.shape(), (n, n));
                for i in 0..n {
                    for j in 0..n {
                        choi[(k * n + i, l * n + j)] = b[(i, j)];
                    }
                }
            }
        }
        Self { dims, choi }
    }

    pub fn zero(dims: MapDims) -> Self {
        Self { dims, choi: ComplexMatrix::zeros(dims.choi_dim(), dims.choi_dim()) }
    }

    /// Identity map on `B(C^m)`.
    pub fn identity(m: usize) -> Self {
        let dims = MapDims { m, n: m };
        Self::from_blocks(dims, |k, l| ComplexMatrix::unit(m, m, k, l))
    }

    /// `X ↦ Tr(X)·I_n`. Its Choi matrix is the identity.
    pub fn trace_map(dims: MapDims) -> Self {
        Self { dims, choi: ComplexMatrix::identity(dims.choi_dim()) }
    }

    /// Transposition `f_kl ↦ f_lk` on `B(C^m)`.
    pub fn transposition(m: usize) -> Self {
        let dims = MapDims { m, n: m };
        Self::from_blocks(dims, |k, l| ComplexMatrix::unit(m, m, l, k))
    }

    /// `Ad_V: ρ ↦ VρV†` for `V: n×m`.
    pub fn conjugation(v: &ComplexMatrix) -> Self {
        let dims = MapDims { m: v.cols(), n: v.rows() };
        let u = vectorize(v);
        Self { dims, choi: ComplexMatrix::outer(&u, &u) }
    }

    /// `Σ_i Ad_{V_i}`.
    pub fn from_kraus(ops: &[ComplexMatrix]) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::DimensionMismatch("empty Kraus list".into()))?;
        let shape = first.shape();
        if let Some(bad) = ops.iter().find(|v| v.shape() != shape) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operators must share shape {:?}, found {:?}",
                shape,
                bad.shape()
            )));
        }
        let dims = MapDims { m: shape.1, n: shape.0 };
        let mut choi = ComplexMatrix::zeros(dims.choi_dim(), dims.choi_dim());
        for v in ops {
            let u = vectorize(v);
            choi = &choi + &ComplexMatrix::outer(&u, &u);
        }
        Ok(Self { dims, choi })
    }

    /// Random map with Gaussian Choi matrix (not Hermiticity-preserving in general).
    pub fn random<R: Rng + ?Sized>(dims: MapDims, rng: &mut R) -> Self {
        let d = dims.choi_dim();
        Self { dims, choi: linalg::complex_gaussian(d, d, rng) }
    }

    /// Random Hermiticity-preserving map.
    pub fn random_hermiticity_preserving<R: Rng + ?Sized>(dims: MapDims, rng: &mut R) -> Self {
        Self { dims, choi: linalg::random_hermitian(dims.choi_dim(), rng) }
    }

    /// Random completely positive map with `kraus_count` Gaussian Kraus operators.
    pub fn random_cp<R: Rng + ?Sized>(dims: MapDims, kraus_count: usize, rng: &mut R) -> Self {
        let ops: Vec<_> = (0..kraus_count.max(1)).map(|_| linalg::complex_gaussian(dims.n, dims.m, rng)).collect();
        Self::from_kraus(&ops).expect("consistent Kraus shapes")
    }

    pub fn dims(&self) -> MapDims {
        self.dims
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    pub fn into_choi(self) -> ComplexMatrix {
        self.choi
    }

    /// `Φ_{ij,kl} = ⟨e_i, Φ(f_kl) e_j⟩`, zero-based indices.
    pub fn coefficient(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        let n = self.dims.n;
        self.choi[(k * n + i, l * n + j)]
    }

    /// `Φ(f_kl)`.
    pub fn block(&self, k: usize, l: usize) -> ComplexMatrix {
        let n = self.dims.n;
        ComplexMatrix::from_fn(n, n, |i, j| self.choi[(k * n + i, l * n + j)])
    }

    /// `Φ(X)` for an `m×m` input.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (m, n) = (self.dims.m, self.dims.n);
        if x.shape() != (m, m) {
            return Err(Error::DimensionMismatch(format!(
                "map on B(C^{m}) applied to {}x{} input",
                x.rows(),
                x.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..m {
            for l in 0..m {
                let coeff = x[(k, l)];
                if coeff == ZERO {
                    continue;
                }
                for i in 0..n {
                    for j in 0..n {
                        out[(i, j)] += coeff * self.choi[(k * n + i, l * n + j)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// The conjugate map `Φ*: B(H) → B(K)` defined by
    /// `⟨A, Φ(B)⟩ = ⟨Φ*(A), B⟩`. Uses `Φ*(e_ij) = Σ_kl conj(Φ_{ij,kl}) f_kl`.
    pub fn adjoint(&self) -> Self {
        let (m, n) = (self.dims.m, self.dims.n);
        let choi = ComplexMatrix::from_fn(m * n, m * n, |r, c| {
            let (i, k) = (r / m, r % m);
            let (j, l) = (c / m, c % m);
            self.choi[(k * n + i, l * n + j)].conj()
        });
        Self { dims: self.dims.swapped(), choi }
    }

    /// `t ∘ Φ ∘ t` with transpositions on both sides.
    pub fn transpose_twirl(&self) -> Self {
        Self::from_blocks(self.dims, |k, l| self.block(l, k).transpose())
    }

    /// `Φ ∘ t`, transposition applied on the domain only.
    pub fn compose_transpose(&self) -> Self {
        Self::from_blocks(self.dims, |k, l| self.block(l, k))
    }

    /// `Φ ⊗ id_k: B(K ⊗ C^k) → B(H ⊗ C^k)`.
    pub fn tensor_with_identity(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig("tensor_with_identity needs k >= 1".into()));
        }
        let dims = MapDims { m: self.dims.m * k, n: self.dims.n * k };
        Ok(Self::from_blocks(dims, |r, c| {
            let (a, p) = (r / k, r % k);
            let (b, q) = (c / k, c % k);
            kron(&self.block(a, b), &ComplexMatrix::unit(k, k, p, q))
        }))
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        self.choi.hermitian_deviation()
    }

    /// True iff the Choi matrix is self-adjoint within `tol`.
    pub fn is_hermiticity_preserving(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn choi_eigen(&self, tol: f64) -> Result<HermitianEigen> {
        hermitian_eigen(&self.choi, tol).map_err(|e| match e {
            Error::NotHermitian { deviation } => Error::NotHermiticityPreserving { deviation },
            other => other,
        })
    }

    /// Smallest eigenvalue of the Choi matrix. Requires a Hermiticity-preserving map.
    pub fn choi_min_eigenvalue(&self, tol: f64) -> Result<f64> {
        Ok(self.choi_eigen(tol)?.min_value())
    }

    /// Choi's criterion: completely positive iff the Choi matrix is PSD (within `tol`).
    pub fn is_completely_positive(&self, tol: f64) -> Result<bool> {
        Ok(self.choi_min_eigenvalue(tol)? >= -tol)
    }

    fn check_same_dims(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!("maps with dims {} and {}", self.dims, other.dims)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dims(other)?;
        Ok(Self { dims: self.dims, choi: &self.choi + &other.choi })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dims(other)?;
        Ok(Self { dims: self.dims, choi: &self.choi - &other.choi })
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { dims: self.dims, choi: self.choi.scale_real(s) }
    }

    /// Rescaled so the Choi matrix has unit Frobenius norm (zero map unchanged).
    pub fn normalized(&self) -> Self {
        let norm = self.choi.frobenius_norm();
        if norm == 0.0 {
            self.clone()
        } else {
            self.scaled(1.0 / norm)
        }
    }
}

/// `Ψ ∘ Φ` for `Φ: B(K) → B(H)` and `Ψ: B(H) → B(L)`.
pub fn compose(psi: &SuperOperator, phi: &SuperOperator) -> Result<SuperOperator> {
    if psi.dims.m != phi.dims.n {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose {} after {}: inner dimensions {} and {}",
            psi.dims, phi.dims, psi.dims.m, phi.dims.n
        )));
    }
    let dims = MapDims { m: phi.dims.m, n: psi.dims.n };
    let mut err = None;
    let out = SuperOperator::from_blocks(dims, |k, l| {
        psi.apply(&phi.block(k, l)).unwrap_or_else(|e| {
            err = Some(e);
            ComplexMatrix::zeros(dims.n, dims.n)
        })
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Inner product of maps, computed on Choi matrices: `Tr(C_Φ C_Ψ†)`.
pub fn map_inner(phi: &SuperOperator, psi: &SuperOperator) -> Result<C64> {
    phi.check_same_dims(psi)?;
    Ok(linalg::hs_inner_unchecked(&phi.choi, &psi.choi))
}

/// Inner product of maps, computed from the definition
/// `Σ_kl ⟨Φ(f_kl), Ψ(f_kl)⟩`.
pub fn map_inner_by_blocks(phi: &SuperOperator, psi: &SuperOperator) -> Result<C64> {
    phi.check_same_dims(psi)?;
    let m = phi.dims.m;
    let mut total = ZERO;
    for k in 0..m {
        for l in 0..m {
            let a = phi.apply(&ComplexMatrix::unit(m, m, k, l))?;
            let b = psi.apply(&ComplexMatrix::unit(m, m, k, l))?;
            total += linalg::hs_inner(&a, &b)?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{complex_gaussian, hs_inner, seeded_rng};

    fn dims(m: usize, n: usize) -> MapDims {
        MapDims::new(m, n).unwrap()
    }

    #[test]
    fn from_choi_checks_size() {
        assert!(SuperOperator::from_choi(ComplexMatrix::identity(5), dims(2, 2)).is_err());
        let c = complex_gaussian(6, 6, &mut seeded_rng(1));
        let op = SuperOperator::from_choi(c.clone(), dims(2, 3)).unwrap();
        assert_eq!(op.choi(), &c);
        assert!(MapDims::new(0, 2).is_err());
    }

    #[test]
    fn zero_choi_is_zero_map() {
        let op = SuperOperator::from_choi(ComplexMatrix::zeros(4, 4), dims(2, 2)).unwrap();
        let x = complex_gaussian(2, 2, &mut seeded_rng(2));
        assert_eq!(op.apply(&x).unwrap(), ComplexMatrix::zeros(2, 2));
    }

    #[test]
    fn identity_choi_is_trace_map() {
        let op = SuperOperator::from_choi(ComplexMatrix::identity(6), dims(2, 3)).unwrap();
        let x = complex_gaussian(2, 2, &mut seeded_rng(3));
        let y = op.apply(&x).unwrap();
        assert!(y.max_abs_diff(&ComplexMatrix::identity(3).scale(x.trace())) < 1e-14);
    }

    #[test]
    fn identity_map_applies_as_identity() {
        let x = complex_gaussian(2, 2, &mut seeded_rng(4));
        assert_eq!(SuperOperator::identity(2).apply(&x).unwrap(), x);
        assert!(SuperOperator::identity(2).apply(&ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn apply_on_unit_is_block() {
        let op = SuperOperator::random(dims(3, 2), &mut seeded_rng(5));
        for k in 0..3 {
            for l in 0..3 {
                assert_eq!(op.apply(&ComplexMatrix::unit(3, 3, k, l)).unwrap(), op.block(k, l));
            }
        }
    }

    #[test]
    fn conjugation_matches_direct_product() {
        let mut rng = seeded_rng(6);
        let v = complex_gaussian(3, 2, &mut rng);
        let x = complex_gaussian(2, 2, &mut rng);
        let ad = SuperOperator::conjugation(&v);
        assert!(ad.apply(&x).unwrap().max_abs_diff(&v.conjugate_by(&x)) <= 1e-10);
    }

    #[test]
    fn kraus_identity_gives_maximally_entangled_projector() {
        let op = SuperOperator::from_kraus(&[ComplexMatrix::identity(2)]).unwrap();
        let mut omega = vec![ZERO; 4];
        omega[0] = C64::new(1.0, 0.0);
        omega[3] = C64::new(1.0, 0.0);
        assert_eq!(op.choi(), &ComplexMatrix::outer(&omega, &omega));
        assert_eq!(op.choi().trace(), C64::new(2.0, 0.0));
    }

    #[test]
    fn kraus_rejects_bad_shapes() {
        assert!(SuperOperator::from_kraus(&[]).is_err());
        let ops = [ComplexMatrix::identity(2), ComplexMatrix::zeros(2, 3)];
        assert!(SuperOperator::from_kraus(&ops).is_err());
    }

    #[test]
    fn kraus_pair_matches_sum_of_conjugations() {
        let mut rng = seeded_rng(7);
        let v1 = complex_gaussian(2, 3, &mut rng);
        let v2 = complex_gaussian(2, 3, &mut rng);
        let x = complex_gaussian(3, 3, &mut rng);
        let op = SuperOperator::from_kraus(&[v1.clone(), v2.clone()]).unwrap();
        let direct = &v1.conjugate_by(&x) + &v2.conjugate_by(&x);
        assert!(op.apply(&x).unwrap().max_abs_diff(&direct) <= 1e-10);
        assert!(op.is_completely_positive(1e-9).unwrap());
    }

    #[test]
    fn rank_one_kraus_has_rank_one_choi() {
        let mut rng = seeded_rng(8);
        let v = linalg::random_low_rank(3, 3, 1, &mut rng);
        let op = SuperOperator::conjugation(&v);
        let eig = op.choi_eigen(1e-9).unwrap();
        let positive = eig.values.iter().filter(|&&x| x > 1e-9).count();
        assert_eq!(positive, 1);
    }

    #[test]
    fn adjoint_basics() {
        assert_eq!(SuperOperator::identity(3).adjoint(), SuperOperator::identity(3));
        let mut rng = seeded_rng(9);
        let v = complex_gaussian(3, 2, &mut rng);
        let ad = SuperOperator::conjugation(&v).adjoint();
        assert!(ad.choi().max_abs_diff(SuperOperator::conjugation(&v.dagger()).choi()) < 1e-14);
        let phi = SuperOperator::random(dims(2, 3), &mut rng);
        assert_eq!(phi.adjoint().adjoint(), phi);
        assert_eq!(phi.adjoint().dims(), dims(3, 2));
    }

    #[test]
    fn adjoint_of_trace_map_satisfies_pairing() {
        let mut rng = seeded_rng(10);
        let tr = SuperOperator::trace_map(dims(3, 3));
        let adj = tr.adjoint();
        for _ in 0..20 {
            let a = complex_gaussian(3, 3, &mut rng);
            let b = complex_gaussian(3, 3, &mut rng);
            let lhs = hs_inner(&a, &tr.apply(&b).unwrap()).unwrap();
            let rhs = hs_inner(&adj.apply(&a).unwrap(), &b).unwrap();
            assert!((lhs - rhs).norm() <= 1e-9);
        }
    }

    #[test]
    fn compose_rules() {
        let mut rng = seeded_rng(11);
        let phi = SuperOperator::random(dims(2, 3), &mut rng);
        assert!(compose(&SuperOperator::identity(3), &phi).unwrap().choi().max_abs_diff(phi.choi()) < 1e-14);
        let v = complex_gaussian(3, 2, &mut rng);
        let w = complex_gaussian(2, 3, &mut rng);
        let lhs = compose(&SuperOperator::conjugation(&w), &SuperOperator::conjugation(&v)).unwrap();
        let rhs = SuperOperator::conjugation(&(&w * &v));
        assert!(lhs.choi().max_abs_diff(rhs.choi()) <= 1e-10);
        let t = SuperOperator::transposition(3);
        assert_eq!(compose(&t, &t).unwrap(), SuperOperator::identity(3));
        assert!(compose(&phi, &phi).is_err());
    }

    #[test]
    fn map_inner_examples() {
        let id = SuperOperator::identity(2);
        assert_eq!(map_inner(&id, &id).unwrap(), C64::new(4.0, 0.0));
        assert_eq!(map_inner_by_blocks(&id, &id).unwrap(), C64::new(4.0, 0.0));
        let mut rng = seeded_rng(12);
        let v = complex_gaussian(2, 3, &mut rng);
        let w = complex_gaussian(2, 3, &mut rng);
        let expected = (&w.dagger() * &v).trace().norm_sqr();
        let got = map_inner(&SuperOperator::conjugation(&v), &SuperOperator::conjugation(&w)).unwrap();
        assert!((got - C64::new(expected, 0.0)).norm() < 1e-10);
        assert!(map_inner(&id, &SuperOperator::identity(3)).is_err());
    }

    #[test]
    fn transpose_twirl_rules() {
        let id = SuperOperator::identity(3);
        assert_eq!(id.transpose_twirl(), id);
        let mut rng = seeded_rng(13);
        let v = complex_gaussian(3, 2, &mut rng);
        let twirled = SuperOperator::conjugation(&v).transpose_twirl();
        assert!(twirled.choi().max_abs_diff(SuperOperator::conjugation(&v.conj()).choi()) < 1e-14);
        let phi = SuperOperator::random(dims(2, 3), &mut rng);
        assert_eq!(phi.transpose_twirl().transpose_twirl(), phi);
        assert_eq!(phi.compose_transpose().compose_transpose(), phi);
    }

    #[test]
    fn compose_transpose_matches_explicit_composition() {
        let phi = SuperOperator::random(dims(3, 2), &mut seeded_rng(14));
        let explicit = compose(&phi, &SuperOperator::transposition(3)).unwrap();
        assert_eq!(phi.compose_transpose(), explicit);
    }

    #[test]
    fn tensor_with_identity_rules() {
        let mut rng = seeded_rng(15);
        let phi = SuperOperator::random(dims(2, 3), &mut rng);
        assert_eq!(phi.tensor_with_identity(1).unwrap(), phi);
        assert_eq!(SuperOperator::identity(2).tensor_with_identity(3).unwrap(), SuperOperator::identity(6));
        let ext = phi.tensor_with_identity(2).unwrap();
        let a = complex_gaussian(2, 2, &mut rng);
        let b = complex_gaussian(2, 2, &mut rng);
        let lhs = ext.apply(&kron(&a, &b)).unwrap();
        let rhs = kron(&phi.apply(&a).unwrap(), &b);
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        assert!(phi.tensor_with_identity(0).is_err());
    }

    #[test]
    fn transposition_is_not_two_positive() {
        // (t ⊗ id_2) applied to |Ω⟩⟨Ω| yields the swap operator, eigenvalue -1.
        let t2 = SuperOperator::transposition(2).tensor_with_identity(2).unwrap();
        let omega_proj = SuperOperator::identity(2).into_choi();
        let out = t2.apply(&omega_proj).unwrap();
        let eig = hermitian_eigen(&omega_proj, 1e-12).unwrap();
        assert!(eig.min_value() >= -1e-12);
        let out_eig = hermitian_eigen(&out, 1e-12).unwrap();
        assert!((out_eig.min_value() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn hermiticity_preservation() {
        assert!(SuperOperator::identity(2).is_hermiticity_preserving(1e-12));
        let mut choi = ComplexMatrix::zeros(4, 4);
        choi[(0, 1)] = C64::new(0.0, 1.0);
        let op = SuperOperator::from_choi(choi, dims(2, 2)).unwrap();
        assert!(!op.is_hermiticity_preserving(1e-9));
        let v = complex_gaussian(3, 3, &mut seeded_rng(16));
        assert!(SuperOperator::conjugation(&v).is_hermiticity_preserving(1e-12));
    }

    #[test]
    fn coefficient_convention() {
        let op = SuperOperator::random(dims(2, 3), &mut seeded_rng(17));
        assert_eq!(op.coefficient(2, 1, 1, 0), op.block(1, 0)[(2, 1)]);
        assert_eq!(op.coefficient(2, 1, 1, 0), op.choi()[(3 + 2, 1)]);
    }

    #[test]
    fn json_round_trip() {
        let op = SuperOperator::random(dims(2, 3), &mut seeded_rng(18));
        let s = serde_json::to_string(&op).unwrap();
        let back: SuperOperator = serde_json::from_str(&s).unwrap();
        assert_eq!(back, op);
        let bad = r#"{"m":2,"n":2,"choi":{"rows":1,"cols":1,"entries":[[1,0]]}}"#;
        assert!(serde_json::from_str::<SuperOperator>(bad).is_err());
    }
}
