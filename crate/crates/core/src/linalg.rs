//! Dense complex matrices and the handful of factorizations the rest of the
//! crate needs.
//!
//! Storage is row-major. Eigen- and singular-value problems are delegated to
//! `nalgebra`; everything else (tensor products, Hilbert-Schmidt pairings,
//! seeded sampling of projections and operators) is done here directly.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Default tolerance for entrywise equality checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Deterministic generator used for every sampling routine in the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(json: MatrixJson) -> Result<Self> {
        if json.entries.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let data = json.entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        ComplexMatrix::new(json.rows, json.cols, data)
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        MatrixJson { rows: m.rows, cols: m.cols, entries: m.data.iter().map(|z| [z.re, z.im]).collect() }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. Rejects empty dimensions and a
    /// mismatched entry count.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::EntryCount { rows, cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |r, c| if r == c { ONE } else { ZERO })
    }

    /// Matrix unit with a single 1 at `(r, c)`.
    pub fn unit(rows: usize, cols: usize, r: usize, c: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m[(r, c)] = ONE;
        m
    }

    pub fn diag(values: &[C64]) -> Self {
        let d = values.len();
        Self::from_fn(d, d, |r, c| if r == c { values[r] } else { ZERO })
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let d = values.len();
        Self::from_fn(d, d, |r, c| if r == c { C64::new(values[r], 0.0) } else { ZERO })
    }

    /// Column vector `|v⟩`.
    pub fn column_vector(v: &[C64]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Self {
        let rows = columns[0].len();
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`. Shapes must agree.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |M - M†|` over entries; infinite for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "mul_vec dimension mismatch");
        (0..self.rows).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `⟨v, M v⟩ / ⟨v, v⟩`, real part.
    pub fn rayleigh_quotient(&self, v: &[C64]) -> f64 {
        let mv = self.mul_vec(v);
        vdot(v, &mv).re / vdot(v, v).re
    }

    pub fn try_matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.matmul_unchecked(other))
    }

    fn matmul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `A X A†`.
    pub fn conjugate_by(&self, x: &Self) -> Self {
        &(self * x) * &self.dagger()
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        self.matmul_unchecked(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

/// `Σ conj(a_i) b_i`.
pub fn vdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vnorm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalized(a: &[C64]) -> Vec<C64> {
    let n = vnorm(a);
    a.iter().map(|z| z / n).collect()
}

/// Hilbert-Schmidt inner product `Tr(A B†)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "hs_inner needs equal square shapes, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(hs_inner_unchecked(a, b))
}

/// `Σ A_ij conj(B_ij)` for any equal shapes.
pub(crate) fn hs_inner_unchecked(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.data.iter().zip(&b.data).map(|(x, y)| x * y.conj()).sum()
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors stored as the matching columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.vectors.column(i)
    }

    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    pub fn max_value(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }

    /// `Σ λ_i v_i v_i†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.vectors.rows();
        let mut out = ComplexMatrix::zeros(d, d);
        for (i, &l) in self.values.iter().enumerate() {
            let v = self.vector(i);
            out = &out + &ComplexMatrix::outer(&v, &v).scale_real(l);
        }
        out
    }
}

/// Eigendecomposition of a self-adjoint matrix. The input must be Hermitian
/// within `tol`; its Hermitian part is what gets diagonalized.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    let deviation = m.hermitian_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation });
    }
    let eig = m.hermitian_part().to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let d = m.rows();
    let vectors = ComplexMatrix::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix, tol: f64) -> Result<f64> {
    Ok(hermitian_eigen(m, tol)?.min_value())
}

/// Succeeds iff `M + shift·I` admits a Cholesky factorization, i.e. the
/// smallest eigenvalue of `M` exceeds `-shift`. Independent of
/// [`hermitian_eigen`].
pub fn is_psd_with_shift(m: &ComplexMatrix, shift: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let a = &m.hermitian_part() + &ComplexMatrix::identity(m.rows()).scale_real(shift);
    cholesky_lower(&a).is_some()
}

/// Lower-triangular `L` with `A = L L†`, or `None` when a pivot is not
/// strictly positive.
pub fn cholesky_lower(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    let d = a.rows();
    let mut l = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        let mut pivot = a[(j, j)].re;
        for p in 0..j {
            pivot -= l[(j, p)].norm_sqr();
        }
        if pivot.is_nan() || pivot <= 0.0 {
            return None;
        }
        let ljj = pivot.sqrt();
        l[(j, j)] = C64::new(ljj, 0.0);
        for i in j + 1..d {
            let mut s = a[(i, j)];
            for p in 0..j {
                s -= l[(i, p)] * l[(j, p)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Some(l)
}

/// Singular values, descending.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.to_nalgebra().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `tol · max(1, σ_max)`.
pub fn numerical_rank(m: &ComplexMatrix, tol: f64) -> usize {
    let s = singular_values(m);
    let cutoff = tol * s.first().copied().unwrap_or(0.0).max(1.0);
    s.iter().filter(|&&x| x > cutoff).count()
}

/// Kronecker product, first factor major:
/// `(A⊗B)[a·rB + b, c·cB + d] = A[a,c] · B[b,d]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (rb, cb) = b.shape();
    ComplexMatrix::from_fn(a.rows * rb, a.cols * cb, |r, c| a[(r / rb, c / cb)] * b[(r % rb, c % cb)])
}

/// Kronecker product of vectors, first factor major.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Standard complex Gaussian entries (real and imaginary parts with variance 1/2).
pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

pub fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    complex_gaussian(dim, 1, rng).data
}

/// Random Hermitian matrix `(G + G†)/2` with Gaussian `G`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    complex_gaussian(dim, dim, rng).hermitian_part()
}

/// Product of Gaussian `rows×rank` and `rank×cols` factors; rank ≤ `rank`
/// by construction.
pub fn random_low_rank<R: Rng + ?Sized>(rows: usize, cols: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let left = complex_gaussian(rows, rank, rng);
    let right = complex_gaussian(rank, cols, rng);
    &left * &right
}

/// Modified Gram-Schmidt (two passes) on the columns. Columns that vanish
/// numerically are dropped.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m.cols());
    for c in 0..m.cols() {
        let mut v = m.column(c);
        let scale = vnorm(&v).max(1e-300);
        for _ in 0..2 {
            for q in &basis {
                let proj = vdot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let n = vnorm(&v);
        if n > 1e-12 * scale {
            basis.push(v.iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_columns(&basis)
}

/// Haar-like random unitary from orthonormalized Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let q = orthonormalize_columns(&complex_gaussian(dim, dim, rng));
        if q.cols() == dim {
            return q;
        }
    }
}

/// Orthogonal projection of the given rank, drawn from the seeded generator.
pub fn random_projection_with<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::RankOutOfRange { rank, dim });
    }
    loop {
        let q = orthonormalize_columns(&complex_gaussian(dim, rank, rng));
        if q.cols() == rank {
            return Ok(&q * &q.dagger());
        }
    }
}

/// Seeded random orthogonal projection `P = P† = P²` with `Tr P = rank`.
pub fn random_projection(dim: usize, rank: usize, seed: u64) -> Result<ComplexMatrix> {
    random_projection_with(dim, rank, &mut seeded_rng(seed))
}

/// Projection onto the span of the eigenvectors of `M M†` with the `rank`
/// largest eigenvalues. When `rk M ≤ rank` this contains the range of `M`,
/// so `P M = M`.
pub fn range_projection(m: &ComplexMatrix, rank: usize) -> Result<ComplexMatrix> {
    let dim = m.rows();
    if rank == 0 || rank > dim {
        return Err(Error::RankOutOfRange { rank, dim });
    }
    let gram = m * &m.dagger();
    let eig = hermitian_eigen(&gram, f64::INFINITY)?;
    let top: Vec<Vec<C64>> = (dim - rank..dim).map(|i| eig.vector(i)).collect();
    let q = ComplexMatrix::from_columns(&top);
    Ok(&q * &q.dagger())
}
