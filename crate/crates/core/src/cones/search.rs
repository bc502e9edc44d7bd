//! Minimization of `⟨u, C u⟩` over unit vectors `u = vec(U)` with `rk U ≤ k`.
//!
//! With `U = A B†` and one factor held orthonormal, the objective is a
//! Rayleigh quotient in the other factor, so each half-step is an exact
//! minimum eigenvector problem and the value never increases.

use rand::Rng;

use crate::linalg::{complex_gaussian, hermitian_eigen, orthonormalize_columns, ComplexMatrix, C64, ZERO};
use crate::superop::{vectorize, MapDims};

#[derive(Clone, Debug)]
pub struct LowRankMinimum {
    /// Normalized value `⟨u, C u⟩` with `‖u‖ = 1`.
    pub value: f64,
    /// The `n×m` operator `U` with `‖U‖₂ = 1` and `rk U ≤ k`.
    pub operator: ComplexMatrix,
    pub iterations: usize,
}

/// `k` orthonormal columns spanning the columns of `m`, padded with random
/// directions when `m` is rank deficient.
fn orthonormal_frame<R: Rng + ?Sized>(m: &ComplexMatrix, k: usize, rng: &mut R) -> ComplexMatrix {
    let rows = m.rows();
    let pad = complex_gaussian(rows, k, rng);
    let mut cols: Vec<Vec<C64>> = (0..m.cols()).map(|c| m.column(c)).collect();
    cols.extend((0..k).map(|c| pad.column(c)));
    let q = orthonormalize_columns(&ComplexMatrix::from_columns(&cols));
    ComplexMatrix::from_columns(&(0..k).map(|c| q.column(c)).collect::<Vec<_>>())
}

/// Reduced matrix `M† C M` for `u = M a`, where `a` stacks the free factor.
/// `left` selects which factor is free: `A` (`n×k`) with `B` fixed, or
/// `conj(B)` (`m×k`) with `A` fixed.
fn reduced(c: &ComplexMatrix, fixed: &ComplexMatrix, dims: MapDims, free_left: bool) -> ComplexMatrix {
    let (m, n) = (dims.m, dims.n);
    let k = fixed.cols();
    let free_dim = if free_left { n } else { m };
    // Columns of M: for free index (r, p), the vector vec(e_p ⊗ fixed_r).
    let mut cols = Vec::with_capacity(free_dim * k);
    for r in 0..k {
        for p in 0..free_dim {
            let mut u = vec![ZERO; m * n];
            if free_left {
                // u[j·n + i] = δ_{i p} conj(B[j, r])
                for j in 0..m {
                    u[j * n + p] = fixed[(j, r)].conj();
                }
            } else {
                // u[j·n + i] = δ_{j p} A[i, r]
                for i in 0..n {
                    u[p * n + i] = fixed[(i, r)];
                }
            }
            cols.push(u);
        }
    }
    let mmat = ComplexMatrix::from_columns(&cols);
    let cm = c * &mmat;
    (&mmat.dagger() * &cm).hermitian_part()
}

fn unstack(a: &[C64], rows: usize, k: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, k, |i, r| a[r * rows + i])
}

/// One run of alternating minimization from a random start.
pub fn minimize_low_rank<R: Rng + ?Sized>(
    c: &ComplexMatrix,
    dims: MapDims,
    k: usize,
    max_iters: usize,
    rng: &mut R,
) -> LowRankMinimum {
    let (m, n) = (dims.m, dims.n);
    let k = k.clamp(1, dims.min());
    let mut b = orthonormal_frame(&complex_gaussian(m, k, rng), k, rng);
    let mut a = complex_gaussian(n, k, rng);
    let mut value = f64::INFINITY;
    let mut iterations = 0;
    for it in 0..max_iters.max(1) {
        iterations = it + 1;
        let eig = hermitian_eigen(&reduced(c, &b, dims, true), f64::INFINITY).expect("hermitian by construction");
        a = unstack(&eig.vector(0), n, k);
        let q = orthonormal_frame(&a, k, rng);
        let eig = hermitian_eigen(&reduced(c, &q, dims, false), f64::INFINITY).expect("hermitian by construction");
        let bconj = unstack(&eig.vector(0), m, k);
        let new_value = eig.min_value();
        a = q;
        b = bconj.conj();
        let done = value - new_value <= 1e-13 * (1.0 + new_value.abs());
        value = new_value;
        if done {
            break;
        }
        b = orthonormal_frame(&b, k, rng);
        // Re-express with orthonormal B for the next half-step; the product
        // A B† changes by an invertible factor only.
    }
    let mut op = &a * &b.dagger();
    let u = vectorize(&op);
    let norm = crate::linalg::vnorm(&u);
    if norm > 0.0 {
        op = op.scale_real(1.0 / norm);
    }
    let value = c.rayleigh_quotient(&vectorize(&op));
    LowRankMinimum { value, operator: op, iterations }
}

/// Best of `restarts` runs; ties keep the earliest run.
pub fn multistart<R: Rng + ?Sized>(
    c: &ComplexMatrix,
    dims: MapDims,
    k: usize,
    restarts: usize,
    max_iters: usize,
    rng: &mut R,
) -> Option<LowRankMinimum> {
    let mut best: Option<LowRankMinimum> = None;
    for _ in 0..restarts {
        let run = minimize_low_rank(c, dims, k, max_iters, rng);
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    best
}
