//! Identities between maps, Choi matrices and cones, checked against values
//! computed independently of the library's own formulas.

use approx::assert_abs_diff_eq;
use mapcone::cones::{member, ConeExpr, MemberConfig, Status};
use mapcone::family::{self, PhiLambdaSpec};
use mapcone::linalg::{complex_gaussian, hs_inner, seeded_rng, ComplexMatrix, C64};
use mapcone::superop::{compose, MapDims, SuperOperator};

fn d(m: usize, n: usize) -> MapDims {
    MapDims::new(m, n).unwrap()
}

/// Choi matrix built entrywise from `apply` on matrix units.
fn choi_oracle(phi: &SuperOperator) -> ComplexMatrix {
    let MapDims { m, n } = phi.dims();
    let mut out = ComplexMatrix::zeros(m * n, m * n);
    let mut data = out.entries().to_vec();
    for k in 0..m {
        for l in 0..m {
            let block = phi.apply(&ComplexMatrix::unit(m, m, k, l)).unwrap();
            for i in 0..n {
                for j in 0..n {
                    data[(k * n + i) * m * n + l * n + j] = block.entries()[i * n + j];
                }
            }
        }
    }
    out = ComplexMatrix::new(m * n, m * n, data).unwrap();
    out
}

#[test]
fn identity_choi_is_unnormalized_maximally_entangled_projector() {
    let c = SuperOperator::identity(3).into_choi();
    for r in 0..9 {
        for s in 0..9 {
            let expected = if r % 4 == 0 && s % 4 == 0 { 1.0 } else { 0.0 };
            assert_eq!(c.entries()[r * 9 + s], C64::new(expected, 0.0));
        }
    }
}

#[test]
fn transposition_spectrum_is_swap_spectrum() {
    // Swap on C^m ⊗ C^m: −1 on the antisymmetric subspace, +1 on the symmetric one.
    for m in 2..=4 {
        let eig = SuperOperator::transposition(m).choi_eigen(1e-12).unwrap();
        let negatives = eig.values.iter().filter(|&&x| x < 0.0).count();
        assert_eq!(negatives, m * (m - 1) / 2);
        for x in &eig.values {
            assert_abs_diff_eq!(x.abs(), 1.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn trace_map_choi_is_identity() {
    let c = SuperOperator::trace_map(d(2, 3)).into_choi();
    assert!(c.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-15);
}

#[test]
fn choi_matches_entrywise_oracle() {
    let mut rng = seeded_rng(1);
    for (m, n) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let phi = SuperOperator::random(d(m, n), &mut rng);
        assert!(phi.choi().max_abs_diff(&choi_oracle(&phi)) < 1e-14);
        let v = complex_gaussian(n, m, &mut rng);
        let ad = SuperOperator::conjugation(&v);
        assert!(ad.choi().max_abs_diff(&choi_oracle(&ad)) < 1e-13);
    }
}

#[test]
fn apply_of_conjugation_is_matrix_product() {
    let mut rng = seeded_rng(2);
    let v = complex_gaussian(3, 2, &mut rng);
    let x = complex_gaussian(2, 2, &mut rng);
    let direct = &(&v * &x) * &v.dagger();
    let via_map = SuperOperator::conjugation(&v).apply(&x).unwrap();
    assert!(direct.max_abs_diff(&via_map) < 1e-13);
}

#[test]
fn adjoint_is_hilbert_schmidt_adjoint() {
    let mut rng = seeded_rng(3);
    let phi = SuperOperator::random(d(2, 3), &mut rng);
    let x = complex_gaussian(2, 2, &mut rng);
    let y = complex_gaussian(3, 3, &mut rng);
    let lhs = hs_inner(&phi.apply(&x).unwrap(), &y).unwrap();
    let rhs = hs_inner(&x, &phi.adjoint().apply(&y).unwrap()).unwrap();
    assert!((lhs - rhs).norm() < 1e-12);
}

#[test]
fn composition_applies_right_map_first() {
    let mut rng = seeded_rng(4);
    let phi = SuperOperator::random(d(2, 3), &mut rng);
    let psi = SuperOperator::random(d(3, 4), &mut rng);
    let x = complex_gaussian(2, 2, &mut rng);
    let lhs = compose(&psi, &phi).unwrap().apply(&x).unwrap();
    let rhs = psi.apply(&phi.apply(&x).unwrap()).unwrap();
    assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    assert!(compose(&phi, &psi).is_err());
}

#[test]
fn family_thresholds_follow_singular_values() {
    // VV† = diag(4, 1, 1/4): partial sums 4, 5, 21/4.
    let v = ComplexMatrix::diag_real(&[2.0, 1.0, 0.5]);
    let expected = [0.25, 0.2, 4.0 / 21.0];
    for (k, e) in (1..=3).zip(expected) {
        assert_abs_diff_eq!(family::k_positivity_threshold(&v, k).unwrap(), e, epsilon = 1e-12);
    }
    assert_abs_diff_eq!(family::cp_threshold(&v).unwrap(), 4.0 / 21.0, epsilon = 1e-12);
}

#[test]
fn reduction_map_is_positive_but_not_two_positive() {
    // Tr(X)·I − X on C^3.
    let r = family::build(&PhiLambdaSpec::new(ComplexMatrix::identity(3), 1.0).unwrap());
    let cfg = MemberConfig::default();
    let p = member(&r, &ConeExpr::positive(), &cfg).unwrap();
    assert_eq!(p.status, Status::Member);
    assert!(p.reverify(&r));
    let p2 = member(&r, &ConeExpr::k_positive(2), &cfg).unwrap();
    assert_eq!(p2.status, Status::NotMember);
    assert!(p2.reverify(&r));
}

#[test]
fn transposition_on_qubits_is_positive_not_cp() {
    let t = SuperOperator::transposition(2);
    let cfg = MemberConfig::default();
    assert_ne!(member(&t, &ConeExpr::positive(), &cfg).unwrap().status, Status::NotMember);
    // P_2 on 2×2 is CP.
    assert_eq!(member(&t, &ConeExpr::k_positive(2), &cfg).unwrap().status, Status::NotMember);
    assert_eq!(member(&t, &ConeExpr::transposed(ConeExpr::cp()), &cfg).unwrap().status, Status::Member);
}

#[test]
fn twirled_conjugation_is_conjugation_by_entrywise_conjugate() {
    let mut rng = seeded_rng(5);
    let v = complex_gaussian(3, 3, &mut rng);
    let twirled = SuperOperator::conjugation(&v).transpose_twirl();
    assert!(twirled.choi().max_abs_diff(SuperOperator::conjugation(&v.conj()).choi()) < 1e-13);
}
