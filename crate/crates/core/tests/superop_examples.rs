mod common;

use common::*;
use openrwa::superop::{
    block_pinching, devectorize, gkls_dissipator, hamiltonian_superop, matrix_unit, unitary_conjugation_superop,
    vectorize, GklsSpec,
};
use openrwa::{Matrix, Superop};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn vectorize_stacks_columns() {
    let m = Matrix::from_rows(&[vec![cx(1.0, 0.0), cx(2.0, 0.0)], vec![cx(3.0, 0.0), cx(4.0, 0.0)]]).unwrap();
    let v: Vec<f64> = vectorize(&m).iter().map(|z| z.re).collect();
    assert_eq!(v, vec![1.0, 3.0, 2.0, 4.0]);
    let id: Vec<f64> = vectorize(&Matrix::identity(2)).iter().map(|z| z.re).collect();
    assert_eq!(id, vec![1.0, 0.0, 0.0, 1.0]);
}

#[test]
fn devectorize_inverts_vectorize() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = rand_matrix(&mut rng, 3);
    assert_eq!(devectorize(&vectorize(&a), 3).unwrap(), a);
    assert!(devectorize(&vectorize(&a), 2).is_err());
}

#[test]
fn half_z_rotation_spectrum() {
    let l0 = qubit_l0();
    let found = oracle_eigenvalues(l0.matrix());
    let expected = [cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 1.0), cx(0.0, -1.0)];
    assert!(spectrum_distance(&found, &expected) < 1e-12);
}

#[test]
fn trivial_hamiltonians_give_zero() {
    for h in [Matrix::zeros(3, 3), Matrix::identity(3)] {
        let l = hamiltonian_superop(&h).unwrap();
        assert_eq!(l.matrix().max_abs(), 0.0);
    }
}

#[test]
fn dephasing_images() {
    let gamma = 0.7;
    let [x, _, z] = paulis();
    let d = dephasing(gamma);
    assert!(d.apply(&x).unwrap().approx_eq(&x.scale_re(-gamma), 1e-14));
    assert!(d.apply(&z).unwrap().max_abs() < 1e-14);
}

#[test]
fn driven_qubit_generator_at_zero() {
    // Lab-frame drive −ig cos(ωt)[X, ·] evaluated at t = 0.
    let (g, gamma, omega) = (1.0, 1.0, 5.0);
    let [x, _, z] = paulis();
    let h = &z.scale_re(omega / 2.0) + &x.scale_re(g);
    let built = gkls_dissipator(&GklsSpec::new(h).with_jump(gamma / 2.0, z)).unwrap();
    let expected = &(&qubit_l0().scale_re(omega) + &ad(&x.scale_re(g))) + &dephasing(gamma);
    assert!(op_distance(&built, &expected) < 1e-14);
}

#[test]
fn gkls_dual_fixes_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for d in [2, 3, 4] {
        let l = rand_gkls(&mut rng, d, 3);
        let img = l.dual().apply(&Matrix::identity(d)).unwrap();
        assert!(img.max_abs() < 1e-12, "d = {d}: {}", img.max_abs());
    }
}

#[test]
fn identity_conjugation_is_identity() {
    let u = unitary_conjugation_superop(&Matrix::identity(3)).unwrap();
    assert_eq!(u, Superop::identity(3));
}

#[test]
fn conjugated_commutator_is_commutator_of_conjugate() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in [2, 3, 5] {
        let u = haar_unitary(&mut rng, d);
        assert!(u.unitarity_residual() < 1e-12);
        let a = rand_hermitian(&mut rng, d);
        let conj = unitary_conjugation_superop(&u).unwrap();
        let inv = unitary_conjugation_superop(&u.adjoint()).unwrap();
        let lhs = conj.compose(&hamiltonian_superop(&a).unwrap()).compose(&inv);
        let rhs = hamiltonian_superop(&u.matmul(&a).matmul(&u.adjoint())).unwrap();
        assert!(op_distance(&lhs, &rhs) < 1e-10);
    }
}

#[test]
fn rotating_frame_commutator() {
    let [x, y, z] = paulis();
    let omega = 3.0;
    for t in [0.0, 0.4, 1.7] {
        let theta = omega * t;
        let u = Matrix::diagonal(&[cx(0.0, -theta / 2.0).exp(), cx(0.0, theta / 2.0).exp()]);
        let check = openrwa::linalg::expm(&z.scale(cx(0.0, -theta / 2.0))).unwrap();
        assert!(u.approx_eq(&check, 1e-13));
        let conj = unitary_conjugation_superop(&u).unwrap();
        let inv = unitary_conjugation_superop(&u.adjoint()).unwrap();
        let lhs = conj.compose(&ad(&x)).compose(&inv);
        let rotated = &x.scale_re(theta.cos()) + &y.scale_re(theta.sin());
        assert!(op_distance(&lhs, &ad(&rotated)) < 1e-13);
    }
}

#[test]
fn diagonal_pinching_on_paulis() {
    let [x, _, z] = paulis();
    let (p, q) = block_pinching(&[matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)]).unwrap();
    assert!(p.apply(&x).unwrap().max_abs() < 1e-15);
    assert!(p.apply(&z).unwrap().approx_eq(&z, 1e-15));
    assert!(q.apply(&x).unwrap().approx_eq(&x, 1e-15));
}

fn two_block_family() -> Vec<Matrix> {
    let p1 = &matrix_unit(3, 0, 0) + &matrix_unit(3, 1, 1);
    vec![p1, matrix_unit(3, 2, 2)]
}

fn mask(m: &Matrix, diagonal_blocks: bool) -> Matrix {
    Matrix::from_fn(3, 3, |i, j| {
        let same = (i < 2) == (j < 2);
        if same == diagonal_blocks {
            m[(i, j)]
        } else {
            cx(0.0, 0.0)
        }
    })
}

#[test]
fn block_diagonal_commutator_commutes_with_pinching() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (p, q) = block_pinching(&two_block_family()).unwrap();
    for _ in 0..5 {
        let a = mask(&rand_hermitian(&mut rng, 3), true);
        let ad_a = ad(&a);
        assert!(op_distance(&ad_a.compose(&p), &p.compose(&ad_a)) < 1e-10);
        assert!(op_distance(&ad_a.compose(&q), &q.compose(&ad_a)) < 1e-10);
    }
}

#[test]
fn off_diagonal_commutator_is_killed_by_pinching() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (p, q) = block_pinching(&two_block_family()).unwrap();
    let zero = Superop::zero(3);
    for _ in 0..5 {
        let b = mask(&rand_hermitian(&mut rng, 3), false);
        let ad_b = ad(&b);
        assert!(op_distance(&p.compose(&ad_b).compose(&p), &zero) < 1e-12);
        assert!(op_distance(&q.compose(&ad_b).compose(&q), &zero) < 1e-12);
    }
}

#[test]
fn superop_f32_alias_agrees_with_f64() {
    let [x, _, z] = openrwa::superop::pauli::<f32>();
    let d = gkls_dissipator(&GklsSpec::new(z.scale_re(0.5)).with_jump(0.25, z)).unwrap();
    let img = d.apply(&x).unwrap();
    let [x64, _, z64] = paulis();
    let d64 = gkls_dissipator(&GklsSpec::new(z64.scale_re(0.5)).with_jump(0.25, z64)).unwrap();
    let img64 = d64.apply(&x64).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert!((img[(i, j)].re as f64 - img64[(i, j)].re).abs() < 1e-6);
            assert!((img[(i, j)].im as f64 - img64[(i, j)].im).abs() < 1e-6);
        }
    }
}
