mod common;

use common::*;
use num_complex::Complex64;
use openrwa::norms::{choi_matrix, diamond_numeric, NormKind};
use openrwa::propagate::expm;
use openrwa::redfield::{
    bohr_decompose, build_redfield, build_secular, gamma_positivity, secular_error_bound,
    verify_secular_equals_pinching, GammaEntry, SystemBathSpec,
};
use openrwa::superop::{gkls_dissipator, hamiltonian_superop, matrix_unit, GklsSpec};
use openrwa::{Matrix, Superop};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn qubit_spec(omega0: f64, a: Complex64, b: Complex64) -> SystemBathSpec<f64> {
    let [x, _, z] = paulis();
    let entry = |omega, value| GammaEntry { alpha: 0, beta: 0, omega, value };
    SystemBathSpec::new(
        z.scale_re(omega0 / 2.0),
        vec![x],
        vec![entry(omega0, a), entry(-omega0, b), entry(0.0, cx(0.3, 0.0))],
    )
    .unwrap()
}

/// Random spec whose Γ table has a positive semidefinite Hermitian part when `positive` is set.
fn random_spec(rng: &mut ChaCha8Rng, d: usize, couplings: usize, positive: bool) -> SystemBathSpec<f64> {
    let h = rand_hermitian(rng, d);
    let s: Vec<Matrix> = (0..couplings).map(|_| rand_hermitian(rng, d)).collect();
    let bohr = bohr_decompose(&h, 1e-8).unwrap();
    let mut gamma = Vec::new();
    for &omega in &bohr.frequencies {
        let table = if positive {
            let m = rand_matrix(rng, couplings);
            &m.matmul(&m.adjoint()).scale_re(0.25) + &rand_hermitian(rng, couplings).scale(cx(0.0, 0.3))
        } else {
            rand_matrix(rng, couplings).scale_re(0.5)
        };
        for alpha in 0..couplings {
            for beta in 0..couplings {
                gamma.push(GammaEntry { alpha, beta, omega, value: table[(alpha, beta)] });
            }
        }
    }
    SystemBathSpec::new(h, s, gamma).unwrap()
}

#[test]
fn bohr_components_sum_and_conjugate() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for d in [2, 3, 4] {
        let h = rand_hermitian(&mut rng, d);
        let s = rand_hermitian(&mut rng, d);
        let bohr = bohr_decompose(&h, 1e-8).unwrap();
        let mut total = Matrix::zeros(d, d);
        for j in 0..bohr.frequencies.len() {
            total += &bohr.component(&s, j);
            let neg = bohr.component(&s, bohr.negative(j));
            assert!(neg.approx_eq(&bohr.component(&s, j).adjoint(), 1e-12));
            assert!((bohr.frequencies[j] + bohr.frequencies[bohr.negative(j)]).abs() < 1e-12);
        }
        assert!(total.approx_eq(&s, 1e-12));
    }
}

#[test]
fn bohr_frequencies_of_half_z() {
    let [_, _, z] = paulis();
    let bohr = bohr_decompose(&z.scale_re(0.5), 1e-8).unwrap();
    assert_eq!(bohr.frequencies.len(), 3);
    for (w, e) in bohr.frequencies.iter().zip([-1.0, 0.0, 1.0]) {
        assert!((w - e).abs() < 1e-14);
    }
}

#[test]
fn qubit_redfield_matches_kronecker_form() {
    let (a, b) = (cx(0.5, 0.1), cx(0.2, -0.05));
    let spec = qubit_spec(1.0, a, b);
    let [x, _, _] = paulis();
    // Z|0⟩ = |0⟩, so X(+1) = |0⟩⟨1| and X(−1) = |1⟩⟨0|.
    let e = &matrix_unit(2, 0, 1).scale(a) + &matrix_unit(2, 1, 0).scale(b);
    let ed = e.adjoint();
    let id = Matrix::identity(2);
    // vec(AρB) = (Bᵀ ⊗ A) vec(ρ)
    let mut m = ed.transpose().kron(&x);
    m -= &id.kron(&x.matmul(&e));
    m -= &ed.matmul(&x).transpose().kron(&id);
    m += &x.transpose().kron(&e);
    let built = build_redfield(&spec).unwrap();
    assert!(built.matrix().approx_eq(&m, 1e-14));
    let trace_row = built.dual().apply(&id).unwrap();
    assert!(trace_row.max_abs() < 1e-14);
}

#[test]
fn qubit_secular_generator_has_gkls_rates() {
    let (a, b) = (cx(0.5, 0.1), cx(0.2, -0.05));
    let spec = qubit_spec(1.0, a, b);
    let sec = build_secular(&spec).unwrap();
    let lamb = &matrix_unit(2, 1, 1).scale_re(a.im) + &matrix_unit(2, 0, 0).scale_re(b.im);
    assert!(sec.lamb_shift.approx_eq(&lamb, 1e-14));
    let expected = gkls_dissipator(
        &GklsSpec::new(lamb)
            .with_jump(2.0 * a.re, matrix_unit(2, 0, 1))
            .with_jump(2.0 * b.re, matrix_unit(2, 1, 0)),
    )
    .unwrap();
    assert!(op_distance(&sec.dissipator, &expected) < 1e-14);
}

#[test]
fn gamma_matrices_are_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let spec = random_spec(&mut rng, 3, 2, false);
    for (_, g) in build_secular(&spec).unwrap().gamma_matrices {
        assert!(g.hermiticity_residual() < 1e-14);
    }
}

#[test]
fn secular_equals_pinching() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..3 {
        let spec = random_spec(&mut rng, 3, 2, false);
        let residual = verify_secular_equals_pinching(&spec).unwrap();
        assert!(residual < 1e-10, "{residual}");
    }
    let qubit = verify_secular_equals_pinching(&qubit_spec(1.0, cx(0.5, 0.1), cx(0.2, -0.05))).unwrap();
    assert!(qubit < 1e-12);
}

#[test]
fn zero_bath_bound_is_zero() {
    let spec = qubit_spec(1.0, cx(0.0, 0.0), cx(0.0, 0.0));
    let spec = SystemBathSpec::new(
        spec.hamiltonian.clone(),
        spec.couplings.clone(),
        spec.gamma.iter().map(|g| GammaEntry { value: cx(0.0, 0.0), ..g.clone() }).collect(),
    )
    .unwrap();
    assert_eq!(verify_secular_equals_pinching(&spec).unwrap(), 0.0);
    assert_eq!(secular_error_bound(&spec, 10.0, 5.0, NormKind::Diamond).unwrap().value, 0.0);
}

#[test]
fn secular_bound_scales_with_inverse_kappa() {
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    let spec = random_spec(&mut rng, 3, 1, true);
    let a = secular_error_bound(&spec, 50.0, 2.0, NormKind::Spectral).unwrap().value;
    let b = secular_error_bound(&spec, 100.0, 2.0, NormKind::Spectral).unwrap().value;
    assert!(a > 0.0 && (b / a - 0.5).abs() < 1e-14);
}

#[test]
fn secular_bound_dominates_qubit_distance() {
    let spec = qubit_spec(1.0, cx(0.5, 0.1), cx(0.2, -0.05));
    let (kappa, horizon) = (100.0, 5.0);
    let l0 = hamiltonian_superop(&spec.hamiltonian).unwrap().scale_re(kappa);
    let redfield = &l0 + &build_redfield(&spec).unwrap();
    let secular = &l0 + &build_secular(&spec).unwrap().dissipator;
    let bound = secular_error_bound(&spec, kappa, horizon, NormKind::Diamond).unwrap().value;
    let mut worst: f64 = 0.0;
    for k in 1..=100 {
        let t = horizon * k as f64 / 100.0;
        let diff = &expm(&redfield, t).unwrap() - &expm(&secular, t).unwrap();
        worst = worst.max(diamond_numeric(&diff, 4, k).unwrap());
    }
    assert!(worst > 0.0 && bound >= worst, "bound {bound} < distance {worst}");
}

#[test]
fn positive_rates_give_completely_positive_semigroup() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for d in [2, 3] {
        let spec = random_spec(&mut rng, d, 2, true);
        assert!(gamma_positivity(&spec).unwrap().iter().all(|g| g.positive));
        let sec = build_secular(&spec).unwrap();
        let l = &hamiltonian_superop(&spec.hamiltonian).unwrap() + &sec.dissipator;
        for t in [0.3, 2.0] {
            let floor = choi_matrix(&expm(&l, t).unwrap()).eigenvalues().unwrap()[0];
            assert!(floor > -1e-10, "d = {d}, t = {t}: {floor}");
        }
        let dual = l.dual().apply(&Matrix::identity(d)).unwrap();
        assert!(dual.max_abs() < 1e-12);
    }
}

#[test]
fn indefinite_rates_are_flagged() {
    let spec = qubit_spec(1.0, cx(-0.5, 0.0), cx(0.2, 0.0));
    let report = gamma_positivity(&spec).unwrap();
    let plus = report.iter().find(|g| (g.omega - 1.0).abs() < 1e-12).unwrap();
    assert!(!plus.positive && plus.min_eigenvalue < 0.0);
}

#[test]
fn bundled_spec_file_parses() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../cli/data/qubit_redfield.json")).unwrap();
    let spec = SystemBathSpec::<f64>::from_json(&text).unwrap();
    let reference = qubit_spec(1.0, cx(0.5, 0.1), cx(0.2, -0.05));
    assert!(spec.hamiltonian.approx_eq(&reference.hamiltonian, 0.0));
    let a = build_redfield(&spec).unwrap();
    let b: Superop = build_redfield(&reference).unwrap();
    assert!(op_distance(&a, &b) == 0.0);
}
