#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use openrwa::superop::{gkls_dissipator, pauli, GklsSpec};
use openrwa::{Matrix, Superop};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn paulis() -> [Matrix; 3] {
    pauli::<f64>()
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    cx(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn rand_matrix(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    Matrix::from_fn(d, d, |_, _| gaussian(rng))
}

pub fn rand_hermitian(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    rand_matrix(rng, d).hermitian_part()
}

/// Haar-distributed unitary from the QR factorisation of a Ginibre matrix,
/// with the phases of `R`'s diagonal folded back into `Q`.
pub fn haar_unitary(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let g = to_na(&rand_matrix(rng, d));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut out = q.clone();
    for j in 0..d {
        let phase = r[(j, j)] / r[(j, j)].norm();
        for i in 0..d {
            out[(i, j)] = q[(i, j)] * phase;
        }
    }
    from_na(&out)
}

pub fn rand_gkls(rng: &mut ChaCha8Rng, d: usize, jumps: usize) -> Superop {
    let mut spec = GklsSpec::new(rand_hermitian(rng, d));
    for _ in 0..jumps {
        let rate = rng.gen_range(0.1..1.0);
        spec = spec.with_jump(rate, rand_matrix(rng, d));
    }
    gkls_dissipator(&spec).unwrap()
}

pub fn to_na(m: &Matrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

pub fn from_na(m: &DMatrix<Complex64>) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Singular values from nalgebra's SVD, descending.
pub fn oracle_singular_values(m: &Matrix) -> Vec<f64> {
    let mut s: Vec<f64> = to_na(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Eigenvalues from nalgebra's complex Schur form.
pub fn oracle_eigenvalues(m: &Matrix) -> Vec<Complex64> {
    to_na(m)
        .schur()
        .eigenvalues()
        .expect("complex Schur form has eigenvalues")
        .iter()
        .copied()
        .collect()
}

/// Greedy match of two eigenvalue lists; returns the largest pairing error.
pub fn spectrum_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut pool: Vec<Complex64> = b.to_vec();
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, dist) = pool
            .iter()
            .enumerate()
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        worst = worst.max(dist);
        pool.swap_remove(k);
    }
    worst
}

pub fn op_distance(a: &Superop, b: &Superop) -> f64 {
    (a - b).matrix().max_abs()
}

/// Example 5.1 pieces: `L₀ = −(i/2)[Z,·]` and the dephasing dissipator with rate `γ`.
pub fn qubit_l0() -> Superop {
    let [_, _, z] = paulis();
    openrwa::superop::hamiltonian_superop(&z.scale_re(0.5)).unwrap()
}

pub fn dephasing(gamma: f64) -> Superop {
    let [_, _, z] = paulis();
    gkls_dissipator(&GklsSpec::new(Matrix::zeros(2, 2)).with_jump(gamma / 2.0, z)).unwrap()
}

/// `ρ ↦ −i[A, ρ]` for any square `A`.
pub fn ad(a: &Matrix) -> Superop {
    Superop::commutator(a).unwrap().scale(cx(0.0, -1.0))
}
