//! Choi matrices and diamond-norm evaluation.
//!
//! The Choi coefficient matrix `c` of a map `Φ` is taken in the orthonormal
//! operator basis `F_μ` of [`operator_basis`]: `Φ(A) = Σ c_μν F_μ A F_ν†`.
//! It equals `d` times the normalised Choi state `C(Φ)` written in the basis
//! `|F_μ) = (F_μ ⊗ 1)|Ω⟩`, so `‖C(Φ)‖₁ = ‖c‖₁ / d`.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianEigen};
use crate::scalar::{c, cr, Real, C};
use crate::superop::{operator_basis, Superoperator};

/// Default number of random restarts for [`diamond_numeric`].
pub const DEFAULT_RESTARTS: usize = 32;
const MAX_ASCENT_STEPS: usize = 400;

/// Operator norm used for superoperators in bound evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    /// Diamond norm: exact for qubit subunital maps, otherwise a numeric estimate.
    #[default]
    Diamond,
    /// Largest singular value of the superoperator matrix.
    Spectral,
}

/// Coefficient matrix `c` of a map in the basis `F_μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix<T> {
    dim: usize,
    coefficients: ComplexMatrix<T>,
}

impl<T: Real> ChoiMatrix<T> {
    pub fn from_coefficients(dim: usize, coefficients: ComplexMatrix<T>) -> Result<Self> {
        if coefficients.rows() != dim * dim || coefficients.cols() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: coefficients.rows(),
            });
        }
        Ok(Self { dim, coefficients })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficients(&self) -> &ComplexMatrix<T> {
        &self.coefficients
    }

    /// `‖C(Φ)‖₁ = ‖c‖₁ / d`.
    pub fn trace_norm(&self) -> Result<T> {
        Ok(self.coefficients.trace_norm()? / T::lit(self.dim as f64))
    }

    /// Eigenvalues of the Hermitian part of `c`, ascending. Non-negative exactly
    /// when the map is completely positive (for Hermiticity-preserving maps).
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        Ok(HermitianEigen::new(&self.coefficients)?.values)
    }

    /// Rebuilds `Φ = Σ c_μν F_μ (·) F_ν†`.
    pub fn to_superop(&self) -> Superoperator<T> {
        let d = self.dim;
        let basis = operator_basis::<T>(d);
        let mut m = ComplexMatrix::zeros(d * d, d * d);
        for (mu, f_mu) in basis.iter().enumerate() {
            for (nu, f_nu) in basis.iter().enumerate() {
                let coef = self.coefficients[(mu, nu)];
                if coef.is_zero() {
                    continue;
                }
                m.axpy(coef, &f_nu.conj().kron(f_mu));
            }
        }
        Superoperator::from_matrix(d, m).expect("dimensions are consistent")
    }
}

/// Coefficient matrix of `Φ`, by projecting its matrix onto the orthonormal
/// family `F̄_ν ⊗ F_μ`.
pub fn choi_matrix<T: Real>(phi: &Superoperator<T>) -> ChoiMatrix<T> {
    let d = phi.dim();
    let basis = operator_basis::<T>(d);
    let n = d * d;
    let mut coeffs = ComplexMatrix::zeros(n, n);
    for (mu, f_mu) in basis.iter().enumerate() {
        for (nu, f_nu) in basis.iter().enumerate() {
            coeffs[(mu, nu)] = f_nu.conj().kron(f_mu).hs_inner(phi.matrix());
        }
    }
    ChoiMatrix {
        dim: d,
        coefficients: coeffs,
    }
}

/// Unnormalised Choi operator `J = Σ_ik Φ(E_ik) ⊗ E_ik` on system ⊗ ancilla.
pub fn choi_operator<T: Real>(phi: &Superoperator<T>) -> ComplexMatrix<T> {
    let d = phi.dim();
    let mut j = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for k in 0..d {
            let block = phi.column_op(i, k);
            for a in 0..d {
                for b in 0..d {
                    j[(a * d + i, b * d + k)] = block[(a, b)];
                }
            }
        }
    }
    j
}

/// `(Φ ⊗ 1)(X)` for an operator `X` on system ⊗ ancilla (system index major).
pub fn apply_extended<T: Real>(phi: &Superoperator<T>, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let d = phi.dim();
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    let mut block = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        for l in 0..d {
            for i in 0..d {
                for k in 0..d {
                    block[(i, k)] = x[(i * d + j, k * d + l)];
                }
            }
            let y = phi.apply(&block).expect("block has system dimension");
            for i in 0..d {
                for k in 0..d {
                    out[(i * d + j, k * d + l)] = y[(i, k)];
                }
            }
        }
    }
    out
}

/// `(‖C(Φ)‖₁, d‖C(Φ)‖₁)`, which bracket `‖Φ‖◇`.
pub fn diamond_sandwich<T: Real>(phi: &Superoperator<T>) -> Result<(T, T)> {
    let lower = choi_matrix(phi).trace_norm()?;
    Ok((lower, lower * T::lit(phi.dim() as f64)))
}

/// Scalar `α` with `Φ(I) = αI`, if there is one.
fn identity_image_scalar<T: Real>(phi: &Superoperator<T>, tol: T) -> Option<C<T>> {
    let d = phi.dim();
    let img = phi.apply(&ComplexMatrix::identity(d)).ok()?;
    let alpha = img.trace() / T::lit(d as f64);
    let resid = (&img - &ComplexMatrix::identity(d).scale(alpha)).frobenius_norm();
    (resid <= tol).then_some(alpha)
}

/// Whether `Φ` is a qubit map that preserves Hermiticity with
/// `Φ(I) = Φ*(I) = αI`.
pub fn is_qubit_subunital<T: Real>(phi: &Superoperator<T>) -> bool {
    if phi.dim() != 2 || !phi.is_hermiticity_preserving() {
        return false;
    }
    let tol = T::tol(1e-8);
    match (
        identity_image_scalar(phi, tol),
        identity_image_scalar(&phi.dual(), tol),
    ) {
        (Some(a), Some(b)) => (a - b).norm() <= tol,
        _ => false,
    }
}

/// Exact diamond norm `‖C(Φ)‖₁` of a qubit subunital map.
pub fn diamond_qubit_subunital<T: Real>(phi: &Superoperator<T>) -> Result<T> {
    if phi.dim() != 2 {
        return Err(Error::Precondition(format!(
            "exact formula needs a qubit map, got dimension {}",
            phi.dim()
        )));
    }
    if !phi.is_hermiticity_preserving() {
        return Err(Error::Precondition("map does not preserve Hermiticity".into()));
    }
    if !is_qubit_subunital(phi) {
        return Err(Error::Precondition(
            "map does not satisfy Φ(I) = Φ*(I) = αI".into(),
        ));
    }
    choi_matrix(phi).trace_norm()
}

fn random_unit_vector<T: Real>(n: usize, rng: &mut ChaCha8Rng) -> Vec<C<T>> {
    let mut v: Vec<C<T>> = (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            c(T::lit(re), T::lit(im))
        })
        .collect();
    normalize(&mut v);
    v
}

fn normalize<T: Real>(v: &mut [C<T>]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    if n > T::zero() {
        for z in v.iter_mut() {
            *z = *z / n;
        }
    }
}

fn maximally_entangled<T: Real>(d: usize) -> Vec<C<T>> {
    let s = T::one() / T::lit(d as f64).sqrt();
    let mut v = vec![C::zero(); d * d];
    for i in 0..d {
        v[i * d + i] = cr(s);
    }
    v
}

fn outer<T: Real>(a: &[C<T>], b: &[C<T>]) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
}

/// Ascent on `ψ ↦ ‖(Φ⊗1)(|ψ⟩⟨ψ|)‖₁` for a Hermiticity-preserving map,
/// alternating between the sign of the output and the top eigenvector of the
/// dual image of that sign.
fn ascend_hermitian<T: Real>(phi: &Superoperator<T>, dual: &Superoperator<T>, mut psi: Vec<C<T>>) -> Result<T> {
    let mut best = T::zero();
    for _ in 0..MAX_ASCENT_STEPS {
        let m = apply_extended(phi, &outer(&psi, &psi));
        let eig = HermitianEigen::new(&m)?;
        let value: T = eig.values.iter().map(|x| x.abs()).sum();
        let improved = value - best;
        best = best.max(value);
        if improved <= T::tol(1e-14) * T::one().max(value) {
            break;
        }
        let sign = eig.apply_fn(|x| if x >= T::zero() { T::one() } else { -T::one() });
        let g = apply_extended(dual, &sign);
        let ge = HermitianEigen::new(&g)?;
        let top = ge.values.len() - 1;
        psi = ge.vectors.col(top);
    }
    Ok(best)
}

/// Ascent on `(ψ, φ) ↦ ‖(Φ⊗1)(|ψ⟩⟨φ|)‖₁` for an arbitrary map, alternating
/// between the polar factor of the output and the top singular pair of the
/// dual image of that factor.
fn ascend_general<T: Real>(phi: &Superoperator<T>, dual: &Superoperator<T>, mut psi: Vec<C<T>>, mut chi: Vec<C<T>>) -> Result<T> {
    let mut best = T::zero();
    for _ in 0..MAX_ASCENT_STEPS {
        let m = apply_extended(phi, &outer(&psi, &chi));
        let (value, polar) = trace_norm_and_polar(&m)?;
        let improved = value - best;
        best = best.max(value);
        if improved <= T::tol(1e-14) * T::one().max(value) {
            break;
        }
        let g = apply_extended(dual, &polar);
        let gram = g.adjoint().matmul(&g);
        let ge = HermitianEigen::new(&gram)?;
        let top = ge.values.len() - 1;
        chi = ge.vectors.col(top);
        psi = g.matvec(&chi);
        normalize(&mut psi);
    }
    Ok(best)
}

/// Trace norm and unitary polar factor `U` with `M = U |M|`.
fn trace_norm_and_polar<T: Real>(m: &ComplexMatrix<T>) -> Result<(T, ComplexMatrix<T>)> {
    let gram = m.adjoint().matmul(m);
    let eig = HermitianEigen::new(&gram)?;
    let n = m.rows();
    let floor = T::epsilon() * T::lit(n as f64) * eig.values.last().copied().unwrap_or_else(T::zero);
    // U = M V Σ^{-1} V† on the support; complete arbitrarily on the kernel.
    let mut polar = ComplexMatrix::zeros(n, n);
    let mut norm = T::zero();
    for k in 0..n {
        let lam = eig.values[k].max(T::zero());
        let v = eig.vectors.col(k);
        let sigma = lam.sqrt();
        if lam <= floor || sigma.is_zero() {
            continue;
        }
        norm += sigma;
        let mv = m.matvec(&v);
        for i in 0..n {
            for j in 0..n {
                polar[(i, j)] += mv[i] * v[j].conj() / sigma;
            }
        }
    }
    Ok((norm, polar))
}

/// Seeded multi-start estimate of `‖Φ‖◇` for a Hermiticity-preserving map.
///
/// The first start is the maximally entangled state, so the estimate never
/// falls below `‖C(Φ)‖₁`. The result is a lower bound on the true value.
pub fn diamond_numeric<T: Real>(phi: &Superoperator<T>, restarts: usize, seed: u64) -> Result<T> {
    if !phi.is_hermiticity_preserving() {
        return Err(Error::Precondition("map does not preserve Hermiticity".into()));
    }
    let d = phi.dim();
    let dual = phi.dual();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = ascend_hermitian(phi, &dual, maximally_entangled(d))?;
    for _ in 1..restarts.max(1) {
        let start = random_unit_vector(d * d, &mut rng);
        best = best.max(ascend_hermitian(phi, &dual, start)?);
    }
    Ok(best)
}

/// Seeded multi-start estimate of `‖Φ‖◇` for any linear map, maximising over
/// rank-one inputs `|ψ⟩⟨φ|`.
pub fn diamond_numeric_general<T: Real>(phi: &Superoperator<T>, restarts: usize, seed: u64) -> Result<T> {
    let d = phi.dim();
    let dual = phi.dual();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = maximally_entangled(d);
    let mut best = ascend_general(phi, &dual, omega.clone(), omega)?;
    for _ in 1..restarts.max(1) {
        let psi = random_unit_vector(d * d, &mut rng);
        let chi = random_unit_vector(d * d, &mut rng);
        best = best.max(ascend_general(phi, &dual, psi, chi)?);
    }
    Ok(best)
}

/// Diamond norm with the cheapest applicable method: the exact qubit formula,
/// else the Hermitian ascent, else the general ascent.
pub fn diamond_norm<T: Real>(phi: &Superoperator<T>) -> Result<T> {
    if is_qubit_subunital(phi) {
        return choi_matrix(phi).trace_norm();
    }
    if phi.is_hermiticity_preserving() {
        diamond_numeric(phi, DEFAULT_RESTARTS, 0)
    } else {
        diamond_numeric_general(phi, DEFAULT_RESTARTS, 0)
    }
}

/// Norm of a superoperator of the requested kind.
pub fn superop_norm<T: Real>(phi: &Superoperator<T>, kind: NormKind) -> Result<T> {
    if phi.matrix().max_abs().is_zero() {
        return Ok(T::zero());
    }
    match kind {
        NormKind::Diamond => diamond_norm(phi),
        NormKind::Spectral => phi.spectral_norm(),
    }
}

/// Hermitian unit-trace check helper for states passed through channels.
pub fn is_density_matrix<T: Real>(rho: &ComplexMatrix<T>, tol: T) -> bool {
    if !rho.is_square() || rho.hermiticity_residual() > tol {
        return false;
    }
    if (rho.trace() - C::one()).norm() > tol {
        return false;
    }
    HermitianEigen::new(rho)
        .map(|e| e.values.iter().all(|&x| x >= -tol))
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superop::{hamiltonian_superop, pauli, unitary_conjugation_superop};

    #[test]
    fn identity_channel_has_unit_norms() {
        let id = Superoperator::<f64>::identity(3);
        let (lo, hi) = diamond_sandwich(&id).unwrap();
        assert!((lo - 1.0).abs() < 1e-12);
        assert!((hi - 3.0).abs() < 1e-12);
        let num = diamond_numeric(&id, 4, 1).unwrap();
        assert!((num - 1.0).abs() < 1e-10);
    }

    #[test]
    fn choi_round_trip() {
        let [x, y, _] = pauli::<f64>();
        let phi = Superoperator::sandwich(&x, &y.scale(c(0.3, 1.0))).unwrap();
        let back = choi_matrix(&phi).to_superop();
        assert!(back.approx_eq(&phi, 1e-14));
    }

    #[test]
    fn coefficients_match_choi_operator() {
        // c_μν = ⟨F_μ| J |F_ν⟩ with |F_μ) = (F_μ ⊗ 1)|Ω⟩
        let [x, y, z] = pauli::<f64>();
        let phi = &Superoperator::sandwich(&x, &z).unwrap() + &Superoperator::left(&y).unwrap();
        let coeffs = choi_matrix(&phi);
        let j = choi_operator(&phi);
        let basis = operator_basis::<f64>(2);
        let vecs: Vec<Vec<C<f64>>> = basis
            .iter()
            .map(|f| {
                let mut v = vec![cr(0.0); 4];
                for i in 0..2 {
                    for a in 0..2 {
                        v[a * 2 + i] = f[(a, i)];
                    }
                }
                v
            })
            .collect();
        for mu in 0..4 {
            for nu in 0..4 {
                let jv = j.matvec(&vecs[nu]);
                let val: C<f64> = vecs[mu].iter().zip(&jv).map(|(a, b)| a.conj() * b).sum();
                assert!((val - coeffs.coefficients()[(mu, nu)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn commutator_with_pauli_has_diamond_norm_two() {
        let [x, _, _] = pauli::<f64>();
        let ad = hamiltonian_superop(&x).unwrap();
        assert!(is_qubit_subunital(&ad));
        let exact = diamond_qubit_subunital(&ad).unwrap();
        assert!((exact - 2.0).abs() < 1e-12);
        let num = diamond_numeric(&ad, 8, 3).unwrap();
        assert!((num - 2.0).abs() < 1e-9);
    }

    #[test]
    fn transpose_is_not_completely_positive() {
        let t = Superoperator::<f64>::from_action(2, |a| a.transpose());
        let eigs = choi_matrix(&t).eigenvalues().unwrap();
        assert!(eigs[0] < -0.5);
        // transpose has diamond norm d
        let num = diamond_numeric(&t, 8, 0).unwrap();
        assert!((num - 2.0).abs() < 1e-9);
    }

    #[test]
    fn general_ascent_on_non_hermitian_map() {
        // ρ ↦ |0⟩⟨0| ρ |1⟩⟨1| has diamond norm one
        let p0 = crate::superop::matrix_unit::<f64>(2, 0, 0);
        let p1 = crate::superop::matrix_unit::<f64>(2, 1, 1);
        let phi = Superoperator::sandwich(&p0, &p1).unwrap();
        assert!(!phi.is_hermiticity_preserving());
        assert!(diamond_numeric(&phi, 4, 0).is_err());
        let num = diamond_numeric_general(&phi, 8, 0).unwrap();
        assert!((num - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unitary_channel_norm() {
        let u = ComplexMatrix::<f64>::from_rows(&[
            vec![c(0.6, 0.0), c(0.0, 0.8)],
            vec![c(0.0, 0.8), c(0.6, 0.0)],
        ])
        .unwrap();
        let phi = unitary_conjugation_superop(&u).unwrap();
        assert!((diamond_norm(&phi).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(superop_norm(&Superoperator::<f64>::zero(2), NormKind::Diamond).unwrap(), 0.0);
    }
}
