//! Superoperators as matrices acting on column-stacked operators.
//!
//! `vec(A)` stacks the columns of `A`, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.
//! Left multiplication by `A` is `I ⊗ A`, right multiplication by `B` is
//! `Bᵀ ⊗ I`.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{c, cr, Real, C};

/// Column-stacking vectorisation: entry `(i, j)` lands at index `i + j d`.
pub fn vectorize<T: Real>(a: &ComplexMatrix<T>) -> Vec<C<T>> {
    let (n, m) = (a.rows(), a.cols());
    let mut v = Vec::with_capacity(n * m);
    for j in 0..m {
        for i in 0..n {
            v.push(a[(i, j)]);
        }
    }
    v
}

/// Inverse of [`vectorize`] for a `d x d` operator.
pub fn devectorize<T: Real>(v: &[C<T>], d: usize) -> Result<ComplexMatrix<T>> {
    if v.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: v.len(),
        });
    }
    Ok(ComplexMatrix::from_fn(d, d, |i, j| v[i + j * d]))
}

/// Linear map on `d x d` operators, stored as a `d² x d²` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator<T> {
    dim: usize,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> Superoperator<T> {
    pub fn from_matrix(dim: usize, matrix: ComplexMatrix<T>) -> Result<Self> {
        if matrix.rows() != dim * dim || matrix.cols() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: matrix.rows().max(matrix.cols()),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite("superoperator"));
        }
        Ok(Self { dim, matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::zeros(dim * dim, dim * dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::identity(dim * dim),
        }
    }

    /// Builds the map from its action on the matrix units `E_ij`.
    pub fn from_action(dim: usize, f: impl Fn(&ComplexMatrix<T>) -> ComplexMatrix<T>) -> Self {
        let n = dim * dim;
        let mut m = ComplexMatrix::zeros(n, n);
        for j in 0..dim {
            for i in 0..dim {
                let mut e = ComplexMatrix::zeros(dim, dim);
                e[(i, j)] = C::one();
                let col = vectorize(&f(&e));
                for (r, z) in col.into_iter().enumerate() {
                    m[(r, i + j * dim)] = z;
                }
            }
        }
        Self { dim, matrix: m }
    }

    /// `ρ ↦ A ρ B`.
    pub fn sandwich(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<Self> {
        let d = a.require_square()?;
        if b.rows() != d || b.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: b.rows(),
            });
        }
        Ok(Self {
            dim: d,
            matrix: b.transpose().kron(a),
        })
    }

    /// `ρ ↦ A ρ`.
    pub fn left(a: &ComplexMatrix<T>) -> Result<Self> {
        let d = a.require_square()?;
        Self::sandwich(a, &ComplexMatrix::identity(d))
    }

    /// `ρ ↦ ρ B`.
    pub fn right(b: &ComplexMatrix<T>) -> Result<Self> {
        let d = b.require_square()?;
        Self::sandwich(&ComplexMatrix::identity(d), b)
    }

    /// `ρ ↦ [A, ρ]`.
    pub fn commutator(a: &ComplexMatrix<T>) -> Result<Self> {
        Ok(&Self::left(a)? - &Self::right(a)?)
    }

    /// `ρ ↦ {A, ρ}`.
    pub fn anticommutator(a: &ComplexMatrix<T>) -> Result<Self> {
        Ok(&Self::left(a)? + &Self::right(a)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn apply(&self, rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.rows(),
            });
        }
        devectorize(&self.matrix.matvec(&vectorize(rho)), self.dim)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "superoperator dimension mismatch");
        Self {
            dim: self.dim,
            matrix: self.matrix.matmul(&other.matrix),
        }
    }

    /// Hilbert-Schmidt dual map `Φ*`, defined by `tr(A† Φ(B)) = tr(Φ*(A)† B)`.
    pub fn dual(&self) -> Self {
        Self {
            dim: self.dim,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self {
            dim: self.dim,
            matrix: self.matrix.scale(s),
        }
    }

    pub fn scale_re(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            matrix: self.matrix.scale_re(s),
        }
    }

    pub fn axpy(&mut self, s: C<T>, other: &Self) {
        self.matrix.axpy(s, &other.matrix);
    }

    /// Largest singular value of the `d² x d²` matrix (the norm induced by the
    /// Hilbert-Schmidt norm on operators).
    pub fn spectral_norm(&self) -> Result<T> {
        self.matrix.spectral_norm()
    }

    /// `max_{ij} ‖Φ(E_ji) − Φ(E_ij)†‖_F`; zero exactly when `Φ` preserves Hermiticity.
    pub fn hermiticity_preservation_residual(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                let a = self.column_op(i, j);
                let b = self.column_op(j, i);
                worst = worst.max((&a - &b.adjoint()).frobenius_norm());
            }
        }
        worst
    }

    pub fn is_hermiticity_preserving(&self) -> bool {
        self.hermiticity_preservation_residual()
            <= T::tol(1e-10) * T::one().max(self.matrix.frobenius_norm())
    }

    /// `Φ(E_ij)`.
    pub fn column_op(&self, i: usize, j: usize) -> ComplexMatrix<T> {
        let d = self.dim;
        let col = i + j * d;
        ComplexMatrix::from_fn(d, d, |r, s| self.matrix[(r + s * d, col)])
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.dim == other.dim && self.matrix.approx_eq(&other.matrix, tol)
    }
}

impl<T: Real> Add for &Superoperator<T> {
    type Output = Superoperator<T>;
    fn add(self, rhs: Self) -> Superoperator<T> {
        assert_eq!(self.dim, rhs.dim, "superoperator dimension mismatch");
        Superoperator {
            dim: self.dim,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl<T: Real> Sub for &Superoperator<T> {
    type Output = Superoperator<T>;
    fn sub(self, rhs: Self) -> Superoperator<T> {
        assert_eq!(self.dim, rhs.dim, "superoperator dimension mismatch");
        Superoperator {
            dim: self.dim,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl<T: Real> Mul for &Superoperator<T> {
    type Output = Superoperator<T>;
    fn mul(self, rhs: Self) -> Superoperator<T> {
        self.compose(rhs)
    }
}

impl<T: Real> Neg for &Superoperator<T> {
    type Output = Superoperator<T>;
    fn neg(self) -> Superoperator<T> {
        self.scale_re(-T::one())
    }
}

/// `ρ ↦ −i[H, ρ]`. Rejects non-Hermitian `H`.
pub fn hamiltonian_superop<T: Real>(h: &ComplexMatrix<T>) -> Result<Superoperator<T>> {
    h.require_hermitian()?;
    Ok(Superoperator::commutator(h)?.scale(c(T::zero(), -T::one())))
}

/// `ρ ↦ U ρ U†`. Rejects non-unitary `U`.
pub fn unitary_conjugation_superop<T: Real>(u: &ComplexMatrix<T>) -> Result<Superoperator<T>> {
    u.require_unitary()?;
    Superoperator::sandwich(u, &u.adjoint())
}

/// Hamiltonian plus jump operators with non-negative rates.
#[derive(Clone, Debug)]
pub struct GklsSpec<T> {
    pub hamiltonian: ComplexMatrix<T>,
    pub jumps: Vec<(T, ComplexMatrix<T>)>,
}

impl<T: Real> GklsSpec<T> {
    pub fn new(hamiltonian: ComplexMatrix<T>) -> Self {
        Self {
            hamiltonian,
            jumps: Vec::new(),
        }
    }

    pub fn with_jump(mut self, rate: T, op: ComplexMatrix<T>) -> Self {
        self.jumps.push((rate, op));
        self
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }
}

/// `ρ ↦ −i[H, ρ] − ½ Σ γ_j ({V_j†V_j, ρ} − 2 V_j ρ V_j†)`.
pub fn gkls_dissipator<T: Real>(spec: &GklsSpec<T>) -> Result<Superoperator<T>> {
    let d = spec.hamiltonian.require_square()?;
    let mut out = hamiltonian_superop(&spec.hamiltonian)?;
    for (rate, v) in &spec.jumps {
        if v.rows() != d || v.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.rows(),
            });
        }
        if !(*rate >= T::zero()) || !rate.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "jump rate must be finite and non-negative, got {rate}"
            )));
        }
        let vd = v.adjoint();
        let vdv = vd.matmul(v);
        let half = cr(-*rate * T::lit(0.5));
        out.axpy(half, &Superoperator::anticommutator(&vdv)?);
        out.axpy(cr(*rate), &Superoperator::sandwich(v, &vd)?);
    }
    Ok(out)
}

/// Block pinching `P(ρ) = Σ_k P_k ρ P_k` for orthogonal Hermitian projections
/// summing to the identity, together with `Q = 1 − P`.
pub fn block_pinching<T: Real>(
    projections: &[ComplexMatrix<T>],
) -> Result<(Superoperator<T>, Superoperator<T>)> {
    let first = projections
        .first()
        .ok_or_else(|| Error::InvalidProjections("empty family".into()))?;
    let d = first.require_square()?;
    let tol = T::tol(1e-10) * T::lit(d as f64).max(T::one());
    let mut sum = ComplexMatrix::zeros(d, d);
    for (k, p) in projections.iter().enumerate() {
        if p.rows() != d || p.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.rows(),
            });
        }
        if p.hermiticity_residual() > tol {
            return Err(Error::InvalidProjections(format!("P_{k} is not Hermitian")));
        }
        if (&p.matmul(p) - p).frobenius_norm() > tol {
            return Err(Error::InvalidProjections(format!("P_{k} is not idempotent")));
        }
        for (l, q) in projections.iter().enumerate().skip(k + 1) {
            if p.matmul(q).frobenius_norm() > tol {
                return Err(Error::InvalidProjections(format!(
                    "P_{k} and P_{l} are not orthogonal"
                )));
            }
        }
        sum += p;
    }
    if (&sum - &ComplexMatrix::identity(d)).frobenius_norm() > tol {
        return Err(Error::InvalidProjections(
            "projections do not sum to the identity".into(),
        ));
    }
    let mut pin = Superoperator::zero(d);
    for p in projections {
        pin.axpy(C::one(), &Superoperator::sandwich(p, p)?);
    }
    let q = &Superoperator::identity(d) - &pin;
    Ok((pin, q))
}

/// Orthonormal operator basis (Hilbert-Schmidt) with `F_0 = I/√d`.
///
/// For `d = 2` this is `{I, X, Y, Z}/√2`; for larger `d` the remaining
/// elements are the generalised Gell-Mann matrices scaled by `1/√2`, ordered
/// as symmetric and antisymmetric pairs `(j, k)` followed by the diagonal ones.
pub fn operator_basis<T: Real>(d: usize) -> Vec<ComplexMatrix<T>> {
    let mut basis = Vec::with_capacity(d * d);
    let inv_sqrt_d = T::one() / T::lit(d as f64).sqrt();
    basis.push(ComplexMatrix::identity(d).scale_re(inv_sqrt_d));
    let h = T::one() / T::lit(2.0).sqrt();
    for j in 0..d {
        for k in j + 1..d {
            let mut s = ComplexMatrix::zeros(d, d);
            s[(j, k)] = cr(h);
            s[(k, j)] = cr(h);
            basis.push(s);
            let mut a = ComplexMatrix::zeros(d, d);
            a[(j, k)] = c(T::zero(), -h);
            a[(k, j)] = c(T::zero(), h);
            basis.push(a);
        }
    }
    for l in 1..d {
        let lf = T::lit(l as f64);
        let norm = T::one() / (lf * (lf + T::one())).sqrt();
        let mut m = ComplexMatrix::zeros(d, d);
        for i in 0..l {
            m[(i, i)] = cr(norm);
        }
        m[(l, l)] = cr(-lf * norm);
        basis.push(m);
    }
    basis
}

/// The Pauli matrices `(X, Y, Z)`.
pub fn pauli<T: Real>() -> [ComplexMatrix<T>; 3] {
    let z0 = C::zero();
    let one = C::one();
    let i = c(T::zero(), T::one());
    [
        ComplexMatrix::from_rows(&[vec![z0, one], vec![one, z0]]).unwrap(),
        ComplexMatrix::from_rows(&[vec![z0, -i], vec![i, z0]]).unwrap(),
        ComplexMatrix::from_rows(&[vec![one, z0], vec![z0, -one]]).unwrap(),
    ]
}

/// Matrix unit `|i⟩⟨j|` in dimension `d`.
pub fn matrix_unit<T: Real>(d: usize, i: usize, j: usize) -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(i, j)] = C::one();
    m
}
