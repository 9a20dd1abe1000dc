//! Cyclic Jacobi eigensolver for Hermitian matrices and the one-sided Jacobi
//! singular value routine built on the same plane rotation.

use num_traits::{One, Zero};

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{c, Real, C};

const MAX_SWEEPS: usize = 60;

/// A 2x2 unitary `[[g00, g01], [g10, g11]]`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Rotation<T> {
    pub g00: C<T>,
    pub g01: C<T>,
    pub g10: C<T>,
    pub g11: C<T>,
}

/// Unitary `G` such that `G† [[a, b], [b̄, d]] G` is diagonal, for real `a`, `d`.
pub(crate) fn jacobi_rotation<T: Real>(a: T, d: T, b: C<T>) -> Rotation<T> {
    let r = b.norm();
    if r.is_zero() {
        return Rotation {
            g00: C::one(),
            g01: C::zero(),
            g10: C::zero(),
            g11: C::one(),
        };
    }
    let phase = (b / r).conj();
    let theta = (d - a) / (r + r);
    let sign = if theta >= T::zero() { T::one() } else { -T::one() };
    let t = sign / (theta.abs() + (theta * theta + T::one()).sqrt());
    let cs = T::one() / (t * t + T::one()).sqrt();
    let sn = t * cs;
    Rotation {
        g00: c(cs, T::zero()),
        g01: c(sn, T::zero()),
        g10: phase * (-sn),
        g11: phase * cs,
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn new(a: &ComplexMatrix<T>) -> Result<Self> {
        let n = a.require_square()?;
        if !a.is_finite() {
            return Err(Error::NonFinite("hermitian eigensolver"));
        }
        let mut m = a.hermitian_part();
        let mut v = ComplexMatrix::identity(n);
        let scale = m.frobenius_norm().max(T::min_positive_value());
        let eps = T::epsilon();
        let mut converged = n < 2;
        for _ in 0..MAX_SWEEPS {
            let off: T = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| m[(i, j)].norm_sqr())
                .sum::<T>()
                .sqrt();
            if off <= T::lit(n as f64) * eps * scale {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let b = m[(p, q)];
                    if b.norm() <= eps * eps * scale {
                        continue;
                    }
                    let g = jacobi_rotation(m[(p, p)].re, m[(q, q)].re, b);
                    rotate_cols(&mut m, p, q, &g);
                    rotate_rows_adjoint(&mut m, p, q, &g);
                    rotate_cols(&mut v, p, q, &g);
                    m[(p, q)] = C::zero();
                    m[(q, p)] = C::zero();
                }
            }
        }
        if !converged {
            return Err(Error::EigenNoConvergence {
                iterations: MAX_SWEEPS,
            });
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
        let values = order.iter().map(|&i| m[(i, i)].re).collect();
        let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
        Ok(Self { values, vectors })
    }

    /// Reassembles `Σ f(λ_i) v_i v_i†`.
    pub fn apply_fn(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let fv: Vec<T> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * fv[k])
                .sum()
        })
    }
}

/// Columns `(p, q) ← (p, q) G`.
pub(crate) fn rotate_cols<T: Real>(m: &mut ComplexMatrix<T>, p: usize, q: usize, g: &Rotation<T>) {
    for i in 0..m.rows() {
        let a = m[(i, p)];
        let b = m[(i, q)];
        m[(i, p)] = a * g.g00 + b * g.g10;
        m[(i, q)] = a * g.g01 + b * g.g11;
    }
}

/// Rows `(p, q) ← G† (p, q)`.
pub(crate) fn rotate_rows_adjoint<T: Real>(
    m: &mut ComplexMatrix<T>,
    p: usize,
    q: usize,
    g: &Rotation<T>,
) {
    for j in 0..m.cols() {
        let a = m[(p, j)];
        let b = m[(q, j)];
        m[(p, j)] = g.g00.conj() * a + g.g10.conj() * b;
        m[(q, j)] = g.g01.conj() * a + g.g11.conj() * b;
    }
}

/// Singular values in descending order, via one-sided Jacobi on the columns.
pub fn singular_values<T: Real>(a: &ComplexMatrix<T>) -> Result<Vec<T>> {
    if !a.is_finite() {
        return Err(Error::NonFinite("singular values"));
    }
    // Work on whichever orientation has fewer columns.
    let mut w = if a.cols() > a.rows() { a.adjoint() } else { a.clone() };
    let n = w.cols();
    let eps = T::epsilon();
    let tol = eps * T::lit(w.rows() as f64).sqrt();
    let floor = {
        let f = eps * w.frobenius_norm();
        f * f
    };
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), C::zero());
                for i in 0..w.rows() {
                    let x = w[(i, p)];
                    let y = w[(i, q)];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                if gamma.norm() <= tol * (alpha * beta).sqrt()
                    || alpha.min(beta) <= floor
                    || gamma.norm() == T::zero()
                {
                    continue;
                }
                rotated = true;
                let g = jacobi_rotation(alpha, beta, gamma);
                rotate_cols(&mut w, p, q, &g);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::EigenNoConvergence {
            iterations: MAX_SWEEPS,
        });
    }
    let mut s: Vec<T> = (0..n)
        .map(|j| (0..w.rows()).map(|i| w[(i, j)].norm_sqr()).sum::<T>().sqrt())
        .collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(s)
}

impl<T: Real> ComplexMatrix<T> {
    /// Sum of singular values.
    pub fn trace_norm(&self) -> Result<T> {
        Ok(singular_values(self)?.into_iter().sum())
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> Result<T> {
        Ok(singular_values(self)?.first().copied().unwrap_or_else(T::zero))
    }
}
