//! Complex Schur form via Hessenberg reduction and Wilkinson-shifted QR, with
//! adjacent-swap reordering and triangular Sylvester solves.

use num_traits::{One, Zero};

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// `A = Q T Q†` with `Q` unitary and `T` upper triangular.
#[derive(Clone, Debug)]
pub struct Schur<T> {
    pub q: ComplexMatrix<T>,
    pub t: ComplexMatrix<T>,
}

/// 2x2 unitary `U = [[ā, b̄], [-b, a]] / ρ` mapping `(a, b)ᵀ` onto `(ρ, 0)ᵀ`.
#[derive(Clone, Copy)]
struct Givens<T> {
    u00: C<T>,
    u01: C<T>,
    u10: C<T>,
    u11: C<T>,
}

impl<T: Real> Givens<T> {
    fn zeroing(a: C<T>, b: C<T>) -> Self {
        let rho = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if rho.is_zero() {
            return Self {
                u00: C::one(),
                u01: C::zero(),
                u10: C::zero(),
                u11: C::one(),
            };
        }
        Self {
            u00: a.conj() / rho,
            u01: b.conj() / rho,
            u10: -b / rho,
            u11: a / rho,
        }
    }

    /// Rows `(k, k+1) ← U (rows)`, restricted to columns `cols`.
    fn left(&self, m: &mut ComplexMatrix<T>, k: usize, cols: std::ops::Range<usize>) {
        for j in cols {
            let x = m[(k, j)];
            let y = m[(k + 1, j)];
            m[(k, j)] = self.u00 * x + self.u01 * y;
            m[(k + 1, j)] = self.u10 * x + self.u11 * y;
        }
    }

    /// Columns `(k, k+1) ← (cols) U†`, restricted to rows `rows`.
    fn right_adjoint(&self, m: &mut ComplexMatrix<T>, k: usize, rows: std::ops::Range<usize>) {
        for i in rows {
            let x = m[(i, k)];
            let y = m[(i, k + 1)];
            m[(i, k)] = x * self.u00.conj() + y * self.u01.conj();
            m[(i, k + 1)] = x * self.u10.conj() + y * self.u11.conj();
        }
    }
}

impl<T: Real> Schur<T> {
    pub fn new(a: &ComplexMatrix<T>) -> Result<Self> {
        let n = a.require_square()?;
        if !a.is_finite() {
            return Err(Error::NonFinite("schur decomposition"));
        }
        let (mut h, mut q) = hessenberg(a);
        if n < 2 {
            return Ok(Self { q, t: h });
        }
        let eps = T::epsilon();
        let anorm = h.frobenius_norm().max(T::min_positive_value());
        let max_iter = 60 * n;
        let mut hi = n - 1;
        let mut iter = 0usize;
        let mut total = 0usize;
        while hi > 0 {
            let mut l = hi;
            while l > 0 {
                let s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
                let s = if s.is_zero() { anorm } else { s };
                if h[(l, l - 1)].norm() <= eps * s {
                    h[(l, l - 1)] = C::zero();
                    break;
                }
                l -= 1;
            }
            if l == hi {
                hi -= 1;
                iter = 0;
                continue;
            }
            iter += 1;
            total += 1;
            if total > max_iter * n {
                return Err(Error::EigenNoConvergence { iterations: total });
            }
            let mu = if iter % 11 == 0 {
                // exceptional shift to break cycles
                h[(hi, hi)] + C::from(h[(hi, hi - 1)].norm() * T::lit(0.75))
            } else {
                wilkinson_shift(
                    h[(hi - 1, hi - 1)],
                    h[(hi - 1, hi)],
                    h[(hi, hi - 1)],
                    h[(hi, hi)],
                )
            };
            for k in l..=hi {
                h[(k, k)] -= mu;
            }
            let mut rots = Vec::with_capacity(hi - l);
            for k in l..hi {
                let g = Givens::zeroing(h[(k, k)], h[(k + 1, k)]);
                g.left(&mut h, k, k..n);
                h[(k + 1, k)] = C::zero();
                rots.push(g);
            }
            for (off, g) in rots.iter().enumerate() {
                let k = l + off;
                g.right_adjoint(&mut h, k, 0..(k + 2).min(hi + 1));
                g.right_adjoint(&mut q, k, 0..n);
            }
            for k in l..=hi {
                h[(k, k)] += mu;
            }
        }
        for i in 0..n {
            for j in 0..i {
                h[(i, j)] = C::zero();
            }
        }
        Ok(Self { q, t: h })
    }

    pub fn eigenvalues(&self) -> Vec<C<T>> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }

    /// Swaps diagonal entries `k` and `k+1` of `T`, updating `Q`.
    pub fn swap(&mut self, k: usize) {
        let n = self.t.rows();
        let t1 = self.t[(k, k)];
        let t2 = self.t[(k + 1, k + 1)];
        let x = self.t[(k, k + 1)];
        let g = Givens::zeroing(x, t2 - t1);
        g.left(&mut self.t, k, k..n);
        g.right_adjoint(&mut self.t, k, 0..k + 2);
        g.right_adjoint(&mut self.q, k, 0..n);
        self.t[(k + 1, k)] = C::zero();
        self.t[(k, k)] = t2;
        self.t[(k + 1, k + 1)] = t1;
    }

    /// Reorders so that the positions flagged by `select` come first, keeping
    /// relative order within each group.
    pub fn reorder_front(&mut self, select: &[bool]) {
        let n = self.t.rows();
        let mut flags = select.to_vec();
        let mut target = 0;
        for i in 0..n {
            if flags[i] {
                let mut j = i;
                while j > target {
                    self.swap(j - 1);
                    flags.swap(j - 1, j);
                    j -= 1;
                }
                target += 1;
            }
        }
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.q.matmul(&self.t).matmul(&self.q.adjoint())
    }
}

fn wilkinson_shift<T: Real>(a: C<T>, b: C<T>, c: C<T>, d: C<T>) -> C<T> {
    let half = T::lit(0.5);
    let m = (a + d) * half;
    let disc = ((a - d) * half * ((a - d) * half) + b * c).sqrt();
    let l1 = m + disc;
    let l2 = m - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Householder reduction to upper Hessenberg form, `A = Q H Q†`.
fn hessenberg<T: Real>(a: &ComplexMatrix<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if xnorm.is_zero() {
            continue;
        }
        let phase = if x[0].norm().is_zero() {
            C::one()
        } else {
            x[0] / x[0].norm()
        };
        let mut v = x.clone();
        v[0] += phase * xnorm;
        let vnorm2 = v.iter().map(|z| z.norm_sqr()).sum::<T>();
        if vnorm2.is_zero() {
            continue;
        }
        let beta = T::lit(2.0) / vnorm2;
        // H ← (I - β v v†) H
        for j in 0..n {
            let s: C<T> = (0..v.len()).map(|r| v[r].conj() * h[(k + 1 + r, j)]).sum();
            let s = s * beta;
            for r in 0..v.len() {
                h[(k + 1 + r, j)] -= v[r] * s;
            }
        }
        // H ← H (I - β v v†), Q ← Q (I - β v v†)
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let s: C<T> = (0..v.len()).map(|r| m[(i, k + 1 + r)] * v[r]).sum();
                let s = s * beta;
                for r in 0..v.len() {
                    m[(i, k + 1 + r)] -= s * v[r].conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C::zero();
        }
    }
    (h, q)
}

/// Solves `A X − X B = C` for upper-triangular `A` (k x k) and `B` (m x m)
/// with disjoint diagonals.
pub fn solve_triangular_sylvester<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    c: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    let k = a.rows();
    let m = b.rows();
    let mut x = ComplexMatrix::zeros(k, m);
    for j in 0..m {
        for i in (0..k).rev() {
            let mut rhs = c[(i, j)];
            for l in i + 1..k {
                rhs -= a[(i, l)] * x[(l, j)];
            }
            for l in 0..j {
                rhs += x[(i, l)] * b[(l, j)];
            }
            let denom = a[(i, i)] - b[(j, j)];
            if denom.norm().is_zero() {
                return Err(Error::IllConditioned {
                    condition: f64::INFINITY,
                });
            }
            x[(i, j)] = rhs / denom;
        }
    }
    Ok(x)
}
