//! Spectral projections and nilpotent parts of a generator, and the decay
//! constants derived from them.
//!
//! Eigenvalues are taken from a complex Schur form. Each cluster of nearby
//! eigenvalues is moved to the leading block by adjacent swaps and decoupled
//! from the rest with a triangular Sylvester solve; in Schur coordinates the
//! projection is then `[[I, −X], [0, 0]]`. This works unchanged for defective
//! generators, where the nilpotent part `N_k = (L − α_k) P_k` is nonzero.

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{solve_triangular_sylvester, ComplexMatrix, Schur};
use crate::norms::{superop_norm, NormKind};
use crate::scalar::{Real, C};
use crate::superop::Superoperator;

/// Relative tolerance for grouping eigenvalues into one cluster.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Relative tolerance on `|Re α|` for an eigenvalue to count as peripheral.
pub const PERIPHERAL_TOL: f64 = 1e-9;
const RESIDUAL_LIMIT: f64 = 1e-6;

/// One eigenvalue cluster `α_k` with its projection and nilpotent part.
#[derive(Clone, Debug)]
pub struct SpectralComponent<T> {
    pub eigenvalue: C<T>,
    /// Algebraic multiplicity, the rank of `projection`.
    pub multiplicity: usize,
    pub projection: Superoperator<T>,
    pub nilpotent: Superoperator<T>,
    /// Smallest `n ≥ 1` with `N_k^n = 0`.
    pub nilpotency: usize,
    pub peripheral: bool,
}

/// `L = Σ_k (α_k P_k + N_k)`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition<T> {
    dim: usize,
    components: Vec<SpectralComponent<T>>,
    residual: T,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[SpectralComponent<T>] {
        &self.components
    }

    /// Largest relative violation among the checked invariants.
    pub fn residual(&self) -> T {
        self.residual
    }

    pub fn peripheral(&self) -> impl Iterator<Item = &SpectralComponent<T>> {
        self.components.iter().filter(|c| c.peripheral)
    }

    pub fn nonperipheral(&self) -> impl Iterator<Item = &SpectralComponent<T>> {
        self.components.iter().filter(|c| !c.peripheral)
    }

    /// `P_φ = Σ_{peripheral} P_k`.
    pub fn peripheral_projection(&self) -> Superoperator<T> {
        let mut p = Superoperator::zero(self.dim);
        for comp in self.peripheral() {
            p.axpy(C::one(), &comp.projection);
        }
        p
    }

    /// `Q_φ = 1 − P_φ`.
    pub fn nonperipheral_projection(&self) -> Superoperator<T> {
        &Superoperator::identity(self.dim) - &self.peripheral_projection()
    }

    /// `Σ_k α_k P_k + N_k`.
    pub fn reconstruct(&self) -> Superoperator<T> {
        let mut l = Superoperator::zero(self.dim);
        for comp in &self.components {
            l.axpy(comp.eigenvalue, &comp.projection);
            l.axpy(C::one(), &comp.nilpotent);
        }
        l
    }

    /// `e^{tL} = Σ_k e^{tα_k} Σ_{n<ρ_k} tⁿ N_kⁿ / n! P_k`.
    pub fn exp(&self, t: T) -> Superoperator<T> {
        self.exp_filtered(t, |_| true)
    }

    /// `e^{tL} P_φ`.
    pub fn exp_peripheral(&self, t: T) -> Superoperator<T> {
        self.exp_filtered(t, |c| c.peripheral)
    }

    /// `e^{tL} Q_φ`.
    pub fn exp_nonperipheral(&self, t: T) -> Superoperator<T> {
        self.exp_filtered(t, |c| !c.peripheral)
    }

    fn exp_filtered(&self, t: T, keep: impl Fn(&SpectralComponent<T>) -> bool) -> Superoperator<T> {
        let mut out = Superoperator::zero(self.dim);
        for comp in self.components.iter().filter(|c| keep(c)) {
            let phase = (comp.eigenvalue * t).exp();
            let mut term = comp.projection.clone();
            let mut power = comp.projection.clone();
            let mut coef = T::one();
            for n in 1..comp.nilpotency {
                power = comp.nilpotent.compose(&power);
                coef = coef * t / T::lit(n as f64);
                term.axpy(C::from(coef), &power);
            }
            out.axpy(phase, &term);
        }
        out
    }
}

/// Spectral decomposition of `L` with default tolerances.
pub fn spectral_decompose<T: Real>(l: &Superoperator<T>) -> Result<SpectralDecomposition<T>> {
    let parts = matrix_spectral_parts(l.matrix())?;
    let d = l.dim();
    let scale = spectral_scale(&parts);
    let periph_tol = T::tol(PERIPHERAL_TOL) * scale;
    let components = parts
        .parts
        .into_iter()
        .map(|p| SpectralComponent {
            eigenvalue: p.eigenvalue,
            multiplicity: p.multiplicity,
            peripheral: p.eigenvalue.re.abs() <= periph_tol,
            projection: Superoperator::from_matrix(d, p.projection).expect("square d² matrix"),
            nilpotent: Superoperator::from_matrix(d, p.nilpotent).expect("square d² matrix"),
            nilpotency: p.nilpotency,
        })
        .collect();
    Ok(SpectralDecomposition {
        dim: d,
        components,
        residual: parts.residual,
    })
}

fn spectral_scale<T: Real>(parts: &MatrixSpectrum<T>) -> T {
    parts
        .parts
        .iter()
        .map(|p| p.eigenvalue.norm())
        .fold(T::one(), T::max)
}

/// Spectral data of a plain square matrix.
#[derive(Clone, Debug)]
pub struct MatrixSpectralPart<T> {
    pub eigenvalue: C<T>,
    pub multiplicity: usize,
    pub projection: ComplexMatrix<T>,
    pub nilpotent: ComplexMatrix<T>,
    pub nilpotency: usize,
}

#[derive(Clone, Debug)]
pub struct MatrixSpectrum<T> {
    pub parts: Vec<MatrixSpectralPart<T>>,
    pub residual: T,
}

/// Groups indices whose values lie within `tol` of each other (single linkage).
fn cluster<T: Real>(values: &[C<T>], tol: T) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut label, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Spectral projections, nilpotents and nilpotency degrees of a square matrix.
pub fn matrix_spectral_parts<T: Real>(a: &ComplexMatrix<T>) -> Result<MatrixSpectrum<T>> {
    let n = a.require_square()?;
    if !a.is_finite() {
        return Err(Error::NonFinite("spectral decomposition"));
    }
    let schur = Schur::new(a)?;
    let eigs = schur.eigenvalues();
    let radius = eigs.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let scale = T::one().max(radius);
    let groups = cluster(&eigs, T::tol(CLUSTER_TOL) * scale);

    let anorm = T::one().max(a.frobenius_norm());
    let mut parts = Vec::with_capacity(groups.len());
    for group in &groups {
        let k = group.len();
        let mut s = schur.clone();
        let mut select = vec![false; n];
        for &i in group {
            select[i] = true;
        }
        s.reorder_front(&select);
        let t11 = block(&s.t, 0..k, 0..k);
        let mut p_schur = ComplexMatrix::zeros(n, n);
        for i in 0..k {
            p_schur[(i, i)] = C::one();
        }
        if k < n {
            let t22 = block(&s.t, k..n, k..n);
            let t12 = block(&s.t, 0..k, k..n);
            let x = solve_triangular_sylvester(&t11, &t22, &(-&t12))?;
            for i in 0..k {
                for j in 0..n - k {
                    p_schur[(i, k + j)] = -x[(i, j)];
                }
            }
        }
        let projection = s.q.matmul(&p_schur).matmul(&s.q.adjoint());
        let alpha = t11.trace() / T::lit(k as f64);
        let mut shifted = a.clone();
        for i in 0..n {
            shifted[(i, i)] -= alpha;
        }
        let nilpotent = shifted.matmul(&projection);
        let pnorm = T::one().max(projection.frobenius_norm());
        let mut nilpotency = k;
        let mut power = nilpotent.clone();
        let mut threshold = T::tol(1e-10) * anorm * pnorm;
        for deg in 1..=k {
            if power.frobenius_norm() <= threshold {
                nilpotency = deg;
                break;
            }
            power = nilpotent.matmul(&power);
            threshold = threshold * anorm;
        }
        parts.push(MatrixSpectralPart {
            eigenvalue: alpha,
            multiplicity: k,
            projection,
            nilpotent,
            nilpotency,
        });
    }
    let residual = invariant_residual(a, &parts);
    if !(residual <= T::lit(RESIDUAL_LIMIT)) {
        return Err(Error::Decomposition {
            residual: residual.as_f64(),
        });
    }
    parts.sort_by(|x, y| {
        (y.eigenvalue.re, x.eigenvalue.im)
            .partial_cmp(&(x.eigenvalue.re, y.eigenvalue.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(MatrixSpectrum { parts, residual })
}

fn block<T: Real>(
    m: &ComplexMatrix<T>,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> ComplexMatrix<T> {
    let r0 = rows.start;
    let c0 = cols.start;
    ComplexMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(r0 + i, c0 + j)])
}

/// Largest relative error in `Σ P_k = I`, `P_k P_l = δ_kl P_k`, `L P_k = P_k L`
/// and `Σ α_k P_k + N_k = L`.
fn invariant_residual<T: Real>(a: &ComplexMatrix<T>, parts: &[MatrixSpectralPart<T>]) -> T {
    let n = a.rows();
    let anorm = T::one().max(a.frobenius_norm());
    let mut sum = ComplexMatrix::zeros(n, n);
    let mut rebuilt = ComplexMatrix::zeros(n, n);
    let mut worst = T::zero();
    for (k, p) in parts.iter().enumerate() {
        sum += &p.projection;
        rebuilt.axpy(p.eigenvalue, &p.projection);
        rebuilt += &p.nilpotent;
        let pn = T::one().max(p.projection.frobenius_norm());
        for (l, q) in parts.iter().enumerate() {
            let prod = p.projection.matmul(&q.projection);
            let err = if k == l {
                (&prod - &p.projection).frobenius_norm()
            } else {
                prod.frobenius_norm()
            };
            worst = worst.max(err / (pn * T::one().max(q.projection.frobenius_norm())));
        }
        let comm = &a.matmul(&p.projection) - &p.projection.matmul(a);
        worst = worst.max(comm.frobenius_norm() / (anorm * pn));
    }
    let id_err = (&sum - &ComplexMatrix::identity(n)).frobenius_norm();
    worst = worst.max(id_err / T::lit(n as f64).sqrt());
    worst.max((&rebuilt - a).frobenius_norm() / anorm)
}

/// Constants describing the peripheral and decaying parts of a generator.
#[derive(Clone, Debug, Serialize)]
pub struct DecayConstants<T> {
    /// Smallest `|Re α_k|` over nonperipheral clusters (`∞` if there are none).
    pub eta: T,
    /// Coefficients of `p(t) = Σ_k (‖P_k‖ + Σ_{1≤n<ρ_k} ‖N_k‖ⁿ tⁿ / n!)`, so that
    /// `‖e^{tL}Q_φ‖ ≤ e^{−ηt} p(t)`.
    pub p_coeffs: Vec<T>,
    /// `R = q(1/η)` with `q(t) = Σ_k (‖P_k‖ + Σ_{1≤n<ρ_k} ‖N_k‖ⁿ tⁿ)`.
    pub r: T,
    /// Smallest distance between distinct peripheral eigenvalues (`∞` if `m < 2`).
    pub delta: T,
    /// Number of distinct peripheral eigenvalues.
    pub m: usize,
    /// Largest peripheral `‖P_k‖`.
    pub p_max: T,
}

impl<T: Real> DecayConstants<T> {
    pub fn p(&self, t: T) -> T {
        self.p_coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * t + c)
    }

    /// `R/η`, taken as zero when there is no decaying part.
    pub fn r_over_eta(&self) -> T {
        if self.eta.is_infinite() {
            T::zero()
        } else {
            self.r / self.eta
        }
    }
}

/// Evaluates [`DecayConstants`] with norms of the requested kind.
pub fn decay_constants<T: Real>(
    sd: &SpectralDecomposition<T>,
    norm: NormKind,
) -> Result<DecayConstants<T>> {
    let mut eta = T::infinity();
    let mut p_coeffs: Vec<T> = Vec::new();
    let mut nil_data: Vec<(T, T, usize)> = Vec::new();
    for comp in sd.nonperipheral() {
        eta = eta.min(comp.eigenvalue.re.abs());
        let pk = superop_norm(&comp.projection, norm)?;
        let nn = if comp.nilpotency > 1 {
            superop_norm(&comp.nilpotent, norm)?
        } else {
            T::zero()
        };
        if p_coeffs.len() < comp.nilpotency {
            p_coeffs.resize(comp.nilpotency, T::zero());
        }
        p_coeffs[0] += pk;
        let mut term = T::one();
        for (n, coef) in p_coeffs.iter_mut().enumerate().take(comp.nilpotency).skip(1) {
            term = term * nn / T::lit(n as f64);
            *coef += term;
        }
        nil_data.push((pk, nn, comp.nilpotency));
    }
    let r = if eta.is_infinite() {
        T::zero()
    } else {
        let x = T::one() / eta;
        nil_data
            .iter()
            .map(|&(pk, nn, rho)| pk + (1..rho).map(|n| (nn * x).powi(n as i32)).sum::<T>())
            .sum()
    };
    let periph: Vec<&SpectralComponent<T>> = sd.peripheral().collect();
    let m = periph.len();
    let mut delta = T::infinity();
    for (i, a) in periph.iter().enumerate() {
        for b in periph.iter().skip(i + 1) {
            delta = delta.min((a.eigenvalue - b.eigenvalue).norm());
        }
    }
    let mut p_max = T::zero();
    for comp in &periph {
        p_max = p_max.max(superop_norm(&comp.projection, norm)?);
    }
    Ok(DecayConstants {
        eta,
        p_coeffs,
        r,
        delta,
        m,
        p_max,
    })
}
