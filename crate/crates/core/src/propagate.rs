//! Time-ordered propagators of time-dependent generators.
//!
//! Everything here is driven by one fixed-step RK4 integrator over a tuple of
//! matrices. Each interval is integrated with `n` and `2n` steps and the step
//! count doubled until the two agree to the requested relative tolerance.

use std::sync::Arc;


use crate::error::{Error, Result};
use crate::linalg::{expm as expm_matrix, ComplexMatrix};
use crate::scalar::{Real, C};
use crate::superop::Superoperator;

/// Default relative tolerance for propagators.
pub const DEFAULT_RTOL: f64 = 1e-9;
/// Steps per fastest period are at least this many.
pub const STEPS_PER_PERIOD: f64 = 20.0;
/// Largest condition number accepted when inverting a propagator.
pub const MAX_CONDITION: f64 = 1e12;
const MAX_STEPS: usize = 1 << 24;

type GenFn<T> = dyn Fn(T) -> Superoperator<T> + Send + Sync;

/// `t ↦ L(t)`, a superoperator-valued function of time.
#[derive(Clone)]
pub struct TimeDependentGenerator<T> {
    dim: usize,
    eval: Arc<GenFn<T>>,
    frequency: Option<T>,
    constant: bool,
}

impl<T: Real> std::fmt::Debug for TimeDependentGenerator<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TimeDependentGenerator")
            .field("dim", &self.dim)
            .field("frequency", &self.frequency)
            .field("constant", &self.constant)
            .finish()
    }
}

impl<T: Real> TimeDependentGenerator<T> {
    pub fn constant(l: Superoperator<T>) -> Self {
        let dim = l.dim();
        Self {
            dim,
            eval: Arc::new(move |_| l.clone()),
            frequency: None,
            constant: true,
        }
    }

    pub fn from_fn(dim: usize, f: impl Fn(T) -> Superoperator<T> + Send + Sync + 'static) -> Self {
        Self {
            dim,
            eval: Arc::new(f),
            frequency: None,
            constant: false,
        }
    }

    /// `A + f(t) B`, the common shape of periodically driven generators.
    pub fn modulated(
        a: Superoperator<T>,
        terms: Vec<(Superoperator<T>, Arc<dyn Fn(T) -> T + Send + Sync>)>,
    ) -> Self {
        let dim = a.dim();
        Self::from_fn(dim, move |t| {
            let mut out = a.clone();
            for (b, f) in &terms {
                out.axpy(C::from(f(t)), b);
            }
            out
        })
    }

    /// Records the fastest angular frequency, which caps the step size.
    pub fn with_frequency(mut self, omega: T) -> Self {
        self.frequency = Some(omega.abs());
        self
    }

    pub fn at(&self, t: T) -> Superoperator<T> {
        (self.eval)(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn frequency(&self) -> Option<T> {
        self.frequency
    }

    pub fn is_constant(&self) -> bool {
        self.constant
    }

    /// `t ↦ L(t) + M(t)`.
    pub fn sum(&self, other: &Self) -> Self {
        self.combine(other, T::one())
    }

    /// `t ↦ L(t) − M(t)`.
    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, -T::one())
    }

    fn combine(&self, other: &Self, sign: T) -> Self {
        assert_eq!(self.dim, other.dim, "generator dimension mismatch");
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Self {
            dim: self.dim,
            eval: Arc::new(move |t| {
                let mut out = a(t);
                out.axpy(C::from(sign), &b(t));
                out
            }),
            frequency: max_freq(self.frequency, other.frequency),
            constant: self.constant && other.constant,
        }
    }

    /// `t ↦ s L(t)`.
    pub fn scaled(&self, s: T) -> Self {
        let a = self.eval.clone();
        Self {
            dim: self.dim,
            eval: Arc::new(move |t| a(t).scale_re(s)),
            frequency: self.frequency,
            constant: self.constant,
        }
    }
}

fn max_freq<T: Real>(a: Option<T>, b: Option<T>) -> Option<T> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// `Λ(t, s)` together with the tolerance actually reached.
#[derive(Clone, Debug)]
pub struct Propagator<T> {
    pub map: Superoperator<T>,
    pub start: T,
    pub end: T,
    /// Relative difference between the last two step refinements.
    pub achieved: T,
}

type State<T> = Vec<ComplexMatrix<T>>;

fn lincomb<T: Real>(y: &State<T>, h: T, k: &State<T>) -> State<T> {
    y.iter()
        .zip(k)
        .map(|(a, b)| {
            let mut out = a.clone();
            out.axpy(C::from(h), b);
            out
        })
        .collect()
}

fn rk4_run<T: Real, F>(rhs: &F, t0: T, t1: T, y0: &State<T>, n: usize) -> State<T>
where
    F: Fn(T, &State<T>) -> State<T>,
{
    let h = (t1 - t0) / T::lit(n as f64);
    let half = h * T::lit(0.5);
    let sixth = h / T::lit(6.0);
    let mut y = y0.clone();
    for step in 0..n {
        let t = t0 + h * T::lit(step as f64);
        let k1 = rhs(t, &y);
        let k2 = rhs(t + half, &lincomb(&y, half, &k1));
        let k3 = rhs(t + half, &lincomb(&y, half, &k2));
        let k4 = rhs(t + h, &lincomb(&y, h, &k3));
        for i in 0..y.len() {
            y[i].axpy(C::from(sixth), &k1[i]);
            y[i].axpy(C::from(sixth + sixth), &k2[i]);
            y[i].axpy(C::from(sixth + sixth), &k3[i]);
            y[i].axpy(C::from(sixth), &k4[i]);
        }
    }
    y
}

fn state_difference<T: Real>(a: &State<T>, b: &State<T>) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).frobenius_norm() / T::one().max(y.frobenius_norm()))
        .fold(T::zero(), T::max)
}

/// Step-doubling driver shared by all integrators in this module.
struct Stepper<T> {
    rtol: T,
    max_step: T,
    /// Step size expected to meet `rtol`, carried between intervals.
    hint: T,
}

impl<T: Real> Stepper<T> {
    fn new(rtol: T, max_step: T) -> Result<Self> {
        if !(rtol > T::zero()) {
            return Err(Error::InvalidArgument(format!("rtol must be positive, got {rtol}")));
        }
        Ok(Self {
            rtol,
            max_step,
            hint: max_step,
        })
    }

    fn advance<F>(&mut self, rhs: &F, t0: T, t1: T, y0: &State<T>) -> Result<(State<T>, T)>
    where
        F: Fn(T, &State<T>) -> State<T>,
    {
        let len = t1 - t0;
        if len.is_zero() {
            return Ok((y0.clone(), T::zero()));
        }
        let mut n = (len.abs() / self.hint).ceil().max(T::one()).to_usize().unwrap_or(MAX_STEPS);
        let mut coarse = rk4_run(rhs, t0, t1, y0, n);
        let mut refined = false;
        loop {
            if 2 * n > MAX_STEPS {
                return Err(Error::StepLimit {
                    steps: 2 * n,
                    difference: f64::NAN,
                });
            }
            let fine = rk4_run(rhs, t0, t1, y0, 2 * n);
            let diff = state_difference(&coarse, &fine);
            if !fine.iter().all(ComplexMatrix::is_finite) {
                return Err(Error::NonFinite("propagator"));
            }
            if diff <= self.rtol {
                self.hint = if refined {
                    len.abs() / T::lit(n as f64)
                } else {
                    (self.hint * T::lit(2.0)).min(self.max_step)
                };
                return Ok((fine, diff));
            }
            coarse = fine;
            n *= 2;
            refined = true;
        }
    }
}

fn step_cap<T: Real>(gens: &[&TimeDependentGenerator<T>], s: T, t: T) -> T {
    let mut cap = (t - s).abs().max(T::min_positive_value());
    for g in gens {
        if let Some(w) = g.frequency() {
            if w > T::zero() {
                cap = cap.min(T::TAU() / w / T::lit(STEPS_PER_PERIOD));
            }
        }
        let rate = g.at(s).matrix().norm_one();
        if rate > T::zero() {
            cap = cap.min(T::lit(2.0) / rate);
        }
    }
    cap
}

/// `Λ(t, s)` solving `∂_t Λ = L(t) Λ`, `Λ(s, s) = 1`.
pub fn evolve<T: Real>(
    gen: &TimeDependentGenerator<T>,
    s: T,
    t: T,
    rtol: T,
) -> Result<Propagator<T>> {
    let mut grid = evolve_grid(gen, s, &[t], rtol)?;
    Ok(grid.pop().expect("one grid point"))
}

/// `Λ(t_i, s)` for each `t_i` in the non-decreasing list `times` (all `≥ s`).
pub fn evolve_grid<T: Real>(
    gen: &TimeDependentGenerator<T>,
    s: T,
    times: &[T],
    rtol: T,
) -> Result<Vec<Propagator<T>>> {
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t0| t0 < s) {
        return Err(Error::InvalidArgument("time grid must be sorted and start after s".into()));
    }
    let d = gen.dim();
    let end = times.last().copied().unwrap_or(s);
    let mut stepper = Stepper::new(rtol, step_cap(&[gen], s, end))?;
    let rhs = |tau: T, y: &State<T>| vec![gen.at(tau).matrix().matmul(&y[0])];
    let mut y = vec![ComplexMatrix::identity(d * d)];
    let mut current = s;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let (next, achieved) = stepper.advance(&rhs, current, t, &y)?;
        y = next;
        current = t;
        out.push(Propagator {
            map: Superoperator::from_matrix(d, y[0].clone())?,
            start: s,
            end: t,
            achieved,
        });
    }
    Ok(out)
}

/// `e^{tL}` by scaling and squaring.
pub fn expm<T: Real>(l: &Superoperator<T>, t: T) -> Result<Superoperator<T>> {
    let m = expm_matrix(&l.matrix().scale_re(t))?;
    Superoperator::from_matrix(l.dim(), m)
}

/// Interaction-picture generator `Λ₀(t)⁻¹ (L₂(t) − L₀(t)) Λ₀(t)`.
pub fn interaction_generator<T: Real>(
    l2: &TimeDependentGenerator<T>,
    l0: &TimeDependentGenerator<T>,
    t: T,
    rtol: T,
) -> Result<Superoperator<T>> {
    let lam0 = evolve(l0, T::zero(), t, rtol)?.map;
    let inv = checked_inverse(lam0.matrix())?;
    let diff = &l2.at(t) - &l0.at(t);
    let m = inv.matmul(diff.matrix()).matmul(lam0.matrix());
    Superoperator::from_matrix(l0.dim(), m)
}

fn checked_inverse<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let (inv, cond) = m.inverse_with_condition()?;
    if cond > T::lit(MAX_CONDITION) {
        return Err(Error::IllConditioned {
            condition: cond.as_f64(),
        });
    }
    Ok(inv)
}

/// `S₁₂(t) = ∫₀ᵗ Λ₀(t, s) (L₁(s) − L₂(s)) Λ₀(s) ds`, from
/// `S' = L₀ S + (L₁ − L₂) Λ₀`, `S(0) = 0`.
pub fn integral_action<T: Real>(
    l1: &TimeDependentGenerator<T>,
    l2: &TimeDependentGenerator<T>,
    l0: &TimeDependentGenerator<T>,
    t: T,
    rtol: T,
) -> Result<Superoperator<T>> {
    let d = l0.dim();
    let n = d * d;
    let rhs = |s: T, y: &State<T>| {
        let a0 = l0.at(s);
        let diff = &l1.at(s) - &l2.at(s);
        let mut ds = a0.matrix().matmul(&y[1]);
        ds += &diff.matrix().matmul(&y[0]);
        vec![a0.matrix().matmul(&y[0]), ds]
    };
    let mut stepper = Stepper::new(rtol, step_cap(&[l0, l1, l2], T::zero(), t))?;
    let y0 = vec![ComplexMatrix::identity(n), ComplexMatrix::zeros(n, n)];
    let (y, _) = stepper.advance(&rhs, T::zero(), t, &y0)?;
    Superoperator::from_matrix(d, y[1].clone())
}

/// Pieces of the two-generator comparison identity at time `t`.
#[derive(Clone, Debug)]
pub struct IdentityCheck<T> {
    /// `Λ₁(t) − Λ₂(t)`, each propagated directly.
    pub lhs: Superoperator<T>,
    /// `S₁₂(t) Λ̃₂(t) + ∫₀ᵗ Λ₁(t,s)[(L₁−L₀)S₁₂ − S₁₂ L̃₂](s) Λ̃₂(s) ds`.
    pub rhs: Superoperator<T>,
    /// Frobenius norm of `lhs − rhs`.
    pub residual: T,
}

/// Evaluates both sides of
/// `Λ₁ − Λ₂ = S₁₂ Λ̃₂ + ∫ Λ₁(t,s)[(L₁−L₀)S₁₂ − S₁₂ L̃₂] Λ̃₂ ds`
/// where `Λ₂ = Λ₀ Λ̃₂` and `L̃₂ = Λ₀⁻¹ (L₂ − L₀) Λ₀`.
pub fn lemma32_identity_residual<T: Real>(
    l1: &TimeDependentGenerator<T>,
    l2: &TimeDependentGenerator<T>,
    l0: &TimeDependentGenerator<T>,
    t: T,
    rtol: T,
) -> Result<IdentityCheck<T>> {
    let d = l0.dim();
    let n = d * d;
    // state: [Λ₀, S₁₂, Λ̃₂, J]
    let rhs = |s: T, y: &State<T>| {
        let a0 = l0.at(s);
        let a1 = l1.at(s);
        let a2 = l2.at(s);
        let lam0 = &y[0];
        let inv = lam0
            .inverse()
            .unwrap_or_else(|_| ComplexMatrix::zeros(n, n).map(|_| C::from(T::nan())));
        let tilde = inv
            .matmul(&(a2.matrix() - a0.matrix()))
            .matmul(lam0);
        let d_lam0 = a0.matrix().matmul(lam0);
        let mut d_s = a0.matrix().matmul(&y[1]);
        d_s += &(a1.matrix() - a2.matrix()).matmul(lam0);
        let d_tilde = tilde.matmul(&y[2]);
        let mut inner = (a1.matrix() - a0.matrix()).matmul(&y[1]);
        inner -= &y[1].matmul(&tilde);
        let mut d_j = a1.matrix().matmul(&y[3]);
        d_j += &inner.matmul(&y[2]);
        vec![d_lam0, d_s, d_tilde, d_j]
    };
    let mut stepper = Stepper::new(rtol, step_cap(&[l0, l1, l2], T::zero(), t))?;
    let id = ComplexMatrix::identity(n);
    let zero = ComplexMatrix::zeros(n, n);
    let y0 = vec![id.clone(), zero.clone(), id, zero];
    let (y, _) = stepper.advance(&rhs, T::zero(), t, &y0)?;
    if !y.iter().all(ComplexMatrix::is_finite) {
        return Err(Error::NonFinite("interaction-picture propagator"));
    }
    let lam1 = evolve(l1, T::zero(), t, rtol)?.map;
    let lam2 = evolve(l2, T::zero(), t, rtol)?.map;
    let lhs = &lam1 - &lam2;
    let mut rhs_m = y[1].matmul(&y[2]);
    rhs_m += &y[3];
    let rhs_op = Superoperator::from_matrix(d, rhs_m)?;
    let residual = (&lhs - &rhs_op).matrix().frobenius_norm();
    Ok(IdentityCheck {
        lhs,
        rhs: rhs_op,
        residual,
    })
}

/// Generic step-doubling RK4 solve of `y' = f(t, y)` over `[t0, t1]` for a
/// tuple of matrices, sampled at each of `times`.
pub fn integrate_matrices<T: Real, F>(
    rhs: F,
    y0: Vec<ComplexMatrix<T>>,
    t0: T,
    times: &[T],
    rtol: T,
    max_step: T,
) -> Result<Vec<Vec<ComplexMatrix<T>>>>
where
    F: Fn(T, &Vec<ComplexMatrix<T>>) -> Vec<ComplexMatrix<T>>,
{
    let mut stepper = Stepper::new(rtol, max_step)?;
    let mut y = y0;
    let mut current = t0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let (next, _) = stepper.advance(&rhs, current, t, &y)?;
        y = next;
        current = t;
        out.push(y.clone());
    }
    Ok(out)
}
