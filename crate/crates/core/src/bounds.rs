//! Closed-form error bounds and the averaged generators they compare against.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::norms::{superop_norm, NormKind};
use crate::propagate::{integrate_matrices, TimeDependentGenerator};
use crate::scalar::{Real, C};
use crate::spectral::{decay_constants, DecayConstants, SpectralDecomposition};
use crate::superop::Superoperator;

/// Which closed form produced a [`BoundReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationTag {
    /// `(S + 2DR/(κη)) e^{D̄T} [1 + T e^{DT}(D + D̄)]`.
    Generic,
    /// Generic form restricted to the peripheral part, plus the transient.
    GenericPeripheral,
    /// `(S + 2DR/(κη)) [1 + T(D + D̄)]` for contractive evolutions.
    Contractive,
    /// Contractive form restricted to the peripheral part, plus the transient.
    ContractivePeripheral,
    /// Strong-coupling bound for a constant perturbation.
    StrongCoupling,
    /// `∫₀ᵀ ‖L₁(u) − L₂(u)‖ du`.
    GeneratorDistance,
}

impl EquationTag {
    pub fn as_str(self) -> &'static str {
        match self {
            EquationTag::Generic => "generic",
            EquationTag::GenericPeripheral => "generic_peripheral",
            EquationTag::Contractive => "contractive",
            EquationTag::ContractivePeripheral => "contractive_peripheral",
            EquationTag::StrongCoupling => "strong_coupling",
            EquationTag::GeneratorDistance => "generator_distance",
        }
    }
}

impl std::fmt::Display for EquationTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How `s_sup` was obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupSource {
    #[default]
    Analytic,
    Sampled,
}

/// Constants entering the bounds for `L_κ(t) = κ L₀ + D_κ(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs<T> {
    /// `sup_t ‖D_κ(t)‖`.
    pub d: T,
    /// `sup_t ‖D̄(t)‖`.
    pub d_bar: T,
    /// `sup_t ‖S_{κ,φ}(t)‖`.
    pub s_sup: T,
    #[serde(default)]
    pub s_sup_source: SupSource,
    /// Smallest decay rate of `L₀`; `None` when `L₀` has no decaying part.
    pub eta: Option<T>,
    pub r: T,
    /// Horizon `T`.
    pub horizon: T,
    pub kappa: T,
    /// Whether the evolutions are contractions, enabling the sharper forms.
    pub contractive: bool,
    /// Coefficients of `p(t)`, lowest degree first.
    #[serde(default)]
    pub p_coeffs: Vec<T>,
}

impl<T: Real> BoundInputs<T> {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("d", self.d),
            ("d_bar", self.d_bar),
            ("s_sup", self.s_sup),
            ("r", self.r),
            ("horizon", self.horizon),
        ];
        for (name, v) in named {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if !(self.kappa > T::zero()) || !self.kappa.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "kappa must be positive, got {}",
                self.kappa
            )));
        }
        if let Some(eta) = self.eta {
            if !(eta > T::zero()) {
                return Err(Error::InvalidArgument(format!("eta must be positive, got {eta}")));
            }
        }
        if self.p_coeffs.iter().any(|c| !(*c >= T::zero()) || !c.is_finite()) {
            return Err(Error::InvalidArgument("p coefficients must be non-negative".into()));
        }
        Ok(())
    }

    /// `R/(κη)`, zero without a decaying part.
    pub fn decay_term(&self) -> T {
        match self.eta {
            Some(eta) if eta.is_finite() => self.r / (self.kappa * eta),
            _ => T::zero(),
        }
    }

    /// `e^{−κηt} p(κt)`, zero without a decaying part.
    pub fn transient(&self, t: T) -> T {
        match self.eta {
            Some(eta) if eta.is_finite() => {
                let x = self.kappa * t;
                let p = self.p_coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c);
                (-eta * x).exp() * p
            }
            _ => T::zero(),
        }
    }
}

/// A bound value with the formula and inputs that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport<T> {
    pub value: T,
    pub equation_tag: EquationTag,
    pub t: T,
    pub inputs: Option<BoundInputs<T>>,
}

/// Evaluates the convergence bound at time `t` (used only by the transient
/// term of the peripheral variants, which require `t > 0`).
pub fn theorem41_bound<T: Real>(
    inputs: &BoundInputs<T>,
    peripheral: bool,
    t: T,
) -> Result<BoundReport<T>> {
    inputs.validate()?;
    if peripheral && !(t > T::zero()) {
        return Err(Error::InvalidArgument(
            "peripheral bound holds only for t > 0".into(),
        ));
    }
    let transient = if peripheral { inputs.transient(t) } else { T::zero() };
    theorem41_with_transient(inputs, peripheral, t, transient)
}

/// Peripheral bound holding uniformly for `t ∈ [τ, T]`, with the transient
/// replaced by its supremum over that interval.
pub fn theorem41_bound_uniform<T: Real>(inputs: &BoundInputs<T>, tau: T) -> Result<BoundReport<T>> {
    inputs.validate()?;
    if !(tau > T::zero()) || tau > inputs.horizon {
        return Err(Error::InvalidArgument(format!(
            "tau must lie in (0, T], got {tau}"
        )));
    }
    let transient = transient_sup(inputs, tau, inputs.horizon);
    theorem41_with_transient(inputs, true, tau, transient)
}

fn theorem41_with_transient<T: Real>(
    inputs: &BoundInputs<T>,
    peripheral: bool,
    t: T,
    transient: T,
) -> Result<BoundReport<T>> {
    let (d, db, s, horizon) = (inputs.d, inputs.d_bar, inputs.s_sup, inputs.horizon);
    let dr = d * inputs.decay_term();
    let two = T::lit(2.0);
    let (value, tag) = match (inputs.contractive, peripheral) {
        (false, false) => (
            (s + two * dr) * (db * horizon).exp() * (T::one() + horizon * (d * horizon).exp() * (d + db)),
            EquationTag::Generic,
        ),
        (false, true) => (
            (s + dr) * (db * horizon).exp() * (T::one() + horizon * (d * horizon).exp() * (d + db))
                + dr * (d * horizon).exp()
                + transient,
            EquationTag::GenericPeripheral,
        ),
        (true, false) => (
            (s + two * dr) * (T::one() + horizon * (d + db)),
            EquationTag::Contractive,
        ),
        (true, true) => (
            (s + dr) * (T::one() + horizon * (d + db)) + dr + transient,
            EquationTag::ContractivePeripheral,
        ),
    };
    if !value.is_finite() {
        return Err(Error::NonFinite("bound value"));
    }
    Ok(BoundReport {
        value,
        equation_tag: tag,
        t,
        inputs: Some(inputs.clone()),
    })
}

/// `sup_{t ∈ [a, b]} e^{−κηt} p(κt)` by dense sampling plus the endpoints.
fn transient_sup<T: Real>(inputs: &BoundInputs<T>, a: T, b: T) -> T {
    if inputs.p_coeffs.len() <= 1 {
        return inputs.transient(a);
    }
    let n = 2000;
    (0..=n)
        .map(|i| a + (b - a) * T::lit(i as f64 / n as f64))
        .map(|t| inputs.transient(t))
        .fold(T::zero(), T::max)
}

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

/// Composite five-point Gauss-Legendre rule over `panels` equal panels.
fn gauss_legendre<T: Real>(a: T, b: T, panels: usize, mut f: impl FnMut(T) -> T) -> T {
    let h = (b - a) / T::lit(panels as f64);
    let mut total = T::zero();
    for p in 0..panels {
        let mid = a + h * (T::lit(p as f64) + T::lit(0.5));
        for (x, w) in GL5_NODES.iter().zip(&GL5_WEIGHTS) {
            total += T::lit(*w) * f(mid + h * T::lit(0.5 * x));
        }
    }
    total * h * T::lit(0.5)
}

/// `∫₀ᵀ ‖L₁(u) − L₂(u)‖ du`, refining the panel count until two successive
/// estimates agree to `1e-8` relative.
pub fn lemma31_bound<T: Real>(
    l1: &TimeDependentGenerator<T>,
    l2: &TimeDependentGenerator<T>,
    horizon: T,
    norm: NormKind,
) -> Result<BoundReport<T>> {
    if !(horizon >= T::zero()) {
        return Err(Error::InvalidArgument("horizon must be non-negative".into()));
    }
    let diff = l1.difference(l2);
    let mut failure = None;
    let mut integrand = |u: T| match superop_norm(&diff.at(u), norm) {
        Ok(v) => v,
        Err(e) => {
            failure = Some(e);
            T::zero()
        }
    };
    let value = if diff.is_constant() || horizon.is_zero() {
        horizon * integrand(T::zero())
    } else {
        let periods = diff
            .frequency()
            .map(|w| (horizon * w / T::TAU()).ceil().to_usize().unwrap_or(1))
            .unwrap_or(1);
        let mut panels = (4 * periods).max(4);
        let mut prev = gauss_legendre(T::zero(), horizon, panels, &mut integrand);
        loop {
            panels *= 2;
            let next = gauss_legendre(T::zero(), horizon, panels, &mut integrand);
            if (next - prev).abs() <= T::tol(1e-8) * T::one().max(next) || panels > 1 << 16 {
                break next;
            }
            prev = next;
        }
    };
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(BoundReport {
        value,
        equation_tag: EquationTag::GeneratorDistance,
        t: horizon,
        inputs: None,
    })
}

/// `D_Z = Σ_{peripheral k} P_k D P_k`.
pub fn pinching_dz<T: Real>(d: &Superoperator<T>, sd: &SpectralDecomposition<T>) -> Superoperator<T> {
    let mut out = Superoperator::zero(sd.dim());
    for comp in sd.peripheral() {
        out.axpy(C::one(), &comp.projection.compose(d).compose(&comp.projection));
    }
    out
}

/// Strong-coupling bound
/// `(2/κ)(m(m−1)P²/Δ + R/η)‖D‖ e^{t‖D_Z‖}(1 + t e^{t‖D‖}(‖D‖ + ‖D_Z‖))`.
pub fn strong_coupling_bound<T: Real>(
    d: &Superoperator<T>,
    sd: &SpectralDecomposition<T>,
    kappa: T,
    t: T,
    norm: NormKind,
) -> Result<BoundReport<T>> {
    let dc = decay_constants(sd, norm)?;
    strong_coupling_bound_with(d, &pinching_dz(d, sd), &dc, kappa, t, norm)
}

/// [`strong_coupling_bound`] with a precomputed `D_Z` and decay constants.
pub fn strong_coupling_bound_with<T: Real>(
    d: &Superoperator<T>,
    dz: &Superoperator<T>,
    dc: &DecayConstants<T>,
    kappa: T,
    t: T,
    norm: NormKind,
) -> Result<BoundReport<T>> {
    if !(kappa > T::zero()) || !(t >= T::zero()) {
        return Err(Error::InvalidArgument("need kappa > 0 and t >= 0".into()));
    }
    let dn = superop_norm(d, norm)?;
    let dzn = superop_norm(dz, norm)?;
    let m = T::lit(dc.m as f64);
    let gap_term = if dc.m >= 2 {
        m * (m - T::one()) * dc.p_max * dc.p_max / dc.delta
    } else {
        T::zero()
    };
    let value = T::lit(2.0) / kappa
        * (gap_term + dc.r_over_eta())
        * dn
        * (t * dzn).exp()
        * (T::one() + t * (t * dn).exp() * (dn + dzn));
    Ok(BoundReport {
        value,
        equation_tag: EquationTag::StrongCoupling,
        t,
        inputs: None,
    })
}

/// `200 · 2π/Δ`, or `200 · 2π/ω_D` when there is a single peripheral eigenvalue.
pub fn default_tau_max<T: Real>(sd: &SpectralDecomposition<T>, drive_frequency: Option<T>) -> T {
    let periph: Vec<C<T>> = sd.peripheral().map(|c| c.eigenvalue).collect();
    let mut delta = T::infinity();
    for (i, a) in periph.iter().enumerate() {
        for b in periph.iter().skip(i + 1) {
            delta = delta.min((a - b).norm());
        }
    }
    let slowest = match drive_frequency {
        Some(w) if w > T::zero() => delta.min(w),
        _ => delta,
    };
    let slowest = if slowest.is_finite() { slowest } else { T::one() };
    T::lit(200.0) * T::TAU() / slowest
}

fn max_peripheral_frequency<T: Real>(sd: &SpectralDecomposition<T>) -> T {
    let periph: Vec<C<T>> = sd.peripheral().map(|c| c.eigenvalue).collect();
    let mut w = T::zero();
    for a in &periph {
        for b in &periph {
            w = w.max((a - b).norm());
        }
    }
    w
}

/// Cesàro averages `(1/τ)∫₀^τ e^{−sL₀}P_φ D(s) P_φ e^{sL₀} ds` at `τ/2` and `τ`.
fn cesaro_pair<T: Real>(
    d_at: &dyn Fn(T) -> Superoperator<T>,
    frequency: Option<T>,
    sd: &SpectralDecomposition<T>,
    tau: T,
) -> (Superoperator<T>, Superoperator<T>) {
    let periph: Vec<_> = sd.peripheral().collect();
    let dim = sd.dim();
    let fastest = max_peripheral_frequency(sd) + frequency.unwrap_or_else(T::zero);
    let half = tau * T::lit(0.5);
    let panels_half = if fastest > T::zero() {
        (half * fastest / T::TAU() * T::lit(8.0)).ceil().to_usize().unwrap_or(1).max(8)
    } else {
        8
    };
    let h = half / T::lit(panels_half as f64);
    let mut acc_first = Superoperator::zero(dim);
    let mut acc = Superoperator::zero(dim);
    for p in 0..2 * panels_half {
        let mid = h * (T::lit(p as f64) + T::lit(0.5));
        for (x, w) in GL5_NODES.iter().zip(&GL5_WEIGHTS) {
            let s = mid + h * T::lit(0.5 * x);
            let ds = d_at(s);
            let weight = T::lit(*w) * h * T::lit(0.5);
            for a in &periph {
                let left = a.projection.compose(&ds);
                for b in &periph {
                    let phase = (-(a.eigenvalue - b.eigenvalue) * s).exp() * weight;
                    acc.axpy(phase, &left.compose(&b.projection));
                }
            }
        }
        if p + 1 == panels_half {
            acc_first = acc.clone();
        }
    }
    (acc_first.scale_re(T::one() / half), acc.scale_re(T::one() / tau))
}

/// Long-time average of `e^{−sL₀}P_φ D(s) P_φ e^{sL₀}` at `τ = tau_max`,
/// rejected when it differs from the `τ/2` value by more than `tol`.
pub fn longtime_average<T: Real>(
    d: &TimeDependentGenerator<T>,
    sd: &SpectralDecomposition<T>,
    tau_max: T,
    tol: T,
) -> Result<Superoperator<T>> {
    if d.is_constant() {
        return Ok(pinching_dz(&d.at(T::zero()), sd));
    }
    if !(tau_max > T::zero()) {
        return Err(Error::InvalidArgument("tau_max must be positive".into()));
    }
    let (half, full) = cesaro_pair(&|s| d.at(s), d.frequency(), sd, tau_max);
    check_converged(&half, &full, tol)?;
    Ok(full)
}

fn check_converged<T: Real>(a: &Superoperator<T>, b: &Superoperator<T>, tol: T) -> Result<()> {
    let diff = (a - b).matrix().max_abs();
    if diff > tol {
        return Err(Error::NotConverged {
            difference: diff.as_f64(),
            tolerance: tol.as_f64(),
        });
    }
    Ok(())
}

/// Averages of `s ↦ D(t, s)` for each `t` in `t_grid`, interpolated linearly
/// in `t` (and held constant outside the grid).
pub fn twotimescale_average<T: Real>(
    d2: impl Fn(T, T) -> Superoperator<T> + Send + Sync,
    fast_frequency: Option<T>,
    sd: &SpectralDecomposition<T>,
    t_grid: &[T],
    tau_max: T,
    tol: T,
) -> Result<TimeDependentGenerator<T>> {
    if t_grid.is_empty() || t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("t_grid must be strictly increasing and non-empty".into()));
    }
    let mut values = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let (half, full) = cesaro_pair(&|s| d2(t, s), fast_frequency, sd, tau_max);
        check_converged(&half, &full, tol)?;
        values.push(full);
    }
    let grid = t_grid.to_vec();
    Ok(TimeDependentGenerator::from_fn(sd.dim(), move |t| {
        interpolate(&grid, &values, t)
    }))
}

fn interpolate<T: Real>(grid: &[T], values: &[Superoperator<T>], t: T) -> Superoperator<T> {
    if t <= grid[0] {
        return values[0].clone();
    }
    let last = grid.len() - 1;
    if t >= grid[last] {
        return values[last].clone();
    }
    let i = grid.partition_point(|&g| g <= t) - 1;
    let w = (t - grid[i]) / (grid[i + 1] - grid[i]);
    let mut out = values[i].scale_re(T::one() - w);
    out.axpy(C::from(w), &values[i + 1]);
    out
}

/// `S_{κ,φ}(t) = ∫₀ᵗ [e^{κ(t−s)L₀} P_φ D(s) P_φ e^{κsL₀} − e^{κtL₀} D̄(s)] ds`
/// at each time in `times`, from the ODE
/// `S' = κL₀S + P_φ D(t) P_φ e^{κtL₀} − e^{κtL₀} D̄(t)`.
pub fn peripheral_action<T: Real>(
    l0: &Superoperator<T>,
    sd: &SpectralDecomposition<T>,
    kappa: T,
    d: &TimeDependentGenerator<T>,
    d_bar: &TimeDependentGenerator<T>,
    times: &[T],
    rtol: T,
) -> Result<Vec<Superoperator<T>>> {
    let dim = l0.dim();
    let n = dim * dim;
    let pphi = sd.peripheral_projection();
    let kl0 = l0.matrix().scale_re(kappa);
    let rhs = |t: T, y: &Vec<ComplexMatrix<T>>| {
        let e = &y[0];
        let pdp = pphi.compose(&d.at(t)).compose(&pphi);
        let mut ds = kl0.matmul(&y[1]);
        ds += &pdp.matrix().matmul(e);
        ds -= &e.matmul(d_bar.at(t).matrix());
        vec![kl0.matmul(e), ds]
    };
    let fastest = d.frequency().unwrap_or_else(T::zero).max(d_bar.frequency().unwrap_or_else(T::zero));
    let horizon = times.last().copied().unwrap_or_else(T::zero);
    let mut cap = horizon.max(T::min_positive_value());
    if fastest > T::zero() {
        cap = cap.min(T::TAU() / fastest / T::lit(20.0));
    }
    let rate = kl0.norm_one();
    if rate > T::zero() {
        cap = cap.min(T::lit(2.0) / rate);
    }
    let y0 = vec![ComplexMatrix::identity(n), ComplexMatrix::zeros(n, n)];
    let states = integrate_matrices(rhs, y0, T::zero(), times, rtol, cap)?;
    states
        .into_iter()
        .map(|y| Superoperator::from_matrix(dim, y[1].clone()))
        .collect()
}

/// Closed form of `S_{κ,φ}(t)` for constant `D` with `D̄ = D_Z`:
/// `Σ_{k≠ℓ} (e^{κα_k t} − e^{κα_ℓ t}) / (κ(α_k − α_ℓ)) P_k D P_ℓ`.
pub fn constant_peripheral_action<T: Real>(
    d: &Superoperator<T>,
    sd: &SpectralDecomposition<T>,
    kappa: T,
    t: T,
) -> Superoperator<T> {
    let periph: Vec<_> = sd.peripheral().collect();
    let mut out = Superoperator::zero(sd.dim());
    for (k, a) in periph.iter().enumerate() {
        for (l, b) in periph.iter().enumerate() {
            if k == l {
                continue;
            }
            let diff = a.eigenvalue - b.eigenvalue;
            let coef = ((a.eigenvalue * kappa * t).exp() - (b.eigenvalue * kappa * t).exp()) / (diff * kappa);
            out.axpy(coef, &a.projection.compose(d).compose(&b.projection));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::spectral_decompose;
    use crate::superop::{hamiltonian_superop, pauli};

    fn inputs(s: f64, d: f64, db: f64, horizon: f64, contractive: bool) -> BoundInputs<f64> {
        BoundInputs {
            d,
            d_bar: db,
            s_sup: s,
            s_sup_source: SupSource::Analytic,
            eta: None,
            r: 0.0,
            horizon,
            kappa: 1.0,
            contractive,
            p_coeffs: vec![],
        }
    }

    #[test]
    fn contractive_hand_value() {
        let r = theorem41_bound(&inputs(0.01, 1.0, 1.0, 10.0, true), false, 10.0).unwrap();
        assert!((r.value - 0.21).abs() < 1e-15);
        assert_eq!(r.equation_tag, EquationTag::Contractive);
    }

    #[test]
    fn zero_action_without_decay_is_zero() {
        let r = theorem41_bound(&inputs(0.0, 3.0, 2.0, 7.0, false), false, 1.0).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.equation_tag, EquationTag::Generic);
    }

    #[test]
    fn peripheral_rejects_t_zero() {
        assert!(theorem41_bound(&inputs(0.1, 1.0, 1.0, 1.0, true), true, 0.0).is_err());
        let mut bad = inputs(0.1, 1.0, 1.0, 1.0, true);
        bad.kappa = 0.0;
        assert!(theorem41_bound(&bad, false, 1.0).is_err());
    }

    #[test]
    fn contractive_never_exceeds_generic() {
        for &(s, d, db, t) in &[(0.1, 1.0, 0.5, 2.0), (0.3, 0.0, 2.0, 1.0), (0.0, 2.0, 2.0, 0.5)] {
            let mut i = inputs(s, d, db, t, true);
            i.eta = Some(2.0);
            i.r = 1.5;
            let phys = theorem41_bound(&i, false, t).unwrap().value;
            i.contractive = false;
            let gen = theorem41_bound(&i, false, t).unwrap().value;
            assert!(phys <= gen);
        }
    }

    #[test]
    fn constant_pinching_is_idempotent() {
        let [x, _, z] = pauli::<f64>();
        let l0 = hamiltonian_superop(&z.scale_re(0.5)).unwrap();
        let sd = spectral_decompose(&l0).unwrap();
        let d = &Superoperator::sandwich(&x, &x).unwrap() + &hamiltonian_superop(&x).unwrap();
        let dz = pinching_dz(&d, &sd);
        assert!(pinching_dz(&dz, &sd).approx_eq(&dz, 1e-13));
        // ad_X is off-diagonal between the peripheral blocks
        let ad = hamiltonian_superop(&x).unwrap();
        assert!(pinching_dz(&ad, &sd).matrix().max_abs() < 1e-13);
    }

    #[test]
    fn strong_coupling_is_linear_in_inverse_kappa() {
        let [_, _, z] = pauli::<f64>();
        let l0 = hamiltonian_superop(&z.scale_re(0.5)).unwrap();
        let sd = spectral_decompose(&l0).unwrap();
        let deph = &Superoperator::sandwich(&z, &z).unwrap() - &Superoperator::identity(2);
        let b1 = strong_coupling_bound(&deph, &sd, 10.0, 1.0, NormKind::Spectral).unwrap().value;
        let b2 = strong_coupling_bound(&deph, &sd, 20.0, 1.0, NormKind::Spectral).unwrap().value;
        assert!((b1 - 2.0 * b2).abs() < 1e-12 * b1);
    }

    #[test]
    fn generator_distance_of_constants() {
        let [x, _, _] = pauli::<f64>();
        let a = TimeDependentGenerator::constant(hamiltonian_superop(&x).unwrap());
        let b = TimeDependentGenerator::constant(Superoperator::zero(2));
        let r = lemma31_bound(&a, &b, 1.5, NormKind::Diamond).unwrap();
        assert!((r.value - 3.0).abs() < 1e-10);
        let same = lemma31_bound(&a, &a, 1.5, NormKind::Diamond).unwrap();
        assert_eq!(same.value, 0.0);
    }
}
