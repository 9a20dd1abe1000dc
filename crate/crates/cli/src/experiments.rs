//! Bound-versus-distance sweeps for the driven qubit, the dephased qutrit and
//! Redfield generators.

use std::sync::Arc;

use anyhow::Context;
use num_complex::Complex64;
use openrwa::bounds::{theorem41_bound, theorem41_bound_uniform, BoundInputs, EquationTag, SupSource};
use openrwa::propagate::{evolve_grid, expm, TimeDependentGenerator};
use openrwa::redfield::{bohr_decompose, build_redfield, build_secular, secular_error_bound, SystemBathSpec};
use openrwa::superop::{hamiltonian_superop, matrix_unit, pauli};
use openrwa::{Generator, Matrix, Superop};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExampleKind, ExperimentConfig};
use crate::measure::{sup_norm, time_grid, MeasureOptions, Measurement};

/// Slack allowed when checking `bound ≥ exact_distance`.
pub const DOMINANCE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub omega: f64,
    pub kappa: Option<f64>,
    pub exact_distance: f64,
    pub bound: f64,
    pub equation_tag: EquationTag,
}

impl SweepRow {
    pub fn dominated(&self) -> bool {
        self.bound >= self.exact_distance - DOMINANCE_TOL
    }
}

pub fn run(example: ExampleKind, config: &ExperimentConfig) -> anyhow::Result<Vec<SweepRow>> {
    config.validate(example)?;
    let mut rows = match example {
        ExampleKind::Ex1 => run_example1(config)?,
        ExampleKind::Ex2 => run_example2(config)?,
        ExampleKind::Ex3 => run_example3(config)?,
        ExampleKind::Redfield => {
            let path = config.spec_file.as_ref().context("redfield runs need spec_file")?;
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading spec {}", path.display()))?;
            let spec = SystemBathSpec::from_json(&text)
                .with_context(|| format!("parsing spec {}", path.display()))?;
            run_redfield(config, &spec)?
        }
    };
    rows.sort_by(|a, b| {
        a.omega
            .total_cmp(&b.omega)
            .then(a.kappa.unwrap_or(0.0).total_cmp(&b.kappa.unwrap_or(0.0)))
            .then(a.equation_tag.as_str().cmp(b.equation_tag.as_str()))
    });
    Ok(rows)
}

fn options(config: &ExperimentConfig) -> MeasureOptions {
    MeasureOptions {
        norm: config.norm,
        restarts: config.restarts,
        candidates: config.candidates,
        seed: config.seed,
    }
}

fn cos_at(omega: f64) -> Arc<dyn Fn(f64) -> f64 + Send + Sync> {
    Arc::new(move |t: f64| (omega * t).cos())
}

fn sin_at(omega: f64) -> Arc<dyn Fn(f64) -> f64 + Send + Sync> {
    Arc::new(move |t: f64| (omega * t).sin())
}

/// `ρ ↦ (γ/2)(AρA − ρ)`.
fn dephasing(a: &Matrix, gamma: f64) -> Superop {
    let d = a.rows();
    let s = Superop::sandwich(a, a).expect("square operator");
    (&s - &Superop::identity(d)).scale_re(0.5 * gamma)
}

/// Driven qubit `−i[ωZ/2 + g cos(ωt) X, ·] + (γ/2)(AρA − ρ)` together with the
/// averaged dissipator `D̄` of its rotating frame.
pub struct DrivenQubit {
    pub omega: f64,
    pub generator: Generator,
    pub l0: Superop,
    pub d_bar: Superop,
}

impl DrivenQubit {
    /// Dephasing along `Z`.
    pub fn example1(g: f64, gamma: f64, omega: f64) -> Self {
        let [x, _, z] = pauli::<f64>();
        let ad_x = hamiltonian_superop(&x).expect("Hermitian");
        let noise = dephasing(&z, gamma);
        Self::assemble(g, omega, noise.clone(), &ad_x.scale_re(0.5 * g) + &noise)
    }

    /// Dephasing along `X`, whose average is `(γ/4)(XρX + YρY − 2ρ)`.
    pub fn example2(g: f64, gamma: f64, omega: f64) -> Self {
        let [x, y, _] = pauli::<f64>();
        let ad_x = hamiltonian_superop(&x).expect("Hermitian");
        let averaged = &dephasing(&x, 0.5 * gamma) + &dephasing(&y, 0.5 * gamma);
        Self::assemble(g, omega, dephasing(&x, gamma), &ad_x.scale_re(0.5 * g) + &averaged)
    }

    fn assemble(g: f64, omega: f64, noise: Superop, d_bar: Superop) -> Self {
        let [x, _, z] = pauli::<f64>();
        let l0 = hamiltonian_superop(&z.scale_re(0.5)).expect("Hermitian");
        let drive = hamiltonian_superop(&x).expect("Hermitian").scale_re(g);
        let generator = TimeDependentGenerator::modulated(&l0.scale_re(omega) + &noise, vec![(drive, cos_at(omega))])
            .with_frequency(omega);
        Self { omega, generator, l0, d_bar }
    }

    /// `e^{ωtL₀} e^{tD̄}`.
    pub fn rwa(&self, t: f64) -> openrwa::Result<Superop> {
        Ok(expm(&self.l0, self.omega * t)?.compose(&expm(&self.d_bar, t)?))
    }

    pub fn differences(&self, times: &[f64], rtol: f64) -> openrwa::Result<Vec<(f64, Superop)>> {
        let exact = evolve_grid(&self.generator, 0.0, times, rtol)?;
        times
            .par_iter()
            .zip(exact.par_iter())
            .map(|(&t, p)| Ok((t, &p.map - &self.rwa(t)?)))
            .collect()
    }
}

/// Closed-form constants of the driven-qubit bounds. `s_numerator` is
/// `ω · sup‖S(t)‖`.
fn qubit_inputs(s_numerator: f64, g: f64, gamma: f64, omega: f64, horizon: f64) -> BoundInputs<f64> {
    BoundInputs {
        d: gamma + 2.0 * g.abs(),
        d_bar: gamma + g.abs(),
        s_sup: s_numerator / omega,
        s_sup_source: SupSource::Analytic,
        eta: None,
        r: 0.0,
        horizon,
        kappa: omega,
        contractive: true,
        p_coeffs: vec![],
    }
}

pub fn example1_bound(g: f64, gamma: f64, omega: f64, horizon: f64) -> openrwa::Result<f64> {
    let inputs = qubit_inputs(g.abs(), g, gamma, omega, horizon);
    Ok(theorem41_bound(&inputs, false, horizon)?.value)
}

pub fn example2_bound(g: f64, gamma: f64, omega: f64, horizon: f64) -> openrwa::Result<f64> {
    let inputs = qubit_inputs(g.abs() + 0.5 * gamma, g, gamma, omega, horizon);
    Ok(theorem41_bound(&inputs, false, horizon)?.value)
}

fn run_qubit(
    config: &ExperimentConfig,
    build: fn(f64, f64, f64) -> DrivenQubit,
    bound: fn(f64, f64, f64, f64) -> openrwa::Result<f64>,
) -> anyhow::Result<Vec<SweepRow>> {
    let p = &config.parameters;
    let opts = options(config);
    p.omega_grid
        .par_iter()
        .map(|&omega| {
            let system = build(p.g, p.gamma, omega);
            let times = time_grid(omega, 0.0, p.horizon);
            let diffs = system.differences(&times, config.rtol)?;
            let Measurement { sup, .. } = sup_norm(&diffs, &opts)?;
            Ok(SweepRow {
                omega,
                kappa: None,
                exact_distance: sup,
                bound: bound(p.g, p.gamma, omega, p.horizon)?,
                equation_tag: EquationTag::Contractive,
            })
        })
        .collect()
}

pub fn run_example1(config: &ExperimentConfig) -> anyhow::Result<Vec<SweepRow>> {
    run_qubit(config, DrivenQubit::example1, example1_bound)
}

pub fn run_example2(config: &ExperimentConfig) -> anyhow::Result<Vec<SweepRow>> {
    run_qubit(config, DrivenQubit::example2, example2_bound)
}

/// Three-level system with levels `{0, 1}` dephased against `{2}` at rate `κ`
/// and driven on both transitions.
pub struct DephasedQutrit {
    pub omega: f64,
    pub kappa: f64,
    pub generator: Generator,
    pub rwa: Generator,
    /// Projection onto the block-diagonal part `P₁ρP₁ + P₂ρP₂`.
    pub peripheral: Superop,
}

fn pair(i: usize, j: usize, phase: Complex64) -> Matrix {
    let mut m = matrix_unit::<f64>(3, i, j).scale(phase);
    m += &matrix_unit::<f64>(3, j, i).scale(phase.conj());
    m
}

impl DephasedQutrit {
    pub fn new(g1: f64, g2: f64, omega: f64, kappa: f64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let x01 = pair(0, 1, one);
        let y01 = pair(0, 1, Complex64::new(0.0, 1.0));
        let x12 = pair(1, 2, one);
        let h = &matrix_unit::<f64>(3, 1, 1) + &matrix_unit::<f64>(3, 2, 2).scale_re(2.0);
        let p2 = matrix_unit::<f64>(3, 2, 2);
        let p1 = &Matrix::identity(3) - &p2;
        let sq = |a: &Matrix, b: &Matrix| Superop::sandwich(a, b).expect("same dimension");
        let mut decay = &Superop::left(&p2).expect("square") + &Superop::right(&p2).expect("square");
        decay.axpy(Complex64::new(-2.0, 0.0), &sq(&p2, &p2));
        let l0 = &hamiltonian_superop(&h).expect("Hermitian").scale_re(omega) - &decay.scale_re(kappa);
        let ad = |a: &Matrix| hamiltonian_superop(a).expect("Hermitian");
        let drive = &ad(&x01).scale_re(g1) + &ad(&x12).scale_re(g2);
        let generator =
            TimeDependentGenerator::modulated(l0.clone(), vec![(drive, cos_at(omega))]).with_frequency(omega);
        let rwa = TimeDependentGenerator::modulated(
            l0,
            vec![
                (ad(&x01).scale_re(0.5 * g1), cos_at(omega)),
                (ad(&y01).scale_re(0.5 * g1), sin_at(omega)),
            ],
        )
        .with_frequency(omega);
        let peripheral = &sq(&p1, &p1) + &sq(&p2, &p2);
        Self { omega, kappa, generator, rwa, peripheral }
    }

    /// Closed-form constants with `L₀` taken at unit scale, so that
    /// `R/(κη) = 1/κ` and the transient is `e^{−κt}`.
    pub fn bound_inputs(&self, g1: f64, g2: f64, horizon: f64) -> BoundInputs<f64> {
        BoundInputs {
            d: 2.0 * g1.hypot(g2),
            d_bar: g1.abs(),
            s_sup: g1.abs() / self.omega,
            s_sup_source: SupSource::Analytic,
            eta: Some(self.kappa),
            r: 1.0,
            horizon,
            kappa: 1.0,
            contractive: true,
            p_coeffs: vec![1.0],
        }
    }
}

pub fn run_example3(config: &ExperimentConfig) -> anyhow::Result<Vec<SweepRow>> {
    let p = &config.parameters;
    let opts = options(config);
    let tau = p.tau();
    let grid: Vec<(f64, f64)> = p
        .omega_grid
        .iter()
        .flat_map(|&w| p.kappa_grid.iter().map(move |&k| (w, k)))
        .collect();
    let rows: Vec<Vec<SweepRow>> = grid
        .par_iter()
        .map(|&(omega, kappa)| -> anyhow::Result<Vec<SweepRow>> {
            let q = DephasedQutrit::new(p.g1, p.g2, omega, kappa);
            let mut times = time_grid(omega, 0.0, p.horizon);
            times.push(tau);
            times.sort_by(f64::total_cmp);
            times.dedup();
            let exact = evolve_grid(&q.generator, 0.0, &times, config.rtol)?;
            let approx = evolve_grid(&q.rwa, 0.0, &times, config.rtol)?;
            let full: Vec<(f64, Superop)> = times
                .iter()
                .zip(exact.iter().zip(&approx))
                .map(|(&t, (a, b))| (t, &a.map - &b.map))
                .collect();
            let projected: Vec<(f64, Superop)> = times
                .iter()
                .zip(exact.iter().zip(&approx))
                .filter(|(&t, _)| t >= tau)
                .map(|(&t, (a, b))| (t, &a.map - &b.map.compose(&q.peripheral)))
                .collect();
            let inputs = q.bound_inputs(p.g1, p.g2, p.horizon);
            let whole = theorem41_bound(&inputs, false, p.horizon)?;
            let window = theorem41_bound_uniform(&inputs, tau)?;
            Ok(vec![
                SweepRow {
                    omega,
                    kappa: Some(kappa),
                    exact_distance: sup_norm(&full, &opts)?.sup,
                    bound: whole.value,
                    equation_tag: whole.equation_tag,
                },
                SweepRow {
                    omega,
                    kappa: Some(kappa),
                    exact_distance: sup_norm(&projected, &opts)?.sup,
                    bound: window.value,
                    equation_tag: window.equation_tag,
                },
            ])
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Distance between `e^{t(κL₀+D)}` and `e^{t(κL₀+D_sec)}` against the secular bound,
/// for each `κ` of the grid. The `omega` column holds the largest Bohr frequency.
pub fn run_redfield(config: &ExperimentConfig, spec: &SystemBathSpec<f64>) -> anyhow::Result<Vec<SweepRow>> {
    let p = &config.parameters;
    let opts = options(config);
    let l0 = hamiltonian_superop(&spec.hamiltonian)?;
    let d = build_redfield(spec)?;
    let sec = build_secular(spec)?.dissipator;
    let bohr = bohr_decompose(&spec.hamiltonian, openrwa::spectral::CLUSTER_TOL)?;
    let omega_max = bohr.frequencies.iter().fold(0.0_f64, |m, w| m.max(w.abs()));
    p.kappa_grid
        .par_iter()
        .map(|&kappa| {
            let fast = l0.scale_re(kappa);
            let redfield = &fast + &d;
            let secular = &fast + &sec;
            let times = time_grid(kappa * omega_max, 0.0, p.horizon);
            let maps: Vec<(f64, Superop)> = times
                .par_iter()
                .map(|&t| Ok((t, &expm(&redfield, t)? - &expm(&secular, t)?)))
                .collect::<openrwa::Result<_>>()?;
            let report = secular_error_bound(spec, kappa, p.horizon, config.norm)?;
            Ok(SweepRow {
                omega: omega_max,
                kappa: Some(kappa),
                exact_distance: sup_norm(&maps, &opts)?.sup,
                bound: report.value,
                equation_tag: report.equation_tag,
            })
        })
        .collect()
}
