use num_complex::Complex64;
use openrwa::norms::diamond_qubit_subunital;
use openrwa::propagate::evolve_grid;
use openrwa::superop::matrix_unit;
use openrwa::{Matrix, Superop};
use openrwa_cli::experiments::{run_example1, run_example2, run_example3, run_redfield, DephasedQutrit, DrivenQubit};
use openrwa_cli::measure::time_grid;
use openrwa_cli::{ExampleKind, ExperimentConfig};
use openrwa::redfield::{GammaEntry, SystemBathSpec};

fn qubit_config(example: ExampleKind, g: f64, gamma: f64, omegas: &[f64]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::for_example(example);
    cfg.parameters.g = g;
    cfg.parameters.gamma = gamma;
    cfg.parameters.omega_grid = omegas.to_vec();
    cfg
}

#[test]
fn undriven_qubit_has_zero_distance_and_bound() {
    let rows = run_example1(&qubit_config(ExampleKind::Ex1, 0.0, 1.0, &[10.0, 50.0])).unwrap();
    for r in rows {
        assert_eq!(r.bound, 0.0);
        assert!(r.exact_distance < 1e-8, "{}", r.exact_distance);
    }
}

#[test]
fn noiseless_transverse_example_reduces_to_first() {
    let omegas = [10.0, 40.0];
    let a = run_example1(&qubit_config(ExampleKind::Ex1, 1.0, 0.0, &omegas)).unwrap();
    let b = run_example2(&qubit_config(ExampleKind::Ex2, 1.0, 0.0, &omegas)).unwrap();
    assert_eq!(a, b);
}

type C2 = [[Complex64; 2]; 2];

fn mul(a: &C2, b: &C2) -> C2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn axpy(y: &C2, h: f64, k: &C2) -> C2 {
    let mut out = *y;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] += k[i][j] * h;
        }
    }
    out
}

/// `U' = −iH(t)U` for `H(t) = ωZ/2 + g cos(ωt) X`, fourth-order Runge-Kutta with a fixed step.
fn schrodinger(g: f64, omega: f64, times: &[f64], step: f64) -> Vec<C2> {
    let minus_i = Complex64::new(0.0, -1.0);
    let rhs = |t: f64, u: &C2| {
        let c = g * (omega * t).cos();
        let h = [
            [Complex64::new(omega / 2.0, 0.0), Complex64::new(c, 0.0)],
            [Complex64::new(c, 0.0), Complex64::new(-omega / 2.0, 0.0)],
        ];
        let hu = mul(&h, u);
        [[hu[0][0] * minus_i, hu[0][1] * minus_i], [hu[1][0] * minus_i, hu[1][1] * minus_i]]
    };
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut u = [[one, zero], [zero, one]];
    let mut t = 0.0;
    let mut out = Vec::new();
    for &target in times {
        while t < target {
            let h = step.min(target - t);
            let k1 = rhs(t, &u);
            let k2 = rhs(t + h / 2.0, &axpy(&u, h / 2.0, &k1));
            let k3 = rhs(t + h / 2.0, &axpy(&u, h / 2.0, &k2));
            let k4 = rhs(t + h, &axpy(&u, h, &k3));
            for i in 0..2 {
                for j in 0..2 {
                    u[i][j] += (k1[i][j] + k2[i][j] * 2.0 + k3[i][j] * 2.0 + k4[i][j]) * (h / 6.0);
                }
            }
            t += h;
        }
        out.push(u);
    }
    out
}

/// `‖U·U† − V·V†‖◇ = 2√(1 − ν²)` with `ν` the distance from the origin to the
/// numerical range of `W = U†V`; for a qubit that range is the chord between
/// its two eigenvalues.
fn unitary_channel_distance(w: &C2) -> f64 {
    let tr = w[0][0] + w[1][1];
    let det = w[0][0] * w[1][1] - w[0][1] * w[1][0];
    let disc = (tr * tr - det * 4.0).sqrt();
    let (l1, l2) = ((tr + disc) / 2.0, (tr - disc) / 2.0);
    let gap = (l1 / l2).arg().abs();
    let nu = if gap >= std::f64::consts::PI { 0.0 } else { (gap / 2.0).cos() };
    2.0 * (1.0 - nu * nu).max(0.0).sqrt()
}

#[test]
fn noiseless_distance_matches_unitary_oracle() {
    let g = 1.0;
    for omega in [20.0, 40.0] {
        let rows = run_example1(&qubit_config(ExampleKind::Ex1, g, 0.0, &[omega])).unwrap();
        let times = time_grid(omega, 0.0, 5.0);
        let exact = schrodinger(g, omega, &times, 1e-4);
        let mut sup: f64 = 0.0;
        for (t, u) in times.iter().zip(&exact) {
            // RWA unitary e^{−iωtZ/2} e^{−igtX/2}
            let (a, b) = (omega * t / 2.0, g * t / 2.0);
            let rz = [
                [Complex64::from_polar(1.0, -a), Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, a)],
            ];
            let rx = [
                [Complex64::new(b.cos(), 0.0), Complex64::new(0.0, -b.sin())],
                [Complex64::new(0.0, -b.sin()), Complex64::new(b.cos(), 0.0)],
            ];
            let v = mul(&rz, &rx);
            let u_dag = [[u[0][0].conj(), u[1][0].conj()], [u[0][1].conj(), u[1][1].conj()]];
            sup = sup.max(unitary_channel_distance(&mul(&u_dag, &v)));
        }
        assert!((rows[0].exact_distance - sup).abs() < 1e-8, "omega = {omega}: {} vs {sup}", rows[0].exact_distance);
    }
}

/// `ρ ↦ P₁Φ(ρ)P₁` restricted to the `{0, 1}` block, as a qubit superoperator.
fn compress(phi: &Superop) -> Superop {
    let embed = |rho: &Matrix| Matrix::from_fn(3, 3, |i, j| if i < 2 && j < 2 { rho[(i, j)] } else { Complex64::new(0.0, 0.0) });
    Superop::from_action(2, |rho| {
        let out = phi.apply(&embed(rho)).unwrap();
        Matrix::from_fn(2, 2, |i, j| out[(i, j)])
    })
}

#[test]
fn uncoupled_third_level_leaves_a_driven_qubit() {
    let (omega, kappa) = (30.0, 100.0);
    let q = DephasedQutrit::new(1.0, 0.0, omega, kappa);
    let qubit = DrivenQubit::example1(1.0, 0.0, omega);
    let times = time_grid(omega, 0.0, 2.0);
    let exact = evolve_grid(&q.generator, 0.0, &times, 1e-10).unwrap();
    let approx = evolve_grid(&q.rwa, 0.0, &times, 1e-10).unwrap();
    let reference = qubit.differences(&times, 1e-10).unwrap();
    // The block Hamiltonian is ω|1⟩⟨1| = ω(1 − Z)/2, the mirror image of the qubit example under X.
    let x = openrwa::superop::pauli::<f64>()[0].clone();
    let flip = Superop::sandwich(&x, &x).unwrap();
    let leak = matrix_unit::<f64>(3, 2, 2);
    for ((a, b), (_, diff)) in exact.iter().zip(&approx).zip(&reference) {
        let block = &compress(&a.map) - &compress(&b.map);
        let mirrored = flip.compose(diff).compose(&flip);
        assert!((&block - &mirrored).matrix().max_abs() < 1e-8);
        let d_block = diamond_qubit_subunital(&block).unwrap();
        let d_ref = diamond_qubit_subunital(diff).unwrap();
        assert!((d_block - d_ref).abs() < 1e-8);
        let population = a.map.apply(&matrix_unit(3, 0, 0)).unwrap();
        assert!(population.hs_inner(&leak).norm() < 1e-12);
    }
}

#[test]
fn qutrit_rows_match_closed_forms() {
    let mut cfg = ExperimentConfig::for_example(ExampleKind::Ex3);
    cfg.parameters.omega_grid = vec![200.0];
    cfg.parameters.kappa_grid = vec![200.0];
    cfg.parameters.horizon = 3.0;
    cfg.parameters.tau = Some(0.1);
    let rows = run_example3(&cfg).unwrap();
    assert_eq!(rows.len(), 2);
    // S = 1/ω, D = 2√2, D̄ = 1, R/(κη) = 1/κ; the window transient e^{−κτ} is below 1e-8.
    let (s, d, decay) = (1.0 / 200.0, 2.0 * 2f64.sqrt(), 1.0 / 200.0);
    let growth = 1.0 + 3.0 * (d + 1.0);
    let contractive = rows.iter().find(|r| r.equation_tag.as_str() == "contractive").unwrap();
    assert!((contractive.bound - (s + 2.0 * d * decay) * growth).abs() < 1e-14);
    let window = rows.iter().find(|r| r.equation_tag.as_str() == "contractive_peripheral").unwrap();
    assert!((window.bound - ((s + d * decay) * growth + d * decay)).abs() < 1e-8);
    assert!(rows.iter().all(|r| r.dominated() && r.exact_distance > 0.0));
}

fn bath_spec(scale: f64) -> SystemBathSpec<f64> {
    let [x, _, z] = openrwa::superop::pauli::<f64>();
    let entry = |omega, re, im| GammaEntry { alpha: 0, beta: 0, omega, value: Complex64::new(scale * re, scale * im) };
    SystemBathSpec::new(
        z.scale_re(0.5),
        vec![x],
        vec![entry(1.0, 0.5, 0.1), entry(-1.0, 0.2, -0.05), entry(0.0, 0.3, 0.0)],
    )
    .unwrap()
}

fn redfield_config(kappas: &[f64]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::for_example(ExampleKind::Redfield);
    cfg.parameters.kappa_grid = kappas.to_vec();
    cfg
}

#[test]
fn zero_bath_rows_vanish() {
    let rows = run_redfield(&redfield_config(&[10.0, 30.0]), &bath_spec(0.0)).unwrap();
    for r in rows {
        assert_eq!(r.bound, 0.0);
        assert_eq!(r.exact_distance, 0.0);
    }
}

#[test]
fn redfield_sweep_distances_fall_and_bounds_halve() {
    let rows = run_redfield(&redfield_config(&[10.0, 20.0, 30.0, 100.0, 300.0]), &bath_spec(1.0)).unwrap();
    assert!((rows[1].bound / rows[0].bound - 0.5).abs() < 1e-12);
    let kappas: Vec<f64> = rows.iter().map(|r| r.kappa.unwrap()).collect();
    assert_eq!(kappas, vec![10.0, 20.0, 30.0, 100.0, 300.0]);
    for w in rows.windows(2) {
        assert!(w[1].exact_distance < w[0].exact_distance);
    }
    for r in &rows {
        let ratio = r.bound / r.exact_distance;
        assert!(ratio.is_finite() && ratio >= 1.0, "kappa = {:?}: ratio {ratio}", r.kappa);
    }
}
