//! Redfield generators built from Bohr-frequency data, and their secular (GKLS) limit.
//!
//! Bath input is a table of half-sided Fourier transforms `Γ_{αβ}(ω)`, one entry
//! per coupling pair and Bohr frequency of the system Hamiltonian.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bounds::{pinching_dz, strong_coupling_bound_with, BoundReport};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianEigen};
use crate::norms::NormKind;
use crate::scalar::{c, Real, C};
use crate::spectral::{decay_constants, spectral_decompose, CLUSTER_TOL};
use crate::superop::{hamiltonian_superop, Superoperator};

/// Eigenprojections of `H` and the superoperators `𝒫_j ρ = Σ_{ε_m−ε_n=ω_j} P_m ρ P_n`.
#[derive(Clone, Debug)]
pub struct BohrDecomposition<T> {
    pub energies: Vec<T>,
    pub projections: Vec<ComplexMatrix<T>>,
    /// Distinct Bohr frequencies in ascending order, symmetric about zero.
    pub frequencies: Vec<T>,
    pub components: Vec<Superoperator<T>>,
    pub cluster_tol: T,
    pairs: Vec<Vec<(usize, usize)>>,
}

impl<T: Real> BohrDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.projections.first().map_or(0, |p| p.rows())
    }

    /// `A(ω_j)`.
    pub fn component(&self, a: &ComplexMatrix<T>, j: usize) -> ComplexMatrix<T> {
        let mut out = ComplexMatrix::zeros(a.rows(), a.cols());
        for &(m, n) in &self.pairs[j] {
            out += &self.projections[m].matmul(a).matmul(&self.projections[n]);
        }
        out
    }

    /// Index of the frequency within `cluster_tol` of `omega`.
    pub fn index_of(&self, omega: T) -> Option<usize> {
        let scale = T::one().max(self.frequencies.iter().fold(T::zero(), |m, w| m.max(w.abs())));
        self.frequencies
            .iter()
            .position(|w| (*w - omega).abs() <= self.cluster_tol * scale)
    }

    /// Index of `−ω_j`.
    pub fn negative(&self, j: usize) -> usize {
        self.frequencies.len() - 1 - j
    }
}

/// Single-linkage clustering of sorted reals.
fn cluster_sorted<T: Real>(sorted: &[T], tol: T) -> Vec<std::ops::Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > tol {
            groups.push(start..i);
            start = i;
        }
    }
    groups
}

pub fn bohr_decompose<T: Real>(h: &ComplexMatrix<T>, cluster_tol: T) -> Result<BohrDecomposition<T>> {
    h.require_hermitian()?;
    let eig = HermitianEigen::new(h)?;
    let d = h.rows();
    let spread = T::one().max(eig.values.iter().fold(T::zero(), |m, v| m.max(v.abs())));
    let tol = cluster_tol.max(T::tol(0.0)) * spread;

    let mut energies = Vec::new();
    let mut projections = Vec::new();
    for range in cluster_sorted(&eig.values, tol) {
        let k = T::lit(range.len() as f64);
        energies.push(eig.values[range.clone()].iter().copied().sum::<T>() / k);
        let mut p = ComplexMatrix::zeros(d, d);
        for col in range {
            let v = eig.vectors.col(col);
            p += &ComplexMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj());
        }
        projections.push(p);
    }

    let mut diffs: Vec<(T, usize, usize)> = Vec::new();
    for (m, em) in energies.iter().enumerate() {
        for (n, en) in energies.iter().enumerate() {
            diffs.push((*em - *en, m, n));
        }
    }
    diffs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let values: Vec<T> = diffs.iter().map(|x| x.0).collect();
    let groups = cluster_sorted(&values, tol);
    let mut frequencies: Vec<T> = groups
        .iter()
        .map(|r| values[r.clone()].iter().copied().sum::<T>() / T::lit(r.len() as f64))
        .collect();
    let nf = frequencies.len();
    let symmetric: Vec<T> = (0..nf)
        .map(|j| (frequencies[j] - frequencies[nf - 1 - j]) * T::lit(0.5))
        .collect();
    frequencies = symmetric;
    let pairs: Vec<Vec<(usize, usize)>> = groups
        .iter()
        .map(|r| diffs[r.clone()].iter().map(|x| (x.1, x.2)).collect())
        .collect();
    let components = pairs
        .iter()
        .map(|ps| {
            let mut s = Superoperator::zero(d);
            for &(m, n) in ps {
                let piece = Superoperator::sandwich(&projections[m], &projections[n])
                    .expect("projections share the dimension of H");
                s.axpy(C::one(), &piece);
            }
            s
        })
        .collect();
    Ok(BohrDecomposition {
        energies,
        projections,
        frequencies,
        components,
        cluster_tol: tol / spread,
        pairs,
    })
}

/// One entry `Γ_{αβ}(ω)` of the bath table.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaEntry<T> {
    pub alpha: usize,
    pub beta: usize,
    pub omega: T,
    pub value: C<T>,
}

#[derive(Clone, Debug)]
pub struct SystemBathSpec<T> {
    pub hamiltonian: ComplexMatrix<T>,
    pub couplings: Vec<ComplexMatrix<T>>,
    pub gamma: Vec<GammaEntry<T>>,
}

#[derive(Serialize, Deserialize)]
struct GammaRecord {
    alpha: usize,
    beta: usize,
    omega: f64,
    value: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct SpecFile {
    hamiltonian: Vec<Vec<[f64; 2]>>,
    couplings: Vec<Vec<Vec<[f64; 2]>>>,
    gamma: Vec<GammaRecord>,
}

fn matrix_from_pairs<T: Real>(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix<T>> {
    let rows: Vec<Vec<C<T>>> = rows
        .iter()
        .map(|r| r.iter().map(|[re, im]| c(T::lit(*re), T::lit(*im))).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

fn matrix_to_pairs<T: Real>(m: &ComplexMatrix<T>) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re.as_f64(), m[(i, j)].im.as_f64()]).collect())
        .collect()
}

/// `Γ_{αβ}(ω_j)` arranged as one coupling-space matrix per Bohr frequency.
#[derive(Clone, Debug)]
pub struct ResolvedBath<T> {
    pub bohr: BohrDecomposition<T>,
    pub gamma: Vec<ComplexMatrix<T>>,
}

impl<T: Real> SystemBathSpec<T> {
    pub fn new(
        hamiltonian: ComplexMatrix<T>,
        couplings: Vec<ComplexMatrix<T>>,
        gamma: Vec<GammaEntry<T>>,
    ) -> Result<Self> {
        let spec = Self { hamiltonian, couplings, gamma };
        spec.validate()?;
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SpecFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let hamiltonian = matrix_from_pairs(&raw.hamiltonian)?;
        let couplings = raw
            .couplings
            .iter()
            .map(|m| matrix_from_pairs(m))
            .collect::<Result<Vec<_>>>()?;
        let gamma = raw
            .gamma
            .iter()
            .map(|g| GammaEntry {
                alpha: g.alpha,
                beta: g.beta,
                omega: T::lit(g.omega),
                value: c(T::lit(g.value[0]), T::lit(g.value[1])),
            })
            .collect();
        Self::new(hamiltonian, couplings, gamma)
    }

    pub fn to_json(&self) -> String {
        let raw = SpecFile {
            hamiltonian: matrix_to_pairs(&self.hamiltonian),
            couplings: self.couplings.iter().map(matrix_to_pairs).collect(),
            gamma: self
                .gamma
                .iter()
                .map(|g| GammaRecord {
                    alpha: g.alpha,
                    beta: g.beta,
                    omega: g.omega.as_f64(),
                    value: [g.value.re.as_f64(), g.value.im.as_f64()],
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.hamiltonian.require_hermitian()?;
        let d = self.dim();
        for s in &self.couplings {
            if s.rows() != d || s.cols() != d {
                return Err(Error::DimensionMismatch { expected: d, found: s.rows() });
            }
            s.require_hermitian()?;
        }
        let n = self.couplings.len();
        if let Some(g) = self.gamma.iter().find(|g| g.alpha >= n || g.beta >= n) {
            return Err(Error::InvalidArgument(format!(
                "gamma entry ({}, {}) refers to a missing coupling; there are {n}",
                g.alpha, g.beta
            )));
        }
        if self.gamma.iter().any(|g| !g.value.re.is_finite() || !g.value.im.is_finite()) {
            return Err(Error::NonFinite("gamma value"));
        }
        Ok(())
    }

    /// Matches every table entry to a Bohr frequency of `H`.
    pub fn resolve(&self, cluster_tol: T) -> Result<ResolvedBath<T>> {
        let bohr = bohr_decompose(&self.hamiltonian, cluster_tol)?;
        let n = self.couplings.len();
        let nf = bohr.frequencies.len();
        let mut seen = vec![vec![vec![false; n]; n]; nf];
        let mut gamma = vec![ComplexMatrix::zeros(n, n); nf];
        for g in &self.gamma {
            let j = bohr
                .index_of(g.omega)
                .ok_or(Error::UnknownFrequency { omega: g.omega.as_f64() })?;
            if seen[j][g.alpha][g.beta] {
                return Err(Error::InvalidArgument(format!(
                    "duplicate gamma entry ({}, {}) at omega = {}",
                    g.alpha, g.beta, g.omega
                )));
            }
            seen[j][g.alpha][g.beta] = true;
            gamma[j].as_mut_slice()[g.alpha * n + g.beta] = g.value;
        }
        for (j, w) in bohr.frequencies.iter().enumerate() {
            for a in 0..n {
                for b in 0..n {
                    if !seen[j][a][b] {
                        return Err(Error::MissingGamma { alpha: a, beta: b, omega: w.as_f64() });
                    }
                }
            }
        }
        Ok(ResolvedBath { bohr, gamma })
    }
}

/// `E_α = Σ_{β,k} Γ_{αβ}(ω_k) S_β(ω_k)`.
fn bath_operators<T: Real>(spec: &SystemBathSpec<T>, bath: &ResolvedBath<T>) -> Vec<ComplexMatrix<T>> {
    let d = spec.dim();
    let n = spec.couplings.len();
    let comps: Vec<Vec<ComplexMatrix<T>>> = spec
        .couplings
        .iter()
        .map(|s| (0..bath.bohr.frequencies.len()).map(|k| bath.bohr.component(s, k)).collect())
        .collect();
    (0..n)
        .map(|a| {
            let mut e = ComplexMatrix::zeros(d, d);
            for (k, g) in bath.gamma.iter().enumerate() {
                for (b, sb) in comps.iter().enumerate() {
                    e.axpy(g[(a, b)], &sb[k]);
                }
            }
            e
        })
        .collect()
}

/// Dissipative part `Dρ = Σ_α [S_α, ρE_α† − E_αρ]` of the Redfield generator.
pub fn build_redfield<T: Real>(spec: &SystemBathSpec<T>) -> Result<Superoperator<T>> {
    let bath = spec.resolve(T::lit(CLUSTER_TOL))?;
    Ok(redfield_from(spec, &bath))
}

fn redfield_from<T: Real>(spec: &SystemBathSpec<T>, bath: &ResolvedBath<T>) -> Superoperator<T> {
    let d = spec.dim();
    let mut out = Superoperator::zero(d);
    for (s, e) in spec.couplings.iter().zip(bath_operators(spec, bath)) {
        let ed = e.adjoint();
        let parts = [
            (C::one(), Superoperator::sandwich(s, &ed)),
            (-C::one(), Superoperator::left(&s.matmul(&e))),
            (-C::one(), Superoperator::right(&ed.matmul(s))),
            (C::one(), Superoperator::sandwich(&e, s)),
        ];
        for (sign, op) in parts {
            out.axpy(sign, &op.expect("couplings share the dimension of H"));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct SecularGenerator<T> {
    pub dissipator: Superoperator<T>,
    pub lamb_shift: ComplexMatrix<T>,
    /// `(ω_j, γ(ω_j))` with `γ_{αβ} = Γ_{αβ} + Γ*_{βα}`.
    pub gamma_matrices: Vec<(T, ComplexMatrix<T>)>,
    /// `‖[H_LS, H]‖_F`.
    pub commutator_residual: T,
}

/// Secular generator `D_sec = −i[H_LS, ·] − ½ Σ γ_{αβ}(ω)({S_α†(ω)S_β(ω), ·} − 2 S_β(ω) · S_α†(ω))`.
pub fn build_secular<T: Real>(spec: &SystemBathSpec<T>) -> Result<SecularGenerator<T>> {
    let bath = spec.resolve(T::lit(CLUSTER_TOL))?;
    Ok(secular_from(spec, &bath))
}

fn secular_from<T: Real>(spec: &SystemBathSpec<T>, bath: &ResolvedBath<T>) -> SecularGenerator<T> {
    let d = spec.dim();
    let n = spec.couplings.len();
    let half = T::lit(0.5);
    let mut lamb = ComplexMatrix::zeros(d, d);
    let mut dissipator = Superoperator::zero(d);
    let mut gamma_matrices = Vec::with_capacity(bath.gamma.len());
    for (j, g) in bath.gamma.iter().enumerate() {
        let gd = g.adjoint();
        let gamma = g + &gd;
        let sigma = (g - &gd).scale(c(T::zero(), -half));
        let comps: Vec<ComplexMatrix<T>> =
            spec.couplings.iter().map(|s| bath.bohr.component(s, j)).collect();
        for a in 0..n {
            let sad = comps[a].adjoint();
            for b in 0..n {
                let prod = sad.matmul(&comps[b]);
                lamb.axpy(sigma[(a, b)], &prod);
                let rate = gamma[(a, b)];
                let anti = Superoperator::anticommutator(&prod).expect("same dimension");
                let jump = Superoperator::sandwich(&comps[b], &sad).expect("same dimension");
                dissipator.axpy(rate * (-half), &anti);
                dissipator.axpy(rate, &jump);
            }
        }
        gamma_matrices.push((bath.bohr.frequencies[j], gamma));
    }
    let ad = Superoperator::commutator(&lamb).expect("same dimension");
    dissipator.axpy(c(T::zero(), -T::one()), &ad);
    let commutator_residual = lamb.commutator(&spec.hamiltonian).frobenius_norm();
    SecularGenerator {
        dissipator,
        lamb_shift: lamb,
        gamma_matrices,
        commutator_residual,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaPositivity<T> {
    pub omega: T,
    pub min_eigenvalue: T,
    pub positive: bool,
}

/// Smallest eigenvalue of each `γ(ω_j)`; `positive` allows a relative slack of `1e-12`.
pub fn gamma_positivity<T: Real>(spec: &SystemBathSpec<T>) -> Result<Vec<GammaPositivity<T>>> {
    let sec = build_secular(spec)?;
    sec.gamma_matrices
        .iter()
        .map(|(omega, g)| {
            let g = g.hermitian_part();
            let min = if g.rows() == 0 {
                T::zero()
            } else {
                HermitianEigen::new(&g)?.values[0]
            };
            let slack = T::tol(1e-12) * T::one().max(g.frobenius_norm());
            Ok(GammaPositivity {
                omega: *omega,
                min_eigenvalue: min,
                positive: min >= -slack,
            })
        })
        .collect()
}

/// `‖Σ_j 𝒫_j D 𝒫_j − D_sec‖_F` with the pinching taken from the spectral
/// decomposition of `−i[H, ·]`.
pub fn verify_secular_equals_pinching<T: Real>(spec: &SystemBathSpec<T>) -> Result<T> {
    let bath = spec.resolve(T::lit(CLUSTER_TOL))?;
    let d = redfield_from(spec, &bath);
    let sec = secular_from(spec, &bath);
    let sd = spectral_decompose(&hamiltonian_superop(&spec.hamiltonian)?)?;
    Ok((&pinching_dz(&d, &sd) - &sec.dissipator).matrix().frobenius_norm())
}

/// Uniform bound on `‖e^{t(κL₀+D)} − e^{t(κL₀+D_sec)}‖` for `t ∈ [0, T]`.
pub fn secular_error_bound<T: Real>(
    spec: &SystemBathSpec<T>,
    kappa: T,
    horizon: T,
    norm: NormKind,
) -> Result<BoundReport<T>> {
    let bath = spec.resolve(T::lit(CLUSTER_TOL))?;
    let d = redfield_from(spec, &bath);
    let sec = secular_from(spec, &bath);
    let sd = spectral_decompose(&hamiltonian_superop(&spec.hamiltonian)?)?;
    let dc = decay_constants(&sd, norm)?;
    strong_coupling_bound_with(&d, &sec.dissipator, &dc, kappa, horizon, norm)
}
