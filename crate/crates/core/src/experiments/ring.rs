//! Translational transfer on a uniform ring.
//!
//! The ring `H = −J Σ (c†_j c_{j+1} + h.c.)` is diagonal in plane waves
//! `|k⟩ = N^{−1/2} Σ_j e^{ikj} |j⟩` with `ε(k) = −2J cos k`, and the
//! translation acts as `T_a|k⟩ = e^{−ika}|k⟩`. Around `|k| = π/2` the
//! dispersion is close to `2J|k| − πJ`, so a packet built only from modes on
//! one branch there is carried `a` sites in time `a / 2J` up to a global
//! phase.
//!
//! Every state used here is a Slater determinant whose orbitals are
//! superpositions of plane waves, so overlaps are evaluated in the mode
//! basis: `⟨T_a ψ | U(t) ψ⟩ = det(C† diag(e^{i(k a − ω_k t)}) C)` for the mode
//! coefficient matrix `C`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{validate_times, with_time, FidelityCurve};
use crate::error::{Error, Result};
use crate::evolution::{PureState, SlaterState};
use crate::linalg::{CMatrix, CVector, ONE, ZERO};
use crate::parallel::Execution;
use crate::Complex64;

/// Default halfwidth (radians) of the linear region around `|k| = π/2`.
pub const DEFAULT_LINEAR_HALFWIDTH: f64 = 0.35;
/// Largest Gaussian weight fraction a packet may place outside the linear
/// region.
pub const LEAK_TOL: f64 = 1e-6;
/// Packet support is cut at this many widths from the center.
const PACKET_CUTOFF_SIGMAS: f64 = 4.0;
/// Minimum gap between the last occupied and first empty level of a closed
/// shell.
const SHELL_TOL: f64 = 1e-9;
const REGION_EDGE_TOL: f64 = 1e-12;

/// Chirality of the modes a packet may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `0 < k < π`, moving toward increasing site index.
    #[default]
    Right,
    /// `−π < k < 0`.
    Left,
}

impl Branch {
    fn contains(self, k: f64) -> bool {
        match self {
            Branch::Right => k > 0.0 && k < PI,
            Branch::Left => k < 0.0 && k > -PI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketSpec {
    pub k0: f64,
    pub sigma_k: f64,
    #[serde(default)]
    pub branch: Branch,
}

fn default_delta() -> f64 {
    DEFAULT_LINEAR_HALFWIDTH
}

/// A Fermi sea of `n_f` fermions plus one Gaussian packet orbital, to be
/// translated by `a` sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingExperimentSpec {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "J")]
    pub j: f64,
    pub n_f: usize,
    pub packet: PacketSpec,
    pub a: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    pub times: Vec<f64>,
}

impl RingExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 8 || self.n % 2 == 1 {
            return Err(Error::invalid(format!(
                "ring size must be even and >= 8, got {}",
                self.n
            )));
        }
        if !(self.j > 0.0) || !self.j.is_finite() {
            return Err(Error::invalid(format!(
                "hopping must be positive, got J={}",
                self.j
            )));
        }
        if self.n_f == 0 || self.n_f >= self.n {
            return Err(Error::invalid(format!("need 0 < n_f < N, got n_f={}", self.n_f)));
        }
        let sigma = self.packet.sigma_k;
        if !(sigma > 0.0 && sigma < PI / 2.0) {
            return Err(Error::invalid(format!("need 0 < sigma_k < π/2, got {sigma}")));
        }
        if !self.packet.k0.is_finite() {
            return Err(Error::invalid("packet center must be finite"));
        }
        if self.a == 0 || self.a >= self.n {
            return Err(Error::invalid(format!("need 1 <= a < N, got a={}", self.a)));
        }
        if !(self.delta > 0.0 && self.delta <= PI / 2.0) {
            return Err(Error::invalid(format!(
                "need 0 < delta <= π/2, got {}",
                self.delta
            )));
        }
        validate_times(&self.times)
    }

    /// `a / 2J`
    pub fn transfer_time(&self) -> f64 {
        translation_time(self.a, self.j)
    }
}

/// Time `a / 2J` at which a linear-region packet has moved `a` sites.
pub fn translation_time(a: usize, j: f64) -> f64 {
    a as f64 / (2.0 * j)
}

/// Lattice momenta `k_q = 2πq/N` folded into `(−π, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWaveModes {
    n: usize,
    momenta: Vec<f64>,
}

impl PlaneWaveModes {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!("ring needs at least 3 sites, got N={n}")));
        }
        let momenta = (0..n)
            .map(|q| {
                if 2 * q <= n {
                    2.0 * PI * q as f64 / n as f64
                } else {
                    -2.0 * PI * (n - q) as f64 / n as f64
                }
            })
            .collect();
        Ok(PlaneWaveModes { n, momenta })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    /// Unitary whose column `q` is the plane wave `e^{i k_q j} / √N`.
    pub fn vectors(&self) -> CMatrix {
        let norm = 1.0 / (self.n as f64).sqrt();
        CMatrix::from_fn(self.n, self.n, |site, q| {
            Complex64::from_polar(norm, self.momenta[q] * site as f64)
        })
    }

    /// Exact ring dispersion `−2J cos k` per mode.
    pub fn dispersion(&self, j: f64) -> Vec<f64> {
        self.momenta.iter().map(|k| -2.0 * j * k.cos()).collect()
    }

    /// Linearized dispersion `2J|k| − πJ` on the linear region, exact
    /// elsewhere.
    pub fn effective_dispersion(&self, j: f64, split: &LinearSplit) -> Vec<f64> {
        self.momenta
            .iter()
            .enumerate()
            .map(|(q, k)| {
                if split.is_linear(q) {
                    2.0 * j * k.abs() - PI * j
                } else {
                    -2.0 * j * k.cos()
                }
            })
            .collect()
    }
}

/// Partition of the ring modes into the linear region around `|k| = π/2`
/// and the rest. Entries are mode indices `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSplit {
    pub linear: Vec<usize>,
    pub nonlinear: Vec<usize>,
    mask: Vec<bool>,
}

impl LinearSplit {
    pub fn is_linear(&self, q: usize) -> bool {
        self.mask[q]
    }
}

/// `L = {k : ||k| − π/2| ≤ δ}` (edges inclusive), `NL` its complement.
pub fn classify_linear_region(n: usize, delta: f64) -> Result<LinearSplit> {
    if !(delta > 0.0 && delta <= PI / 2.0) {
        return Err(Error::invalid(format!("need 0 < delta <= π/2, got {delta}")));
    }
    let modes = PlaneWaveModes::new(n)?;
    let mask: Vec<bool> = modes
        .momenta()
        .iter()
        .map(|k| (k.abs() - PI / 2.0).abs() <= delta + REGION_EDGE_TOL)
        .collect();
    let (linear, nonlinear) = (0..n).partition(|&q| mask[q]);
    Ok(LinearSplit {
        linear,
        nonlinear,
        mask,
    })
}

/// Mode indices ordered by ring energy, ties broken by momentum.
fn modes_by_energy(modes: &PlaneWaveModes) -> Vec<usize> {
    let energy = modes.dispersion(1.0);
    let mut order: Vec<usize> = (0..modes.len()).collect();
    order.sort_by(|&a, &b| {
        energy[a]
            .total_cmp(&energy[b])
            .then(modes.momenta()[a].total_cmp(&modes.momenta()[b]))
    });
    order
}

/// Particle numbers whose ground state is non-degenerate.
pub fn closed_shell_fillings(n: usize) -> Result<Vec<usize>> {
    let modes = PlaneWaveModes::new(n)?;
    let energy = modes.dispersion(1.0);
    let order = modes_by_energy(&modes);
    Ok((1..n)
        .filter(|&f| energy[order[f]] - energy[order[f - 1]] > SHELL_TOL)
        .collect())
}

fn fermi_sea_modes(modes: &PlaneWaveModes, n_f: usize) -> Result<Vec<usize>> {
    let n = modes.len();
    if n_f == 0 || n_f >= n {
        return Err(Error::invalid(format!("need 0 < n_f < N, got n_f={n_f}")));
    }
    let energy = modes.dispersion(1.0);
    let order = modes_by_energy(modes);
    if energy[order[n_f]] - energy[order[n_f - 1]] <= SHELL_TOL {
        let closed = closed_shell_fillings(n)?;
        let below = closed.iter().rev().find(|&&f| f < n_f);
        let above = closed.iter().find(|&&f| f > n_f);
        let hint: Vec<String> = below.into_iter().chain(above).map(|f| f.to_string()).collect();
        return Err(Error::config(format!(
            "open shell: levels {n_f} and {} are degenerate at the Fermi energy; \
             nearest closed-shell fillings: {}",
            n_f + 1,
            hint.join(", ")
        )));
    }
    Ok(order[..n_f].to_vec())
}

/// Plane waves of the `n_f` lowest ring levels, as a Slater determinant on
/// the site basis. Open shells are rejected.
pub fn build_fermi_sea(n: usize, n_f: usize) -> Result<SlaterState> {
    let modes = PlaneWaveModes::new(n)?;
    let occupied = fermi_sea_modes(&modes, n_f)?;
    SlaterState::from_columns(&modes.vectors(), &occupied)
}

/// Slater determinant stored as mode coefficients (`N × particles`).
#[derive(Debug, Clone)]
struct ModeSlater {
    coeffs: CMatrix,
}

impl ModeSlater {
    /// `det(C† diag(phases) C)`
    fn phase_overlap(&self, phases: &[Complex64]) -> Complex64 {
        let mut scaled = self.coeffs.clone();
        for (q, mut row) in scaled.row_iter_mut().enumerate() {
            row *= phases[q];
        }
        (self.coeffs.adjoint() * scaled).determinant()
    }

    /// `⟨T_a ψ | U(t) ψ⟩` under the per-mode energies `omega`.
    fn translation_overlap(&self, modes: &PlaneWaveModes, omega: &[f64], a: usize, t: f64) -> Complex64 {
        let phases: Vec<Complex64> = modes
            .momenta()
            .iter()
            .zip(omega)
            .map(|(k, w)| Complex64::from_polar(1.0, k * a as f64 - w * t))
            .collect();
        self.phase_overlap(&phases)
    }

    fn to_sites(&self, modes: &PlaneWaveModes) -> Result<SlaterState> {
        SlaterState::new(modes.vectors() * &self.coeffs)
    }
}

fn packet_orbital(spec: &RingExperimentSpec, modes: &PlaneWaveModes, occupied: &[usize]) -> Result<CVector> {
    let split = classify_linear_region(spec.n, spec.delta)?;
    let PacketSpec { k0, sigma_k, branch } = spec.packet;
    let mut free = vec![true; modes.len()];
    for &q in occupied {
        free[q] = false;
    }
    let candidates: Vec<(usize, f64)> = modes
        .momenta()
        .iter()
        .enumerate()
        .filter(|&(q, &k)| free[q] && branch.contains(k) && (k - k0).abs() <= PACKET_CUTOFF_SIGMAS * sigma_k)
        .map(|(q, &k)| (q, (-(k - k0).powi(2) / (2.0 * sigma_k * sigma_k)).exp()))
        .collect();
    let total: f64 = candidates.iter().map(|(_, w)| w * w).sum();
    if !(total > 0.0) {
        return Err(Error::config(format!(
            "packet support is empty: no unoccupied {branch:?}-branch mode within {PACKET_CUTOFF_SIGMAS}σ of k0={k0}"
        )));
    }
    let leak: f64 = candidates
        .iter()
        .filter(|(q, _)| !split.is_linear(*q))
        .map(|(_, w)| w * w)
        .sum::<f64>()
        / total;
    if leak > LEAK_TOL {
        return Err(Error::config(format!(
            "packet places weight {leak:e} outside the linear region (delta={})",
            spec.delta
        )));
    }
    let mut v = CVector::from_element(modes.len(), ZERO);
    for &(q, w) in candidates.iter().filter(|(q, _)| split.is_linear(*q)) {
        v[q] = Complex64::new(w, 0.0);
    }
    let norm = v.norm();
    if !(norm > 0.0) {
        return Err(Error::config("packet support inside the linear region is empty"));
    }
    Ok(v / Complex64::new(norm, 0.0))
}

fn packet_state(spec: &RingExperimentSpec) -> Result<(PlaneWaveModes, ModeSlater)> {
    spec.validate()?;
    let modes = PlaneWaveModes::new(spec.n)?;
    let occupied = fermi_sea_modes(&modes, spec.n_f)?;
    let packet = packet_orbital(spec, &modes, &occupied)?;
    let mut coeffs = CMatrix::from_element(spec.n, spec.n_f + 1, ZERO);
    for (col, &q) in occupied.iter().enumerate() {
        coeffs[(q, col)] = ONE;
    }
    coeffs.set_column(spec.n_f, &packet);
    Ok((modes, ModeSlater { coeffs }))
}

/// Fermi sea plus one Gaussian packet orbital on the site basis.
///
/// The packet uses unoccupied modes of the chosen branch within
/// `4σ_k` of `k0`; it is rejected if more than [`LEAK_TOL`] of that
/// Gaussian weight falls outside the linear region.
pub fn build_surface_packet(spec: &RingExperimentSpec) -> Result<SlaterState> {
    let (modes, state) = packet_state(spec)?;
    state.to_sites(&modes)
}

/// Fidelity to `T_a ψ(0)` along the grid, with `a / 2J` always included.
pub fn run_ring_translation(spec: &RingExperimentSpec) -> Result<FidelityCurve> {
    run_ring_translation_with(spec, Execution::default())
}

pub fn run_ring_translation_with(spec: &RingExperimentSpec, exec: Execution) -> Result<FidelityCurve> {
    let (modes, state) = packet_state(spec)?;
    let omega = modes.dispersion(spec.j);
    let times = with_time(&spec.times, spec.transfer_time());
    let values = exec.map(&times, |&t| {
        state.translation_overlap(&modes, &omega, spec.a, t).norm()
    });
    Ok(FidelityCurve::new(times, values))
}

/// As [`run_ring_translation`] but evolving with the linearized dispersion
/// `2J|k| − πJ` on the linear region.
pub fn run_effective_translation(spec: &RingExperimentSpec) -> Result<FidelityCurve> {
    run_effective_translation_with(spec, Execution::default())
}

pub fn run_effective_translation_with(spec: &RingExperimentSpec, exec: Execution) -> Result<FidelityCurve> {
    let (modes, state) = packet_state(spec)?;
    let split = classify_linear_region(spec.n, spec.delta)?;
    let omega = modes.effective_dispersion(spec.j, &split);
    let times = with_time(&spec.times, spec.transfer_time());
    let values = exec.map(&times, |&t| {
        state.translation_overlap(&modes, &omega, spec.a, t).norm()
    });
    Ok(FidelityCurve::new(times, values))
}

/// Exact versus linearized evolution at `τ = a / 2J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveModelReport {
    pub tau: f64,
    pub fidelity_exact_vs_target: f64,
    pub fidelity_effective_vs_target: f64,
    /// `|⟨ψ_exact(τ)|ψ_eff(τ)⟩|`
    pub model_agreement: f64,
    /// Phase with `T_a ψ(0) = e^{iθ} ψ_eff(τ)` (meaningful when the
    /// effective fidelity is 1).
    pub theta: f64,
}

pub fn effective_hamiltonian_fidelity(spec: &RingExperimentSpec) -> Result<EffectiveModelReport> {
    let (modes, state) = packet_state(spec)?;
    let split = classify_linear_region(spec.n, spec.delta)?;
    let exact = modes.dispersion(spec.j);
    let effective = modes.effective_dispersion(spec.j, &split);
    let tau = spec.transfer_time();
    let exact_overlap = state.translation_overlap(&modes, &exact, spec.a, tau);
    let effective_overlap = state.translation_overlap(&modes, &effective, spec.a, tau);
    let agreement_phases: Vec<Complex64> = exact
        .iter()
        .zip(&effective)
        .map(|(e, f)| Complex64::from_polar(1.0, (e - f) * tau))
        .collect();
    let model_agreement = state.phase_overlap(&agreement_phases).norm();
    Ok(EffectiveModelReport {
        tau,
        fidelity_exact_vs_target: exact_overlap.norm().min(1.0),
        fidelity_effective_vs_target: effective_overlap.norm().min(1.0),
        model_agreement: model_agreement.min(1.0),
        theta: -effective_overlap.arg(),
    })
}

fn wrapped(dk: f64) -> f64 {
    (dk + PI).rem_euclid(2.0 * PI) - PI
}

fn gaussian_coefficients(modes: &PlaneWaveModes, k0: f64, sigma_k: f64) -> Result<CVector> {
    if !(sigma_k > 0.0) {
        return Err(Error::invalid(format!("sigma_k must be positive, got {sigma_k}")));
    }
    let v = CVector::from_iterator(
        modes.len(),
        modes.momenta().iter().map(|&k| {
            let d = wrapped(k - k0);
            Complex64::new((-d * d / (2.0 * sigma_k * sigma_k)).exp(), 0.0)
        }),
    );
    let norm = v.norm();
    if !(norm > 0.0) {
        return Err(Error::config(format!(
            "Gaussian of width {sigma_k} around k0={k0} misses every lattice momentum"
        )));
    }
    Ok(v / Complex64::new(norm, 0.0))
}

/// Single-particle Gaussian packet over all ring momenta, centered at site 0.
pub fn gaussian_packet(n: usize, k0: f64, sigma_k: f64) -> Result<PureState> {
    let modes = PlaneWaveModes::new(n)?;
    let coeffs = gaussian_coefficients(&modes, k0, sigma_k)?;
    PureState::normalized(modes.vectors() * coeffs)
}

/// Circular mean position of `|ψ_j|²` in site units, in `(−N/2, N/2]`.
pub fn center_of_mass(psi: &PureState) -> f64 {
    let n = psi.dim() as f64;
    let phasor: Complex64 = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(j, a)| Complex64::from_polar(a.norm_sqr(), 2.0 * PI * j as f64 / n))
        .sum();
    phasor.arg() * n / (2.0 * PI)
}

/// One Gaussian packet on an otherwise empty ring, scored against its
/// translation by `a` sites. `a / 2J` is appended to the grid.
pub fn baseline_single_particle(
    n: usize,
    j: f64,
    k0: f64,
    sigma_k: f64,
    a: usize,
    times: &[f64],
) -> Result<FidelityCurve> {
    baseline_single_particle_with(n, j, k0, sigma_k, a, times, Execution::default())
}

pub fn baseline_single_particle_with(
    n: usize,
    j: f64,
    k0: f64,
    sigma_k: f64,
    a: usize,
    times: &[f64],
    exec: Execution,
) -> Result<FidelityCurve> {
    if !(j > 0.0) {
        return Err(Error::invalid(format!("hopping must be positive, got J={j}")));
    }
    if a == 0 || a >= n {
        return Err(Error::invalid(format!("need 1 <= a < N, got a={a}")));
    }
    validate_times(times)?;
    let modes = PlaneWaveModes::new(n)?;
    let coeffs = gaussian_coefficients(&modes, k0, sigma_k)?;
    let state = ModeSlater {
        coeffs: CMatrix::from_column_slice(n, 1, coeffs.as_slice()),
    };
    let omega = modes.dispersion(j);
    let times = with_time(times, translation_time(a, j));
    let values = exec.map(&times, |&t| {
        state.translation_overlap(&modes, &omega, a, t).norm()
    });
    Ok(FidelityCurve::new(times, values))
}
