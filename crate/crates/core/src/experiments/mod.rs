//! Transfer experiments: mirror transfer on engineered lattices and
//! translational transfer of near-Fermi-surface packets on a uniform ring.

mod mirror;
mod ring;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;

pub use mirror::{
    run_many_body_mirror, run_many_body_mirror_with, run_mirror_transfer, run_mirror_transfer_with,
    MirrorCertificate, MirrorExperimentSpec, MirrorInitial, MirrorSystem, MIRROR_TIME,
};
pub use ring::{
    baseline_single_particle, baseline_single_particle_with, build_fermi_sea, build_surface_packet,
    center_of_mass, classify_linear_region, closed_shell_fillings, effective_hamiltonian_fidelity,
    gaussian_packet, run_effective_translation, run_effective_translation_with, run_ring_translation,
    run_ring_translation_with, translation_time, Branch, EffectiveModelReport, LinearSplit, PacketSpec,
    PlaneWaveModes, RingExperimentSpec, DEFAULT_LINEAR_HALFWIDTH, LEAK_TOL,
};

/// Two times closer than this are the same grid point.
const GRID_MERGE_TOL: f64 = 1e-12;

/// Uniform grid description `{t_min, t_max, steps}`; `steps` intervals give
/// `steps + 1` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn new(t_min: f64, t_max: f64, steps: usize) -> Self {
        GridSpec { t_min, t_max, steps }
    }

    pub fn step(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            (self.t_max - self.t_min) / self.steps as f64
        }
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        if !(self.t_min.is_finite() && self.t_max.is_finite()) || self.t_max < self.t_min {
            return Err(Error::invalid(format!(
                "bad time grid [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if self.steps == 0 {
            return Ok(vec![self.t_min]);
        }
        Ok((0..=self.steps)
            .map(|i| self.t_min + self.step() * i as f64)
            .collect())
    }
}

/// Sorted copy of `times` with `extra` inserted unless already present.
pub fn with_time(times: &[f64], extra: f64) -> Vec<f64> {
    let mut out = times.to_vec();
    if !out.iter().any(|t| (t - extra).abs() <= GRID_MERGE_TOL) {
        out.push(extra);
        out.sort_by(f64::total_cmp);
    }
    out
}

pub(crate) fn validate_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::invalid("time grid is empty"));
    }
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("time grid must be finite and ascending"));
    }
    Ok(())
}

/// Fidelity against a fixed target along a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityCurve {
    pub times: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub peak_time: f64,
    pub peak_value: f64,
}

/// JSON sidecar written next to a curve's CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakSummary {
    pub peak_time: f64,
    pub peak_value: f64,
}

impl FidelityCurve {
    pub fn new(times: Vec<f64>, fidelities: Vec<f64>) -> Self {
        let fidelities: Vec<f64> = fidelities.into_iter().map(|f| f.clamp(0.0, 1.0)).collect();
        // first maximum wins on ties
        let (peak_idx, peak_value) =
            fidelities
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |best, (i, f)| if f > best.1 { (i, f) } else { best },
                );
        FidelityCurve {
            peak_time: times[peak_idx],
            peak_value,
            times,
            fidelities,
        }
    }

    /// Fidelity at the grid point closest to `t`.
    pub fn at(&self, t: f64) -> f64 {
        let idx = self
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        self.fidelities[idx]
    }

    pub fn peak(&self) -> PeakSummary {
        PeakSummary {
            peak_time: self.peak_time,
            peak_value: self.peak_value,
        }
    }

    /// CSV with header `t,fidelity`.
    pub fn to_csv(&self) -> String {
        io::two_column_csv(("t", "fidelity"), &self.times, &self.fidelities)
    }
}
