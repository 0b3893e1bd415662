//! JSON run configurations, one document per invocation.

use qst_core::couplings::{ChainEngineering, LatticeEngineering};
use qst_core::experiments::{
    GridSpec, MirrorInitial, PacketSpec, RingExperimentSpec, DEFAULT_LINEAR_HALFWIDTH,
};
use serde::{Deserialize, Serialize};

fn default_hopping() -> f64 {
    1.0
}

fn default_delta() -> f64 {
    DEFAULT_LINEAR_HALFWIDTH
}

fn default_true() -> bool {
    true
}

/// A single-particle Hamiltonian to diagonalize or verify.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemConfig {
    /// `{"kind": "engineered", "N": 6, "m": 0}`
    Engineered(ChainEngineering),
    /// `{"kind": "uniform", "N": 4, "J": 1.0}`
    Uniform {
        #[serde(rename = "N")]
        n: usize,
        #[serde(rename = "J", default = "default_hopping")]
        j: f64,
    },
    /// `{"kind": "lattice", "axes": [{"N": 4, "m": 1}, ...]}`
    Lattice(LatticeEngineering),
    /// `{"kind": "ring", "N": 16, "J": 1.0}`
    Ring {
        #[serde(rename = "N")]
        n: usize,
        #[serde(rename = "J", default = "default_hopping")]
        j: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub system: SystemConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Spmc,
    Ssmc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub system: SystemConfig,
    pub mode: VerifyMode,
    /// Required for `ssmc`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default = "default_true")]
    pub allow_global_phase: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MirrorConfig {
    pub lattice: LatticeEngineering,
    pub initial: MirrorInitial,
    pub grid: GridSpec,
    #[serde(default)]
    pub seed: u64,
}

/// Shared by `ring` and `effective`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingConfig {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "J", default = "default_hopping")]
    pub j: f64,
    pub n_f: usize,
    pub packet: PacketSpec,
    pub a: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    pub grid: GridSpec,
    #[serde(default)]
    pub seed: u64,
}

impl RingConfig {
    pub fn to_spec(&self) -> qst_core::Result<RingExperimentSpec> {
        let spec = RingExperimentSpec {
            n: self.n,
            j: self.j,
            n_f: self.n_f,
            packet: self.packet,
            a: self.a,
            delta: self.delta,
            times: self.grid.times()?,
        };
        spec.validate()?;
        Ok(spec)
    }
}
