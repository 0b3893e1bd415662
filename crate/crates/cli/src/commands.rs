//! Subcommand execution. Each command parses its config, runs the library
//! and returns the JSON outputs plus the files to write.

use std::path::Path;

use qst_core::couplings::{engineered_profile, uniform_profile};
use qst_core::experiments::{
    effective_hamiltonian_fidelity, run_effective_translation, run_mirror_transfer, run_ring_translation,
    FidelityCurve, MirrorExperimentSpec, MIRROR_TIME,
};
use qst_core::hamiltonian::{
    chain_hamiltonian, engineered_middle_gap, engineered_spectrum, lattice_hamiltonian, ring_hamiltonian,
    spectral_decompose, HermitianOperator, HoppingSign, SiteBasis,
};
use qst_core::io::{columns_csv, spectrum_csv, ComplexJson};
use qst_core::symmetry::{eigen_parities, reflection_operator, verify_spmc, verify_ssmc, SymmetryOperator};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{MirrorConfig, RingConfig, SpectrumConfig, SystemConfig, VerifyConfig, VerifyMode};
use crate::output::{sidecar_path, Artifact};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Engineer,
    Spectrum,
    Verify,
    Mirror,
    Ring,
    Effective,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Engineer => "engineer",
            Kind::Spectrum => "spectrum",
            Kind::Verify => "verify",
            Kind::Mirror => "mirror",
            Kind::Ring => "ring",
            Kind::Effective => "effective",
        }
    }
}

/// Anything that maps to exit code 2.
#[derive(Debug)]
pub struct InvalidRun(pub String);

impl From<qst_core::Error> for InvalidRun {
    fn from(e: qst_core::Error) -> Self {
        InvalidRun(e.to_string())
    }
}

impl From<serde_json::Error> for InvalidRun {
    fn from(e: serde_json::Error) -> Self {
        InvalidRun(format!("malformed config: {e}"))
    }
}

pub struct Completed {
    /// Normalized config with the effective seed.
    pub config: Value,
    pub seed: u64,
    pub outputs: Value,
    pub passed: bool,
    pub artifacts: Vec<Artifact>,
}

/// Deterministic part of a run, also used as the JSON sidecar.
#[derive(Debug, Serialize)]
pub struct Payload<'a> {
    pub command: &'a str,
    pub version: &'a str,
    pub seed: u64,
    pub config: &'a Value,
    pub outputs: &'a Value,
}

pub fn execute(
    kind: Kind,
    raw: Value,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<Completed, InvalidRun> {
    match kind {
        Kind::Engineer => engineer(raw, out),
        Kind::Spectrum => spectrum(raw, out),
        Kind::Verify => verify(raw, out),
        Kind::Mirror => mirror(raw, seed, out),
        Kind::Ring => ring(raw, seed, out, false),
        Kind::Effective => ring(raw, seed, out, true),
    }
}

fn parse<T: DeserializeOwned>(raw: Value) -> Result<T, InvalidRun> {
    Ok(serde_json::from_value(raw)?)
}

fn echo<T: Serialize>(config: &T) -> Value {
    serde_json::to_value(config).expect("config types serialize")
}

fn primary(out: Option<&Path>, contents: String) -> Vec<Artifact> {
    out.map(|p| Artifact {
        path: p.to_path_buf(),
        contents,
    })
    .into_iter()
    .collect()
}

fn with_sidecar(kind: Kind, done: Completed, out: Option<&Path>, csv: String) -> Completed {
    let Some(path) = out else { return done };
    let payload = Payload {
        command: kind.name(),
        version: qst_core::VERSION,
        seed: done.seed,
        config: &done.config,
        outputs: &done.outputs,
    };
    let mut sidecar = serde_json::to_string_pretty(&payload).expect("payload serializes");
    sidecar.push('\n');
    let artifacts = vec![
        Artifact {
            path: path.to_path_buf(),
            contents: csv,
        },
        Artifact {
            path: sidecar_path(path),
            contents: sidecar,
        },
    ];
    Completed { artifacts, ..done }
}

fn engineer(raw: Value, out: Option<&Path>) -> Result<Completed, InvalidRun> {
    let eng: qst_core::couplings::ChainEngineering = parse(raw)?;
    eng.validate()?;
    let profile = engineered_profile(eng)?;
    let outputs = json!({ "profile": profile });
    let mut text = serde_json::to_string_pretty(&profile)?;
    text.push('\n');
    Ok(Completed {
        config: echo(&eng),
        seed: 0,
        outputs,
        passed: true,
        artifacts: primary(out, text),
    })
}

/// Hamiltonian of a system plus its mirror reflection where one exists.
fn build_system(system: &SystemConfig) -> Result<(HermitianOperator, Option<SymmetryOperator>), InvalidRun> {
    Ok(match system {
        SystemConfig::Engineered(eng) => {
            eng.validate()?;
            let h = chain_hamiltonian(&engineered_profile(*eng)?, HoppingSign::Positive)?;
            (h, Some(reflection_operator(&SiteBasis::new(&[eng.n])?)))
        }
        SystemConfig::Uniform { n, j } => {
            let h = chain_hamiltonian(&uniform_profile(*n, *j)?, HoppingSign::Positive)?;
            (h, Some(reflection_operator(&SiteBasis::new(&[*n])?)))
        }
        SystemConfig::Lattice(lattice) => {
            lattice.validate()?;
            (
                lattice_hamiltonian(lattice)?,
                Some(reflection_operator(&lattice.basis())),
            )
        }
        SystemConfig::Ring { n, j } => (ring_hamiltonian(*n, *j)?, None),
    })
}

fn spectrum(raw: Value, out: Option<&Path>) -> Result<Completed, InvalidRun> {
    let config: SpectrumConfig = parse(raw)?;
    let (h, _) = build_system(&config.system)?;
    let eigenvalues = spectral_decompose(&h)?.eigenvalues;
    let mut outputs = json!({ "dim": eigenvalues.len(), "eigenvalues": eigenvalues });
    if let SystemConfig::Engineered(eng) = &config.system {
        let closed = engineered_spectrum(*eng)?;
        let deviation = closed
            .iter()
            .zip(&eigenvalues)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        outputs["closed_form"] = json!(closed);
        outputs["max_deviation"] = json!(deviation);
        outputs["middle_gap"] = json!(engineered_middle_gap(*eng)?);
    }
    let csv = spectrum_csv(&eigenvalues);
    let done = Completed {
        config: echo(&config),
        seed: 0,
        outputs,
        passed: true,
        artifacts: Vec::new(),
    };
    Ok(with_sidecar(Kind::Spectrum, done, out, csv))
}

fn verify(raw: Value, out: Option<&Path>) -> Result<Completed, InvalidRun> {
    let config: VerifyConfig = parse(raw)?;
    let (h, reflection) = build_system(&config.system)?;
    let reflection = reflection
        .ok_or_else(|| InvalidRun("verify needs a chain or lattice system with a mirror".into()))?;
    let decomposition = spectral_decompose(&h)?;
    let table = eigen_parities(&decomposition, &reflection)?;
    let eigenvalues = &table.basis.eigenvalues;
    let (outputs, passed) = match config.mode {
        VerifyMode::Spmc => {
            let report = verify_spmc(eigenvalues, &table.real_parities())?;
            let pass = report.pass;
            (
                json!({ "mode": "spmc", "eigenvalues": eigenvalues, "parities": table.real_parities(), "report": report }),
                pass,
            )
        }
        VerifyMode::Ssmc => {
            let tau = config
                .tau
                .ok_or_else(|| InvalidRun("mode ssmc requires \"tau\"".into()))?;
            let report = verify_ssmc(eigenvalues, &table.parities, tau, config.allow_global_phase)?;
            let pass = report.pass;
            let parities: Vec<ComplexJson> = table.parities.iter().copied().map(ComplexJson::from).collect();
            (
                json!({ "mode": "ssmc", "eigenvalues": eigenvalues, "parities": parities, "report": report }),
                pass,
            )
        }
    };
    let mut text = serde_json::to_string_pretty(&outputs)?;
    text.push('\n');
    Ok(Completed {
        config: echo(&config),
        seed: 0,
        outputs,
        passed,
        artifacts: primary(out, text),
    })
}

fn curve_summary(curve: &FidelityCurve, tau: f64) -> Value {
    json!({
        "tau": tau,
        "fidelity_at_tau": curve.at(tau),
        "peak_time": curve.peak_time,
        "peak_value": curve.peak_value,
        "points": curve.times.len(),
    })
}

fn mirror(raw: Value, seed: Option<u64>, out: Option<&Path>) -> Result<Completed, InvalidRun> {
    let mut config: MirrorConfig = parse(raw)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    config.lattice.validate()?;
    let spec = MirrorExperimentSpec {
        lattice: config.lattice.clone(),
        initial: config.initial.clone(),
        times: config.grid.times()?,
        seed: config.seed,
    };
    let curve = run_mirror_transfer(&spec)?;
    let done = Completed {
        config: echo(&config),
        seed: config.seed,
        outputs: curve_summary(&curve, MIRROR_TIME),
        passed: true,
        artifacts: Vec::new(),
    };
    Ok(with_sidecar(Kind::Mirror, done, out, curve.to_csv()))
}

fn ring(raw: Value, seed: Option<u64>, out: Option<&Path>, effective: bool) -> Result<Completed, InvalidRun> {
    let mut config: RingConfig = parse(raw)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    let spec = config.to_spec()?;
    let tau = spec.transfer_time();
    let exact = run_ring_translation(&spec)?;
    let (kind, outputs, csv) = if effective {
        let linear = run_effective_translation(&spec)?;
        let report = effective_hamiltonian_fidelity(&spec)?;
        let outputs = json!({
            "report": report,
            "exact": curve_summary(&exact, tau),
            "effective": curve_summary(&linear, tau),
        });
        let csv = columns_csv(
            &["t", "exact", "effective"],
            &[&exact.times, &exact.fidelities, &linear.fidelities],
        );
        (Kind::Effective, outputs, csv)
    } else {
        let mut outputs = curve_summary(&exact, tau);
        outputs["grid_step"] = json!(config.grid.step());
        (Kind::Ring, outputs, exact.to_csv())
    };
    let done = Completed {
        config: echo(&config),
        seed: config.seed,
        outputs,
        passed: true,
        artifacts: Vec::new(),
    };
    Ok(with_sidecar(kind, done, out, csv))
}
