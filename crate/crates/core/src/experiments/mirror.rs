use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{validate_times, with_time, FidelityCurve};
use crate::couplings::LatticeEngineering;
use crate::error::{Error, Result};
use crate::evolution::{
    apply_symmetry_slater, apply_symmetry_state, evolve_slater, evolve_state, fidelity, propagator,
    PureState, SlaterState,
};
use crate::hamiltonian::{
    lattice_hamiltonian_with_limit, spectral_decompose, HermitianOperator, SiteBasis, SpectralDecomposition,
    DEFAULT_MAX_DIM,
};
use crate::linalg::{self, CMatrix};
use crate::parallel::Execution;
use crate::symmetry::{
    eigen_parities, reflection_operator, verify_ssmc, ParityTable, SsmcReport, SymmetryOperator,
};

/// Transfer time of every engineered lattice.
pub const MIRROR_TIME: f64 = PI / 2.0;

/// Initial state of a mirror experiment. Lattice coordinates and level
/// indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MirrorInitial {
    /// One particle on the site with these coordinates.
    Site(Vec<usize>),
    /// Explicit single-particle amplitudes.
    Amplitudes(PureState),
    /// One fermion on each listed site.
    Occupied(Vec<Vec<usize>>),
    /// Fermions in the listed eigen-orbitals (ascending energy, 1-based).
    EigenOrbitals(Vec<usize>),
    /// Random Slater determinant drawn from the spec seed.
    RandomSlater { particles: usize },
}

impl MirrorInitial {
    fn is_single_particle(&self) -> bool {
        matches!(self, MirrorInitial::Site(_) | MirrorInitial::Amplitudes(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MirrorExperimentSpec {
    pub lattice: LatticeEngineering,
    pub initial: MirrorInitial,
    pub times: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
}

/// Engineered lattice with its eigensystem and diagonal reflection.
#[derive(Debug, Clone)]
pub struct MirrorSystem {
    pub basis: SiteBasis,
    pub hamiltonian: HermitianOperator,
    pub decomposition: SpectralDecomposition,
    pub reflection: SymmetryOperator,
}

/// `U(π/2) = g·R` check for one lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorCertificate {
    pub ssmc: SsmcReport,
    /// `‖U(π/2) − g·R‖_max`
    pub propagator_defect: f64,
}

impl MirrorSystem {
    pub fn new(lattice: &LatticeEngineering) -> Result<Self> {
        Self::with_limit(lattice, DEFAULT_MAX_DIM)
    }

    pub fn with_limit(lattice: &LatticeEngineering, max_dim: usize) -> Result<Self> {
        let hamiltonian = lattice_hamiltonian_with_limit(lattice, max_dim)?;
        let decomposition = spectral_decompose(&hamiltonian)?;
        let basis = lattice.basis();
        Ok(MirrorSystem {
            reflection: reflection_operator(&basis),
            basis,
            hamiltonian,
            decomposition,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn propagator(&self, t: f64) -> CMatrix {
        propagator(&self.decomposition, t)
    }

    pub fn parities(&self) -> Result<ParityTable> {
        eigen_parities(&self.decomposition, &self.reflection)
    }

    /// Matching condition at `π/2` and the propagator defect it implies.
    pub fn certificate(&self) -> Result<MirrorCertificate> {
        let table = self.parities()?;
        let ssmc = verify_ssmc(&table.basis.eigenvalues, &table.parities, MIRROR_TIME, true)?;
        let target = self.reflection.matrix() * ssmc.global_phase;
        let propagator_defect = linalg::max_abs(&(self.propagator(MIRROR_TIME) - target));
        Ok(MirrorCertificate {
            ssmc,
            propagator_defect,
        })
    }

    fn site_index(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.basis.rank() || coords.contains(&0) {
            return Err(Error::invalid(format!(
                "site {coords:?} needs {} 1-based coordinates",
                self.basis.rank()
            )));
        }
        let mut c = [0; 3];
        for (dst, &src) in c.iter_mut().zip(coords) {
            *dst = src - 1;
        }
        self.basis.try_index(c)
    }

    fn single_particle(&self, initial: &MirrorInitial) -> Result<PureState> {
        match initial {
            MirrorInitial::Site(coords) => PureState::site(self.dim(), self.site_index(coords)?),
            MirrorInitial::Amplitudes(psi) if psi.dim() == self.dim() => Ok(psi.clone()),
            MirrorInitial::Amplitudes(psi) => Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            }),
            _ => Err(Error::invalid("initial state is not a single-particle state")),
        }
    }

    fn slater(&self, initial: &MirrorInitial, seed: u64) -> Result<SlaterState> {
        match initial {
            MirrorInitial::Site(_) | MirrorInitial::Amplitudes(_) => {
                Ok(self.single_particle(initial)?.to_slater())
            }
            MirrorInitial::Occupied(sites) => {
                let idx = sites
                    .iter()
                    .map(|s| self.site_index(s))
                    .collect::<Result<Vec<_>>>()?;
                SlaterState::from_sites(self.dim(), &idx)
            }
            MirrorInitial::EigenOrbitals(levels) => {
                if levels.iter().any(|&l| l == 0 || l > self.dim()) {
                    return Err(Error::invalid(format!(
                        "orbital levels must lie in 1..={}",
                        self.dim()
                    )));
                }
                let cols: Vec<usize> = levels.iter().map(|l| l - 1).collect();
                SlaterState::from_columns(&self.decomposition.eigenvectors, &cols)
            }
            MirrorInitial::RandomSlater { particles } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                SlaterState::random(self.dim(), *particles, &mut rng)
            }
        }
    }
}

fn mirror_times(spec: &MirrorExperimentSpec) -> Result<Vec<f64>> {
    validate_times(&spec.times)?;
    Ok(with_time(&spec.times, MIRROR_TIME))
}

/// Fidelity between the evolved initial state and its reflection; `π/2`
/// is always part of the grid.
///
/// Single-particle initial states are evolved as wavefunctions, everything
/// else as Slater determinants.
pub fn run_mirror_transfer(spec: &MirrorExperimentSpec) -> Result<FidelityCurve> {
    run_mirror_transfer_with(spec, Execution::default())
}

pub fn run_mirror_transfer_with(spec: &MirrorExperimentSpec, exec: Execution) -> Result<FidelityCurve> {
    if !spec.initial.is_single_particle() {
        return run_many_body_mirror_with(spec, exec);
    }
    let times = mirror_times(spec)?;
    let system = MirrorSystem::new(&spec.lattice)?;
    let initial = system.single_particle(&spec.initial)?;
    let target = apply_symmetry_state(&system.reflection, &initial)?;
    let values = exec.map(&times, |&t| {
        evolve_state(&system.propagator(t), &initial).and_then(|psi| fidelity(&target, &psi))
    });
    Ok(FidelityCurve::new(
        times,
        values.into_iter().collect::<Result<_>>()?,
    ))
}

/// Mirror transfer with the fidelity taken as the Slater-determinant overlap
/// modulus.
pub fn run_many_body_mirror(spec: &MirrorExperimentSpec) -> Result<FidelityCurve> {
    run_many_body_mirror_with(spec, Execution::default())
}

pub fn run_many_body_mirror_with(spec: &MirrorExperimentSpec, exec: Execution) -> Result<FidelityCurve> {
    let times = mirror_times(spec)?;
    let system = MirrorSystem::new(&spec.lattice)?;
    let initial = system.slater(&spec.initial, spec.seed)?;
    let target = apply_symmetry_slater(&system.reflection, &initial)?;
    let values = exec.map(&times, |&t| {
        evolve_slater(&system.propagator(t), &initial).and_then(|s| fidelity(&target, &s))
    });
    Ok(FidelityCurve::new(
        times,
        values.into_iter().collect::<Result<_>>()?,
    ))
}
