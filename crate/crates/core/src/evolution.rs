//! Exact time evolution of single-particle states and Slater determinants.
//!
//! Evolution is done through the spectral decomposition,
//! `U(t) = V · diag(exp(−i ε_j t)) · V†`. A Slater determinant with orbital
//! matrix `M` evolves as `U·M`, overlaps are `det(A†B)` and the one-body
//! correlation matrix is `C = M·M†`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hamiltonian::SpectralDecomposition;
use crate::io::ComplexJson;
use crate::linalg::{self, CMatrix, CVector, ONE, ZERO};
use crate::symmetry::SymmetryOperator;
use crate::Complex64;

pub const NORM_TOL: f64 = 1e-10;

/// `U(t) = exp(−iHt)` from a spectral decomposition of `H`.
pub fn propagator(decomp: &SpectralDecomposition, t: f64) -> CMatrix {
    linalg::propagator_from_modes(&decomp.eigenvectors, &decomp.eigenvalues, t)
}

/// Normalized single-particle wavefunction on the site basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if amplitudes.is_empty() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!("state norm {norm} is not 1")));
        }
        Ok(PureState { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::invalid("cannot normalize a zero vector"));
        }
        Ok(PureState {
            amplitudes: amplitudes / Complex64::new(norm, 0.0),
        })
    }

    /// Particle localized on `site` (0-based).
    pub fn site(dim: usize, site: usize) -> Result<Self> {
        if site >= dim {
            return Err(Error::invalid(format!("site {site} outside 0..{dim}")));
        }
        let mut v = CVector::from_element(dim, ZERO);
        v[site] = ONE;
        Ok(PureState { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `⟨ψ|H|ψ⟩` for a matrix `H`.
    pub fn expectation(&self, h: &CMatrix) -> Result<f64> {
        check_dim(h.nrows(), self.dim())?;
        Ok(self.amplitudes.dotc(&(h * &self.amplitudes)).re)
    }

    pub fn to_slater(&self) -> SlaterState {
        SlaterState {
            orbitals: CMatrix::from_column_slice(self.dim(), 1, self.amplitudes.as_slice()),
        }
    }
}

/// Many-fermion state given by `n` orthonormal orbitals (columns of a
/// `D × n` matrix).
#[derive(Debug, Clone, PartialEq)]
pub struct SlaterState {
    orbitals: CMatrix,
}

impl SlaterState {
    pub fn new(orbitals: CMatrix) -> Result<Self> {
        let (d, n) = orbitals.shape();
        if n == 0 || n > d {
            return Err(Error::invalid(format!(
                "need 1 <= particles <= sites, got {n} particles on {d} sites"
            )));
        }
        let defect = linalg::unitarity_defect(&orbitals);
        if defect > NORM_TOL {
            return Err(Error::invalid(format!(
                "orbitals are not orthonormal: ‖M†M − I‖_max = {defect:e}"
            )));
        }
        Ok(SlaterState { orbitals })
    }

    /// Orthonormalizes the columns of `m` (QR), keeping their span.
    pub fn orthonormalized(m: CMatrix) -> Result<Self> {
        let (d, n) = m.shape();
        if n == 0 || n > d {
            return Err(Error::invalid(format!(
                "need 1 <= particles <= sites, got {n} particles on {d} sites"
            )));
        }
        let qr = m.qr();
        let r = qr.r();
        if (0..n).any(|i| r[(i, i)].norm() < 1e-12) {
            return Err(Error::invalid("orbitals are linearly dependent"));
        }
        SlaterState::new(qr.q())
    }

    /// Fermions localized on distinct `sites` (0-based, in that order).
    pub fn from_sites(dim: usize, sites: &[usize]) -> Result<Self> {
        let mut m = CMatrix::from_element(dim, sites.len(), ZERO);
        for (col, &site) in sites.iter().enumerate() {
            if site >= dim {
                return Err(Error::invalid(format!("site {site} outside 0..{dim}")));
            }
            m[(site, col)] = ONE;
        }
        SlaterState::new(m)
    }

    /// Selected columns of an orthonormal basis, e.g. eigen-orbitals.
    pub fn from_columns(basis: &CMatrix, columns: &[usize]) -> Result<Self> {
        let mut m = CMatrix::from_element(basis.nrows(), columns.len(), ZERO);
        for (dst, &src) in columns.iter().enumerate() {
            if src >= basis.ncols() {
                return Err(Error::invalid(format!(
                    "orbital {src} outside 0..{}",
                    basis.ncols()
                )));
            }
            m.set_column(dst, &basis.column(src));
        }
        SlaterState::new(m)
    }

    /// Haar-like random state: complex Gaussian orbitals, orthonormalized.
    pub fn random<R: Rng + ?Sized>(dim: usize, particles: usize, rng: &mut R) -> Result<Self> {
        let m = DMatrix::from_fn(dim, particles, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        SlaterState::orthonormalized(m)
    }

    pub fn dim(&self) -> usize {
        self.orbitals.nrows()
    }

    pub fn particles(&self) -> usize {
        self.orbitals.ncols()
    }

    pub fn orbitals(&self) -> &CMatrix {
        &self.orbitals
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn check_square(u: &CMatrix) -> Result<()> {
    check_dim(u.nrows(), u.ncols())
}

pub fn evolve_state(u: &CMatrix, psi: &PureState) -> Result<PureState> {
    check_square(u)?;
    check_dim(u.ncols(), psi.dim())?;
    Ok(PureState {
        amplitudes: u * &psi.amplitudes,
    })
}

pub fn evolve_slater(u: &CMatrix, s: &SlaterState) -> Result<SlaterState> {
    check_square(u)?;
    check_dim(u.ncols(), s.dim())?;
    Ok(SlaterState {
        orbitals: u * &s.orbitals,
    })
}

/// `⟨a|b⟩ = det(A†B)`
pub fn slater_overlap(a: &SlaterState, b: &SlaterState) -> Result<Complex64> {
    check_dim(a.dim(), b.dim())?;
    if a.particles() != b.particles() {
        return Err(Error::invalid(format!(
            "particle numbers differ: {} vs {}",
            a.particles(),
            b.particles()
        )));
    }
    Ok((a.orbitals.adjoint() * &b.orbitals).determinant())
}

pub fn apply_symmetry_state(s: &SymmetryOperator, psi: &PureState) -> Result<PureState> {
    Ok(PureState {
        amplitudes: s.apply_vector(&psi.amplitudes)?,
    })
}

pub fn apply_symmetry_slater(s: &SymmetryOperator, state: &SlaterState) -> Result<SlaterState> {
    Ok(SlaterState {
        orbitals: s.apply_columns(&state.orbitals)?,
    })
}

/// One-body density matrix `C[i][j] = ⟨c†_j c_i⟩ = Σ_α M[i][α]·conj(M[j][α])`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub entries: CMatrix,
}

impl CorrelationMatrix {
    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// `‖C² − C‖_max`, zero for a pure Slater state.
    pub fn idempotency_defect(&self) -> f64 {
        linalg::max_abs(&(&self.entries * &self.entries - &self.entries))
    }

    /// Site occupations `⟨n_i⟩`.
    pub fn densities(&self) -> Vec<f64> {
        self.entries.diagonal().iter().map(|z| z.re).collect()
    }
}

pub fn correlation_matrix(s: &SlaterState) -> CorrelationMatrix {
    CorrelationMatrix {
        entries: &s.orbitals * s.orbitals.adjoint(),
    }
}

/// States with a global-phase-insensitive overlap.
pub trait Overlap {
    fn overlap(&self, other: &Self) -> Result<Complex64>;
}

impl Overlap for PureState {
    fn overlap(&self, other: &Self) -> Result<Complex64> {
        self.inner(other)
    }
}

impl Overlap for SlaterState {
    fn overlap(&self, other: &Self) -> Result<Complex64> {
        slater_overlap(self, other)
    }
}

/// `|⟨a|b⟩|`, clamped to `[0, 1]`.
pub fn fidelity<T: Overlap>(a: &T, b: &T) -> Result<f64> {
    Ok(a.overlap(b)?.norm().min(1.0))
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.amplitudes.iter().map(|&z| ComplexJson::from(z)))
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Vec::<ComplexJson>::deserialize(d)?;
        let v = CVector::from_iterator(raw.len(), raw.into_iter().map(Complex64::from));
        PureState::new(v).map_err(D::Error::custom)
    }
}

impl Serialize for SlaterState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let cols: Vec<Vec<ComplexJson>> = self
            .orbitals
            .column_iter()
            .map(|c| c.iter().map(|&z| ComplexJson::from(z)).collect())
            .collect();
        cols.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SlaterState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let cols = Vec::<Vec<ComplexJson>>::deserialize(d)?;
        let dim = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != dim) {
            return Err(D::Error::custom("orbitals have different lengths"));
        }
        let flat: Vec<Complex64> = cols.into_iter().flatten().map(Complex64::from).collect();
        let n = flat.len().checked_div(dim).unwrap_or(0);
        SlaterState::new(CMatrix::from_column_slice(dim, n, &flat)).map_err(D::Error::custom)
    }
}
