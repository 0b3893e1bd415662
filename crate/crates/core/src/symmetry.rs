//! Lattice symmetries and the spectrum/symmetry matching conditions.
//!
//! If `[H, S] = 0` and every joint eigenlevel satisfies
//! `exp(−i ε_n τ) = g · p_n` for one unit `g`, then `U(τ) = g · S` and every
//! state is carried to its symmetric image at `τ`. For the reflection this
//! specializes to a commensurate spectrum `ε_n = E0·N_n + c` whose parities
//! alternate with the integer labels, with `τ = π / E0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{decompose_matrix, SiteBasis, SpectralDecomposition};
use crate::linalg::{self, CMatrix, CVector, ONE, ZERO};
use crate::Complex64;

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-8;
pub const SSMC_TOL: f64 = 1e-8;
/// Allowed distance of a fitted level label from the nearest integer.
pub const INTEGER_FIT_TOL: f64 = 1e-6;
/// Commutator tolerance (scaled by `max(1, ‖H‖_max)`) for [`eigen_parities`].
pub const COMMUTATION_TOL: f64 = 1e-10;
pub const UNIT_MODULUS_TOL: f64 = 1e-9;
/// Largest `q` tried when searching for `E0 = δ_min / q`.
pub const MAX_DENOMINATOR: usize = 64;

/// Site permutation with optional per-site phases: `S|j⟩ = phase_j |π(j)⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryOperator {
    site_map: Vec<usize>,
    phases: Option<Vec<Complex64>>,
}

impl SymmetryOperator {
    pub fn from_permutation(site_map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; site_map.len()];
        for &target in &site_map {
            if target >= site_map.len() || std::mem::replace(&mut seen[target], true) {
                return Err(Error::invalid("site map is not a permutation"));
            }
        }
        Ok(SymmetryOperator {
            site_map,
            phases: None,
        })
    }

    pub fn with_phases(mut self, phases: Vec<Complex64>) -> Result<Self> {
        if phases.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: phases.len(),
            });
        }
        if phases.iter().any(|p| (p.norm() - 1.0).abs() > UNIT_MODULUS_TOL) {
            return Err(Error::invalid("symmetry phases must have unit modulus"));
        }
        self.phases = Some(phases);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.site_map.len()
    }

    pub fn site_map(&self) -> &[usize] {
        &self.site_map
    }

    fn phase(&self, site: usize) -> Complex64 {
        self.phases.as_ref().map_or(ONE, |p| p[site])
    }

    /// Dense unitary matrix, `S[π(j), j] = phase_j`.
    pub fn matrix(&self) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::from_element(d, d, ZERO);
        for (j, &target) in self.site_map.iter().enumerate() {
            m[(target, j)] = self.phase(j);
        }
        m
    }

    pub fn apply_vector(&self, v: &CVector) -> Result<CVector> {
        self.check_dim(v.len())?;
        let mut out = CVector::from_element(v.len(), ZERO);
        for (j, &target) in self.site_map.iter().enumerate() {
            out[target] = self.phase(j) * v[j];
        }
        Ok(out)
    }

    /// `S · M` for a matrix whose rows are indexed by site.
    pub fn apply_columns(&self, m: &CMatrix) -> Result<CMatrix> {
        self.check_dim(m.nrows())?;
        let mut out = CMatrix::from_element(m.nrows(), m.ncols(), ZERO);
        for (j, &target) in self.site_map.iter().enumerate() {
            let phase = self.phase(j);
            for c in 0..m.ncols() {
                out[(target, c)] = phase * m[(j, c)];
            }
        }
        Ok(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SymmetryOperator) -> Result<SymmetryOperator> {
        self.check_dim(other.dim())?;
        let site_map = other.site_map.iter().map(|&j| self.site_map[j]).collect();
        let phases = match (&self.phases, &other.phases) {
            (None, None) => None,
            _ => Some(
                (0..self.dim())
                    .map(|j| other.phase(j) * self.phase(other.site_map[j]))
                    .collect(),
            ),
        };
        Ok(SymmetryOperator { site_map, phases })
    }

    pub fn is_identity(&self) -> bool {
        self.site_map.iter().enumerate().all(|(i, &t)| i == t)
            && self.phases.as_ref().is_none_or(|p| p.iter().all(|&z| z == ONE))
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }
}

/// Diagonal reflection `n_i ↦ N_i − 1 − n_i` on every axis (0-based).
pub fn reflection_operator(basis: &SiteBasis) -> SymmetryOperator {
    let dims = basis.dims();
    let site_map = (0..basis.dim())
        .map(|site| {
            let c = basis.coords(site);
            basis.index([dims[0] - 1 - c[0], dims[1] - 1 - c[1], dims[2] - 1 - c[2]])
        })
        .collect();
    SymmetryOperator {
        site_map,
        phases: None,
    }
}

/// Ring translation `j ↦ j + a (mod N)`.
pub fn translation_operator(n: usize, shift: i64) -> Result<SymmetryOperator> {
    if n < 3 {
        return Err(Error::invalid(format!("ring needs at least 3 sites, got N={n}")));
    }
    let a = shift.rem_euclid(n as i64) as usize;
    Ok(SymmetryOperator {
        site_map: (0..n).map(|j| (j + a) % n).collect(),
        phases: None,
    })
}

/// Symmetry eigenvalue of every eigenvector, with the eigenbasis rotated
/// inside degenerate clusters so that each column is a joint eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityTable {
    pub parities: Vec<Complex64>,
    /// `‖Sφ − pφ‖_max` per eigenvector.
    pub residuals: Vec<f64>,
    /// Joint eigenbasis of `H` and `S`; eigenvalues unchanged.
    pub basis: SpectralDecomposition,
}

impl ParityTable {
    /// Real parts of the parities, for reflections.
    pub fn real_parities(&self) -> Vec<f64> {
        self.parities.iter().map(|p| p.re).collect()
    }
}

fn clusters(eigenvalues: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=eigenvalues.len() {
        if i == eigenvalues.len() || eigenvalues[i] - eigenvalues[i - 1] >= tol {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Unitary `W` diagonalizing the normal (unitary) matrix `b`.
///
/// Diagonalizes the Hermitian part first and splits what it leaves
/// degenerate with the anti-Hermitian part.
fn diagonalize_normal(b: &CMatrix) -> Result<CMatrix> {
    let k = b.nrows();
    let half = Complex64::new(0.5, 0.0);
    let herm = (b + b.adjoint()) * half;
    let anti = (b - b.adjoint()) * Complex64::new(0.0, -0.5);
    let first = decompose_matrix(&herm)?;
    let mut w = CMatrix::from_element(k, k, ZERO);
    for range in clusters(&first.eigenvalues, DEGENERACY_TOL) {
        let cols = first.eigenvectors.columns(range.start, range.len()).into_owned();
        let rotated = if range.len() == 1 {
            cols
        } else {
            let sub = cols.adjoint() * &anti * &cols;
            let sub = (&sub + sub.adjoint()) * half;
            &cols * decompose_matrix(&sub)?.eigenvectors
        };
        w.columns_mut(range.start, range.len()).copy_from(&rotated);
    }
    Ok(w)
}

/// Symmetry eigenvalues of the eigenvectors of `decomp`.
///
/// Fails with [`Error::SymmetryMismatch`] if `S` does not commute with the
/// Hamiltonian reconstructed from `decomp`.
pub fn eigen_parities(decomp: &SpectralDecomposition, s: &SymmetryOperator) -> Result<ParityTable> {
    if s.dim() != decomp.dim() {
        return Err(Error::DimensionMismatch {
            expected: decomp.dim(),
            found: s.dim(),
        });
    }
    let h = decomp.reconstruct();
    let s_mat = s.matrix();
    let norm = linalg::max_abs(&(&h * &s_mat - &s_mat * &h));
    if !(norm <= COMMUTATION_TOL * linalg::max_abs(&h).max(1.0)) {
        return Err(Error::SymmetryMismatch { norm });
    }

    let mut vectors = decomp.eigenvectors.clone();
    let mut parities = vec![ZERO; decomp.dim()];
    for range in clusters(&decomp.eigenvalues, DEGENERACY_TOL) {
        let cols = decomp.eigenvectors.columns(range.start, range.len()).into_owned();
        let image = s.apply_columns(&cols)?;
        let restricted = cols.adjoint() * &image;
        let (cols, restricted) = if range.len() == 1 {
            (cols, restricted)
        } else {
            let w = diagonalize_normal(&restricted)?;
            let rotated = &cols * &w;
            let restricted = w.adjoint() * restricted * &w;
            (rotated, restricted)
        };
        for (offset, idx) in range.clone().enumerate() {
            parities[idx] = restricted[(offset, offset)];
        }
        vectors.columns_mut(range.start, range.len()).copy_from(&cols);
    }

    let image = s.apply_columns(&vectors)?;
    let residuals: Vec<f64> = (0..decomp.dim())
        .map(|j| {
            let diff = image.column(j) - vectors.column(j) * parities[j];
            diff.iter().fold(0.0, |acc: f64, z| acc.max(z.norm()))
        })
        .collect();
    if let Some(bad) = parities
        .iter()
        .find(|p| (p.norm() - 1.0).abs() > UNIT_MODULUS_TOL)
    {
        return Err(Error::SymmetryMismatch {
            norm: (bad.norm() - 1.0).abs(),
        });
    }
    Ok(ParityTable {
        parities,
        residuals,
        basis: SpectralDecomposition {
            eigenvalues: decomp.eigenvalues.clone(),
            eigenvectors: vectors,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsmcReport {
    pub tau: f64,
    #[serde(with = "crate::io::complex")]
    pub global_phase: Complex64,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Check `exp(−i ε_n τ) = g · p_n` for all levels.
///
/// With `allow_global_phase`, `g` is fixed by the first level; otherwise
/// `g = 1`.
pub fn verify_ssmc(
    eigenvalues: &[f64],
    symmetry_eigenvalues: &[Complex64],
    tau: f64,
    allow_global_phase: bool,
) -> Result<SsmcReport> {
    if eigenvalues.is_empty() {
        return Err(Error::invalid("no levels to verify"));
    }
    if eigenvalues.len() != symmetry_eigenvalues.len() {
        return Err(Error::DimensionMismatch {
            expected: eigenvalues.len(),
            found: symmetry_eigenvalues.len(),
        });
    }
    if symmetry_eigenvalues
        .iter()
        .any(|p| (p.norm() - 1.0).abs() > UNIT_MODULUS_TOL)
    {
        return Err(Error::invalid("symmetry eigenvalues must have unit modulus"));
    }
    let evolved = |e: f64| Complex64::from_polar(1.0, -e * tau);
    let g = if allow_global_phase {
        let g = evolved(eigenvalues[0]) / symmetry_eigenvalues[0];
        g / g.norm()
    } else {
        ONE
    };
    let max_deviation = eigenvalues
        .iter()
        .zip(symmetry_eigenvalues)
        .map(|(&e, &p)| (evolved(e) - g * p).norm())
        .fold(0.0, f64::max);
    Ok(SsmcReport {
        tau,
        global_phase: g,
        max_deviation,
        pass: max_deviation <= SSMC_TOL,
    })
}

/// Result of fitting `ε_n = E0·N_n + c` with `p_n = s·(−1)^{N_n}`.
///
/// Labels are anchored so that the lowest level has `N = 0` (`c` is then the
/// lowest eigenvalue up to the least-squares refit).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpmcReport {
    #[serde(rename = "E0")]
    pub e0: Option<f64>,
    pub offset: f64,
    /// Integer label per input level, in input order.
    pub labels: Vec<i64>,
    pub sign: i8,
    /// `|(ε_n − c)/E0 − N_n|` per input level.
    pub residuals: Vec<f64>,
    /// `π / E0`; `None` when fewer than two distinct levels leave it free.
    pub tau: Option<f64>,
    pub pass: bool,
}

struct Fit {
    e0: f64,
    offset: f64,
    labels: Vec<i64>,
    residuals: Vec<f64>,
}

fn integer_fit(eigenvalues: &[f64], base: f64, e0: f64) -> Option<Fit> {
    let raw: Vec<f64> = eigenvalues.iter().map(|e| (e - base) / e0).collect();
    let labels: Vec<i64> = raw.iter().map(|x| x.round() as i64).collect();
    let rough = raw
        .iter()
        .zip(&labels)
        .map(|(x, &l)| (x - l as f64).abs())
        .fold(0.0, f64::max);
    if rough > INTEGER_FIT_TOL {
        return None;
    }
    // least-squares refit of slope and offset with the labels fixed
    let n = labels.len() as f64;
    let mean_l = labels.iter().map(|&l| l as f64).sum::<f64>() / n;
    let mean_e = eigenvalues.iter().sum::<f64>() / n;
    let (mut cov, mut var) = (0.0, 0.0);
    for (&l, &e) in labels.iter().zip(eigenvalues) {
        cov += (l as f64 - mean_l) * (e - mean_e);
        var += (l as f64 - mean_l).powi(2);
    }
    let e0 = cov / var;
    let offset = mean_e - e0 * mean_l;
    let residuals: Vec<f64> = eigenvalues
        .iter()
        .zip(&labels)
        .map(|(e, &l)| ((e - offset) / e0 - l as f64).abs())
        .collect();
    if residuals.iter().any(|&r| r > INTEGER_FIT_TOL) {
        return None;
    }
    Some(Fit {
        e0,
        offset,
        labels,
        residuals,
    })
}

fn parity_sign(labels: &[i64], parities: &[f64]) -> (i8, bool) {
    let alternation = |l: i64| if l.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let sign = if parities[0] * alternation(labels[0]) > 0.0 {
        1
    } else {
        -1
    };
    let ok = labels
        .iter()
        .zip(parities)
        .all(|(&l, &p)| (p - sign as f64 * alternation(l)).abs() <= INTEGER_FIT_TOL);
    (sign, ok)
}

/// Fit the reflection form of the matching condition.
///
/// `E0` is the largest `δ_min / q` (`q ≤ MAX_DENOMINATOR`, `δ_min` the
/// smallest nonzero level spacing) that puts every level on an integer label
/// within [`INTEGER_FIT_TOL`] and makes the parities alternate with the
/// labels up to one overall sign.
pub fn verify_spmc(eigenvalues: &[f64], parities: &[f64]) -> Result<SpmcReport> {
    if eigenvalues.len() != parities.len() {
        return Err(Error::DimensionMismatch {
            expected: eigenvalues.len(),
            found: parities.len(),
        });
    }
    if parities.iter().any(|p| (p.abs() - 1.0).abs() > INTEGER_FIT_TOL) {
        return Err(Error::invalid("parities must be real ±1"));
    }
    if eigenvalues.is_empty() {
        return Ok(SpmcReport {
            e0: None,
            offset: 0.0,
            labels: vec![],
            sign: 1,
            residuals: vec![],
            tau: None,
            pass: true,
        });
    }
    let base = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let mut sorted = eigenvalues.to_vec();
    sorted.sort_by(f64::total_cmp);
    let min_gap = sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&g| g >= DEGENERACY_TOL)
        .fold(f64::INFINITY, f64::min);

    if !min_gap.is_finite() {
        // a single distinct level: every label is 0 and τ is unconstrained
        let labels = vec![0; eigenvalues.len()];
        let (sign, ok) = parity_sign(&labels, parities);
        return Ok(SpmcReport {
            e0: None,
            offset: base,
            labels,
            sign,
            residuals: vec![0.0; eigenvalues.len()],
            tau: None,
            pass: ok,
        });
    }

    let mut first_integral: Option<(Fit, i8)> = None;
    for q in 1..=MAX_DENOMINATOR {
        let Some(fit) = integer_fit(eigenvalues, base, min_gap / q as f64) else {
            continue;
        };
        let (sign, ok) = parity_sign(&fit.labels, parities);
        if ok {
            return Ok(report_from(fit, sign, true));
        }
        first_integral.get_or_insert((fit, sign));
    }
    if let Some((fit, sign)) = first_integral {
        return Ok(report_from(fit, sign, false));
    }

    // incommensurate: report the nearest-integer labels at the smallest gap
    let labels: Vec<i64> = eigenvalues
        .iter()
        .map(|e| ((e - base) / min_gap).round() as i64)
        .collect();
    let residuals = eigenvalues
        .iter()
        .zip(&labels)
        .map(|(e, &l)| ((e - base) / min_gap - l as f64).abs())
        .collect();
    let (sign, _) = parity_sign(&labels, parities);
    Ok(SpmcReport {
        e0: Some(min_gap),
        offset: base,
        labels,
        sign,
        residuals,
        tau: Some(PI / min_gap),
        pass: false,
    })
}

fn report_from(fit: Fit, sign: i8, pass: bool) -> SpmcReport {
    SpmcReport {
        e0: Some(fit.e0),
        offset: fit.offset,
        labels: fit.labels,
        sign,
        residuals: fit.residuals,
        tau: Some(PI / fit.e0),
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::couplings::{engineered_profile, uniform_profile, ChainEngineering};
    use crate::hamiltonian::{chain_hamiltonian, ring_hamiltonian, spectral_decompose, HoppingSign};

    fn engineered_chain(n: usize, m: usize) -> SpectralDecomposition {
        let p = engineered_profile(ChainEngineering::new(n, m).unwrap()).unwrap();
        spectral_decompose(&chain_hamiltonian(&p, HoppingSign::Positive).unwrap()).unwrap()
    }

    #[test]
    fn reflection_examples() {
        let r = reflection_operator(&SiteBasis::new(&[2]).unwrap());
        assert_eq!(r.site_map(), &[1, 0]);
        let r = reflection_operator(&SiteBasis::new(&[4]).unwrap());
        assert_eq!(r.site_map(), &[3, 2, 1, 0]);
        let basis = SiteBasis::new(&[2, 2]).unwrap();
        let r = reflection_operator(&basis);
        assert_eq!(r.site_map()[basis.index([0, 0, 0])], basis.index([1, 1, 0]));
        assert_eq!(r.site_map()[basis.index([0, 1, 0])], basis.index([1, 0, 0]));
        assert!(r.compose(&r).unwrap().is_identity());
    }

    #[test]
    fn translation_examples() {
        assert!(translation_operator(4, 0).unwrap().is_identity());
        assert!(translation_operator(4, 4).unwrap().is_identity());
        assert!(translation_operator(4, -4).unwrap().is_identity());
        let t = translation_operator(5, 2).unwrap();
        let mut e1 = CVector::from_element(5, ZERO);
        e1[0] = ONE;
        let moved = t.apply_vector(&e1).unwrap();
        assert_eq!(moved[2], ONE);
        assert_eq!(linalg::max_abs_vec(&moved), 1.0);
        let t3 = t.compose(&translation_operator(5, 1).unwrap()).unwrap();
        assert_eq!(t3, translation_operator(5, 3).unwrap());
        assert!(translation_operator(2, 1).is_err());
    }

    #[test]
    fn operators_are_unitary() {
        let r = reflection_operator(&SiteBasis::new(&[3, 4, 2]).unwrap());
        assert!(linalg::unitarity_defect(&r.matrix()) <= 1e-12);
        let t = translation_operator(7, 3).unwrap();
        assert!(linalg::unitarity_defect(&t.matrix()) <= 1e-12);
        let phased = t
            .clone()
            .with_phases((0..7).map(|j| Complex64::from_polar(1.0, j as f64)).collect())
            .unwrap();
        assert!(linalg::unitarity_defect(&phased.matrix()) <= 1e-12);
        let m = CMatrix::from_fn(7, 2, |i, j| Complex64::new(i as f64, j as f64));
        assert_eq!(phased.apply_columns(&m).unwrap(), phased.matrix() * &m);
        assert!(SymmetryOperator::from_permutation(vec![0, 0, 1]).is_err());
        assert!(t.with_phases(vec![ONE; 3]).is_err());
    }

    #[test]
    fn engineered_chain_parities_alternate() {
        // the lowest level of a positive-hopping chain is odd under reflection
        for (n, m) in [(4, 0), (4, 1), (2, 0), (8, 2)] {
            let d = engineered_chain(n, m);
            let r = reflection_operator(&SiteBasis::new(&[n]).unwrap());
            let table = eigen_parities(&d, &r).unwrap();
            for (k, p) in table.parities.iter().enumerate() {
                let expected = if k % 2 == 0 { -1.0 } else { 1.0 };
                assert!((p - Complex64::new(expected, 0.0)).norm() < 1e-9, "N={n} m={m}");
                assert!(table.residuals[k] < 1e-9);
            }
        }
    }

    #[test]
    fn ring_translation_eigenvalues() {
        let h = ring_hamiltonian(6, 1.0).unwrap();
        let d = spectral_decompose(&h).unwrap();
        let t = translation_operator(6, 1).unwrap();
        let table = eigen_parities(&d, &t).unwrap();
        // each joint eigenvector is a plane wave with T eigenvalue e^{−ik}
        // and energy −2 cos k
        for (j, p) in table.parities.iter().enumerate() {
            assert!((p.norm() - 1.0).abs() < 1e-9);
            let k = -p.arg();
            assert!((-2.0 * k.cos() - d.eigenvalues[j]).abs() < 1e-9);
            assert!(table.residuals[j] < 1e-9);
        }
        let mut ks: Vec<i64> = table
            .parities
            .iter()
            .map(|p| ((-p.arg()) / (2.0 * PI / 6.0)).round() as i64)
            .map(|q| q.rem_euclid(6))
            .collect();
        ks.sort();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn non_symmetry_is_rejected() {
        let p = uniform_profile(3, 1.0).unwrap();
        let mut values = p.values.clone();
        values[0] = 2.0;
        let skewed = crate::couplings::CouplingProfile::new(values).unwrap();
        let d = spectral_decompose(&chain_hamiltonian(&skewed, HoppingSign::Positive).unwrap()).unwrap();
        let r = reflection_operator(&SiteBasis::new(&[3]).unwrap());
        assert!(matches!(
            eigen_parities(&d, &r),
            Err(Error::SymmetryMismatch { .. })
        ));
    }

    #[test]
    fn ssmc_examples() {
        let e = [-3.0, -1.0, 1.0, 3.0];
        let p: Vec<Complex64> = [-1.0, 1.0, -1.0, 1.0]
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        let report = verify_ssmc(&e, &p, PI / 2.0, true).unwrap();
        assert!(report.pass);
        assert!((report.global_phase - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let report = verify_ssmc(&e, &p, PI, true).unwrap();
        assert!(!report.pass);
        // with the opposite parity assignment the phase flips sign
        let flipped: Vec<Complex64> = p.iter().map(|z| -z).collect();
        let report = verify_ssmc(&e, &flipped, PI / 2.0, true).unwrap();
        assert!(report.pass);
        assert!((report.global_phase - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!(!verify_ssmc(&e, &flipped, PI / 2.0, false).unwrap().pass);

        let report = verify_ssmc(&[0.0], &[ONE], 1.234, false).unwrap();
        assert!(report.pass);
        assert_eq!(report.global_phase, ONE);

        assert!(verify_ssmc(&[], &[], 1.0, true).is_err());
        assert!(verify_ssmc(&[1.0], &[Complex64::new(0.5, 0.0)], 1.0, true).is_err());
    }

    #[test]
    fn ssmc_report_json() {
        let report = verify_ssmc(&[0.0], &[ONE], 0.5, true).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["global_phase"], serde_json::json!({"re": 1.0, "im": 0.0}));
        assert_eq!(json["pass"], true);
        assert_eq!(json["tau"], 0.5);
    }

    #[test]
    fn spmc_examples() {
        let r = verify_spmc(&[-3.0, -1.0, 1.0, 3.0], &[1.0, -1.0, 1.0, -1.0]).unwrap();
        assert!(r.pass);
        assert!((r.e0.unwrap() - 2.0).abs() < 1e-12);
        assert!((r.offset + 3.0).abs() < 1e-12);
        assert_eq!(r.labels, vec![0, 1, 2, 3]);
        assert_eq!(r.sign, 1);
        assert!((r.tau.unwrap() - PI / 2.0).abs() < 1e-12);

        let s = 2f64.sqrt();
        let r = verify_spmc(&[-s, 0.0, s], &[1.0, -1.0, 1.0]).unwrap();
        assert!(r.pass);
        assert!((r.e0.unwrap() - s).abs() < 1e-12);
        assert_eq!(r.labels, vec![0, 1, 2]);
        assert_eq!(r.sign, 1);
        assert!((r.tau.unwrap() - PI / s).abs() < 1e-12);

        // uniform open chain N = 4: levels 2cos(qπ/5) are incommensurate
        let mut e: Vec<f64> = (1..=4).map(|q| 2.0 * (q as f64 * PI / 5.0).cos()).collect();
        e.sort_by(f64::total_cmp);
        let r = verify_spmc(&e, &[-1.0, 1.0, -1.0, 1.0]).unwrap();
        assert!(!r.pass);
        assert!(r.residuals.iter().any(|&x| x > INTEGER_FIT_TOL));
    }

    #[test]
    fn spmc_parity_failure_and_finer_spacing() {
        // commensurate but parities do not alternate at E0 = 2 ...
        let r = verify_spmc(&[-1.0, 1.0], &[1.0, 1.0]).unwrap();
        // ... they do at E0 = 1 (labels 0 and 2)
        assert!(r.pass);
        assert_eq!(r.labels, vec![0, 2]);
        let r = verify_spmc(&[0.0, 1.0, 2.0], &[1.0, 1.0, -1.0]).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn spmc_degenerate_inputs() {
        let r = verify_spmc(&[0.7], &[1.0]).unwrap();
        assert!(r.pass && r.tau.is_none());
        let r = verify_spmc(&[], &[]).unwrap();
        assert!(r.pass);
        let r = verify_spmc(&[0.5, 0.5], &[1.0, -1.0]).unwrap();
        assert!(!r.pass);
        assert!(verify_spmc(&[0.0, 1.0], &[1.0, 0.3]).is_err());
        assert!(verify_spmc(&[0.0, 1.0], &[1.0]).is_err());
    }

    #[test]
    fn spmc_report_json() {
        let r = verify_spmc(&[-1.0, 1.0], &[-1.0, 1.0]).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["E0"], 2.0);
        assert_eq!(json["labels"], serde_json::json!([0, 1]));
        assert_eq!(json["sign"], -1);
    }

    #[test]
    fn spmc_pass_implies_ssmc_pass() {
        for (n, m) in [(2, 0), (3, 0), (6, 1), (8, 2)] {
            let d = engineered_chain(n, m);
            let r = reflection_operator(&SiteBasis::new(&[n]).unwrap());
            let table = eigen_parities(&d, &r).unwrap();
            let spmc = verify_spmc(&d.eigenvalues, &table.real_parities()).unwrap();
            assert!(spmc.pass);
            assert!((spmc.tau.unwrap() - PI / 2.0).abs() < 1e-9);
            let ssmc = verify_ssmc(&d.eigenvalues, &table.parities, spmc.tau.unwrap(), true).unwrap();
            assert!(ssmc.pass, "N={n} m={m}: {}", ssmc.max_deviation);
        }
    }
}
