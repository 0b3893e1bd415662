//! Single-particle Hamiltonians: open chains, rings and separable lattices,
//! plus their dense eigendecomposition and the closed-form spectrum of the
//! engineered chains.

use std::f64::consts::PI;
use std::ops::Add;

use nalgebra::linalg::SymmetricEigen;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::couplings::{
    engineered_profile, BondField, ChainEngineering, CouplingProfile, LatticeEngineering,
};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::Complex64;

/// Default cap on the single-particle dimension of dense lattice problems.
pub const DEFAULT_MAX_DIM: usize = 4096;

pub const HERMITIAN_TOL: f64 = 1e-12;

/// Lattice sites of an `N_1 × N_2 × N_3` box (absent axes have extent 1).
///
/// Coordinates are 0-based; the linear index is `n_1 + N_1·n_2 + N_1·N_2·n_3`,
/// so axis 1 runs fastest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiteBasis {
    dims: [usize; 3],
    rank: usize,
}

impl SiteBasis {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims.len() > 3 || dims.contains(&0) {
            return Err(Error::invalid(format!("bad lattice extents {dims:?}")));
        }
        let mut full = [1; 3];
        full[..dims.len()].copy_from_slice(dims);
        let basis = SiteBasis {
            dims: full,
            rank: dims.len(),
        };
        if basis.dim() < 2 {
            return Err(Error::invalid("lattice must have at least 2 sites"));
        }
        Ok(basis)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    /// Number of axes the lattice was declared with.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn index(&self, coords: [usize; 3]) -> usize {
        coords[0] + self.dims[0] * (coords[1] + self.dims[1] * coords[2])
    }

    pub fn try_index(&self, coords: [usize; 3]) -> Result<usize> {
        if coords.iter().zip(&self.dims).any(|(c, d)| c >= d) {
            return Err(Error::invalid(format!(
                "coordinates {coords:?} outside lattice {:?}",
                self.dims
            )));
        }
        Ok(self.index(coords))
    }

    pub fn coords(&self, index: usize) -> [usize; 3] {
        let [n1, n2, _] = self.dims;
        [index % n1, (index / n1) % n2, index / (n1 * n2)]
    }

    /// Site one step along `axis`, if it exists.
    pub fn neighbor(&self, index: usize, axis: usize) -> Option<usize> {
        let mut c = self.coords(index);
        c[axis] += 1;
        (c[axis] < self.dims[axis]).then(|| self.index(c))
    }
}

/// Dense Hermitian single-particle operator.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Wraps `matrix` after checking `‖M − M†‖_max ≤ 1e−12`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::invalid(format!(
                "operator must be square and nonempty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = linalg::hermiticity_defect(&matrix);
        if !(defect <= HERMITIAN_TOL) {
            return Err(Error::invalid(format!(
                "matrix is not Hermitian: ‖M − M†‖_max = {defect:e}"
            )));
        }
        Ok(HermitianOperator { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.matrix)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn try_add(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(HermitianOperator {
            matrix: &self.matrix + &other.matrix,
        })
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;

    /// Panics on a dimension mismatch; use [`HermitianOperator::try_add`] to
    /// get an error instead.
    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        self.try_add(rhs).expect("operator dimensions differ")
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for HermitianOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let rows = |f: fn(&Complex64) -> f64| {
            (0..n)
                .map(|i| (0..n).map(|j| f(&self.matrix[(i, j)])).collect())
                .collect()
        };
        OperatorJson {
            dim: n,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HermitianOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = OperatorJson::deserialize(deserializer)?;
        let n = raw.dim;
        let shape_ok =
            raw.re.len() == n && raw.im.len() == n && raw.re.iter().chain(&raw.im).all(|row| row.len() == n);
        if !shape_ok {
            return Err(D::Error::custom("operator rows do not match dim"));
        }
        let matrix = CMatrix::from_fn(n, n, |i, j| Complex64::new(raw.re[i][j], raw.im[i][j]));
        HermitianOperator::new(matrix).map_err(D::Error::custom)
    }
}

/// Sign of the hopping term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HoppingSign {
    /// `+J c†c + h.c.`, used by the engineered chains.
    Positive,
    /// `−J c†c + h.c.`, used by the uniform ring.
    Negative,
}

impl HoppingSign {
    pub fn factor(self) -> f64 {
        match self {
            HoppingSign::Positive => 1.0,
            HoppingSign::Negative => -1.0,
        }
    }
}

/// Tridiagonal open-chain Hamiltonian with `H[n][n+1] = sign·J_n`.
pub fn chain_hamiltonian(profile: &CouplingProfile, sign: HoppingSign) -> Result<HermitianOperator> {
    profile.validate()?;
    let n = profile.sites();
    let mut h = CMatrix::zeros(n, n);
    for (i, &j) in profile.values.iter().enumerate() {
        let v = Complex64::new(sign.factor() * j, 0.0);
        h[(i, i + 1)] = v;
        h[(i + 1, i)] = v;
    }
    Ok(HermitianOperator { matrix: h })
}

/// Uniform ring `H = −J Σ (c†_i c_{i+1} + h.c.)` with periodic closure.
pub fn ring_hamiltonian(n: usize, j: f64) -> Result<HermitianOperator> {
    if n < 3 {
        return Err(Error::invalid(format!("ring needs at least 3 sites, got N={n}")));
    }
    if !(j > 0.0) || !j.is_finite() {
        return Err(Error::invalid(format!("hopping must be positive, got J={j}")));
    }
    let mut h = CMatrix::zeros(n, n);
    let v = Complex64::new(-j, 0.0);
    for i in 0..n {
        let next = (i + 1) % n;
        h[(i, next)] = v;
        h[(next, i)] = v;
    }
    Ok(HermitianOperator { matrix: h })
}

/// Analytic ring spectrum `−2J cos(2πq/N)`, ascending.
pub fn ring_spectrum(n: usize, j: f64) -> Vec<f64> {
    let mut e: Vec<f64> = (0..n)
        .map(|q| -2.0 * j * (2.0 * PI * q as f64 / n as f64).cos())
        .collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Axis Hamiltonians `H_i` of an arbitrary bond field, each embedded in the
/// full site basis (hopping sign `+`).
pub fn field_axis_hamiltonians(field: &BondField) -> Result<Vec<HermitianOperator>> {
    field.check_complete()?;
    let basis = field.basis();
    let d = basis.dim();
    let mut out = vec![CMatrix::zeros(d, d); basis.rank()];
    for (site, axis) in field.required_bonds() {
        let other = basis.neighbor(site, axis).expect("bond stays inside lattice");
        let v = Complex64::new(field.bond(site, axis)?, 0.0);
        out[axis][(site, other)] = v;
        out[axis][(other, site)] = v;
    }
    Ok(out
        .into_iter()
        .map(|matrix| HermitianOperator { matrix })
        .collect())
}

/// Axis Hamiltonians of an engineered lattice with the default dimension cap.
pub fn lattice_axis_hamiltonians(eng: &LatticeEngineering) -> Result<Vec<HermitianOperator>> {
    lattice_axis_hamiltonians_with_limit(eng, DEFAULT_MAX_DIM)
}

pub fn lattice_axis_hamiltonians_with_limit(
    eng: &LatticeEngineering,
    max_dim: usize,
) -> Result<Vec<HermitianOperator>> {
    eng.validate()?;
    let dim = eng.dim();
    if dim > max_dim {
        return Err(Error::Resource { dim, max: max_dim });
    }
    field_axis_hamiltonians(&BondField::from_engineering(eng)?)
}

/// Total Hamiltonian `Σ_i H_i` of an engineered lattice.
pub fn lattice_hamiltonian(eng: &LatticeEngineering) -> Result<HermitianOperator> {
    lattice_hamiltonian_with_limit(eng, DEFAULT_MAX_DIM)
}

pub fn lattice_hamiltonian_with_limit(eng: &LatticeEngineering, max_dim: usize) -> Result<HermitianOperator> {
    let axes = lattice_axis_hamiltonians_with_limit(eng, max_dim)?;
    let mut total = axes[0].clone();
    for h in &axes[1..] {
        total = total.try_add(h)?;
    }
    Ok(total)
}

/// `‖AB − BA‖_max`
pub fn commutator_norm(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    commutator_norm_matrix(a.matrix(), b.matrix())
}

pub fn commutator_norm_matrix(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    Ok(linalg::max_abs(&(a * b - b * a)))
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V Λ V†`
    pub fn reconstruct(&self) -> CMatrix {
        let diag: Vec<Complex64> = self.eigenvalues.iter().map(|&e| Complex64::new(e, 0.0)).collect();
        linalg::conjugate_diagonal(&self.eigenvectors, &diag)
    }

    /// `‖V†V − I‖_max`
    pub fn orthonormality_defect(&self) -> f64 {
        linalg::unitarity_defect(&self.eigenvectors)
    }

    /// `‖HV − VΛ‖_max`
    pub fn residual(&self, h: &HermitianOperator) -> f64 {
        let mut v_lambda = self.eigenvectors.clone();
        for (j, mut col) in v_lambda.column_iter_mut().enumerate() {
            col *= Complex64::new(self.eigenvalues[j], 0.0);
        }
        linalg::max_abs(&(h.matrix() * &self.eigenvectors - v_lambda))
    }
}

/// Dense Hermitian eigendecomposition with eigenvalues sorted ascending.
pub fn spectral_decompose(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    decompose_matrix(h.matrix())
}

/// Same as [`spectral_decompose`] for a raw matrix; rejects non-Hermitian
/// input.
pub fn decompose_matrix(m: &CMatrix) -> Result<SpectralDecomposition> {
    let op = HermitianOperator::new(m.clone())?;
    let symmetrized = (op.matrix() + op.matrix().adjoint()).map(|z| z * 0.5);
    let eig = SymmetricEigen::new(symmetrized);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = order.len();
    let mut vectors = CMatrix::from_element(n, n, ZERO);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(SpectralDecomposition {
        eigenvalues: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        eigenvectors: vectors,
    })
}

/// Closed-form eigenvalue `ε(k)` of the engineered chain, `k = 1..N`.
fn engineered_level(eng: ChainEngineering, k: usize) -> f64 {
    let n = eng.n as f64;
    let m = eng.m as f64;
    let k_f = k as f64;
    if k <= eng.n / 2 {
        -n + 2.0 * (k_f - m) - 1.0
    } else {
        -n + 2.0 * (k_f + m) - 1.0
    }
}

/// Closed-form spectrum of the engineered chain, ascending.
///
/// Levels are odd integers (even integers for odd `N`) spaced by 2, except
/// across the middle where the spacing is `2(2m + 1)`.
pub fn engineered_spectrum(eng: ChainEngineering) -> Result<Vec<f64>> {
    eng.validate()?;
    Ok((1..=eng.n).map(|k| engineered_level(eng, k)).collect())
}

/// Spacing between the two middle levels of an even engineered chain,
/// `2(2m + 1)`. `None` for odd `N`.
pub fn engineered_middle_gap(eng: ChainEngineering) -> Result<Option<f64>> {
    eng.validate()?;
    if eng.n % 2 == 1 {
        return Ok(None);
    }
    let half = eng.n / 2;
    Ok(Some(
        engineered_level(eng, half + 1) - engineered_level(eng, half),
    ))
}

/// Eigenvector of level `k` (1-based) of the engineered chain, built from
/// the three-term recurrence `J_{n−1}φ_{n−1} + J_n φ_{n+1} = ε φ_n` seeded by
/// `φ_1 = 1`, then normalized.
pub fn recurrence_eigenvector(eng: ChainEngineering, k: usize) -> Result<Vec<f64>> {
    eng.validate()?;
    if k == 0 || k > eng.n {
        return Err(Error::invalid(format!("level index {k} outside 1..={}", eng.n)));
    }
    let profile = engineered_profile(eng)?;
    let j = &profile.values;
    let eps = engineered_level(eng, k);
    let mut phi = vec![0.0; eng.n];
    phi[0] = 1.0;
    phi[1] = eps * phi[0] / j[0];
    for n in 1..eng.n - 1 {
        phi[n + 1] = (eps * phi[n] - j[n - 1] * phi[n - 1]) / j[n];
    }
    let norm = phi.iter().map(|x| x * x).sum::<f64>().sqrt();
    phi.iter_mut().for_each(|x| *x /= norm);
    Ok(phi)
}
