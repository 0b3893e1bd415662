//! Small dense-matrix helpers shared by the physics modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest entry modulus, `‖M‖_max`.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `‖M − M†‖_max`
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `‖M†M − I‖_max`
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let gram = m.adjoint() * m;
    let id = CMatrix::identity(gram.nrows(), gram.ncols());
    max_abs(&(gram - id))
}

/// `V · diag(phases) · V†` without materializing the diagonal matrix.
pub fn conjugate_diagonal(vectors: &CMatrix, diag: &[Complex64]) -> CMatrix {
    let mut scaled = vectors.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= diag[j];
    }
    scaled * vectors.adjoint()
}

/// Unitary `exp(−i·E·t)` on the eigenbasis given by the columns of `vectors`.
pub fn propagator_from_modes(vectors: &CMatrix, energies: &[f64], t: f64) -> CMatrix {
    let phases: Vec<Complex64> = energies
        .iter()
        .map(|&e| Complex64::from_polar(1.0, -e * t))
        .collect();
    conjugate_diagonal(vectors, &phases)
}

/// Real symmetric matrix lifted to complex entries.
pub fn from_real(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}
