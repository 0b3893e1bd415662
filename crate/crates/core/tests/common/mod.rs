//! Brute-force many-fermion reference: occupation-number basis with
//! Jordan-Wigner signs and a Taylor matrix exponential. Shares nothing with
//! the eigendecomposition path of the library.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use qst_core::Complex64;

pub type M = DMatrix<Complex64>;
pub type V = DVector<Complex64>;

/// All `d`-site occupation bitmasks with `n` particles, ascending.
pub fn fock_basis(d: usize, n: usize) -> Vec<u64> {
    assert!(d <= 20);
    (0u64..1 << d).filter(|s| s.count_ones() as usize == n).collect()
}

fn sign_below(s: u64, site: usize) -> f64 {
    if (s & ((1u64 << site) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Second-quantized `Σ h_ij c†_i c_j` restricted to `basis`.
pub fn many_body(h: &M, basis: &[u64]) -> M {
    let d = h.nrows();
    let index = |s: u64| basis.binary_search(&s).unwrap();
    let mut out = M::zeros(basis.len(), basis.len());
    for (col, &s) in basis.iter().enumerate() {
        for j in (0..d).filter(|&j| s & (1 << j) != 0) {
            let removed = s & !(1 << j);
            let sj = sign_below(s, j);
            for i in 0..d {
                if h[(i, j)] == Complex64::new(0.0, 0.0) || removed & (1 << i) != 0 {
                    continue;
                }
                let t = removed | (1 << i);
                let sign = sj * sign_below(removed, i);
                out[(index(t), col)] += h[(i, j)] * sign;
            }
        }
    }
    out
}

/// Fock amplitudes of the determinant built from the columns of `orbitals`:
/// `⟨S|ψ⟩ = det(orbitals[S, :])` for ordered occupied sites `S`.
pub fn slater_amplitudes(orbitals: &M, basis: &[u64]) -> V {
    let d = orbitals.nrows();
    V::from_iterator(
        basis.len(),
        basis.iter().map(|&s| {
            let rows: Vec<usize> = (0..d).filter(|&i| s & (1 << i) != 0).collect();
            orbitals.select_rows(&rows).determinant()
        }),
    )
}

/// `exp(a)` by scaling and squaring a truncated Taylor series.
pub fn expm(a: &M) -> M {
    let norm: f64 = a.iter().map(|z| z.norm()).sum::<f64>().max(1e-300);
    let squarings = (norm / 0.25).log2().ceil().max(0.0) as u32;
    let scaled = a / Complex64::new(2f64.powi(squarings as i32), 0.0);
    let n = a.nrows();
    let mut term = M::identity(n, n);
    let mut sum = M::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(−i H t) v`
pub fn evolve(h: &M, t: f64, v: &V) -> V {
    expm(&(h * Complex64::new(0.0, -t))) * v
}

pub fn overlap(a: &V, b: &V) -> Complex64 {
    a.dotc(b)
}

/// Real symmetric tridiagonal chain matrix with `+J` off-diagonals.
pub fn chain_matrix(couplings: &[f64]) -> M {
    let d = couplings.len() + 1;
    let mut h = M::zeros(d, d);
    for (n, &j) in couplings.iter().enumerate() {
        h[(n, n + 1)] = Complex64::new(j, 0.0);
        h[(n + 1, n)] = Complex64::new(j, 0.0);
    }
    h
}

/// `J_n` of the engineered chain written out directly (1-based `n`).
pub fn engineered_couplings(n_sites: usize, m: usize) -> Vec<f64> {
    (1..n_sites)
        .map(|n| {
            let alt = if n % 2 == 1 { 2.0 * m as f64 } else { 0.0 };
            ((alt + n as f64) * (alt + (n_sites - n) as f64)).sqrt()
        })
        .collect()
}
