//! Nearest-neighbor coupling profiles.
//!
//! The engineered family is
//!
//! ```text
//! J_n = sqrt(m(1 − (−1)^n) + n) · sqrt(m(1 − (−1)^n) + N − n),   n = 1..N−1
//! ```
//!
//! which reduces to `sqrt(n(N − n))` at `m = 0`. Odd bonds are stretched by
//! `2m`, opening a gap of `2(2m + 1)` in the middle of the (odd integer)
//! spectrum while keeping it commensurate.
//!
//! For lattices the module also checks the condition under which the axis
//! Hamiltonians commute: every hopping along axis `k` may depend only on the
//! layer coordinate `n_k`. [`plaquette_commutation_check`] tests the same thing
//! locally on every 2×2 plaquette.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::SiteBasis;

/// Absolute equality tolerance on hopping values for the layer and
/// plaquette checks.
pub const HOPPING_TOL: f64 = 1e-12;

/// Parameters `(N, m)` of one engineered chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainEngineering {
    #[serde(rename = "N")]
    pub n: usize,
    pub m: usize,
}

impl ChainEngineering {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        let eng = ChainEngineering { n, m };
        eng.validate()?;
        Ok(eng)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid(format!(
                "chain needs at least 2 sites, got N={}",
                self.n
            )));
        }
        if self.m > 0 && self.n % 2 == 1 {
            return Err(Error::invalid(format!(
                "odd N unsupported for m>0 (N={}, m={})",
                self.n, self.m
            )));
        }
        Ok(())
    }
}

/// Hopping amplitudes `J_1..J_{N−1}` of an open chain with `N` sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingProfile {
    #[serde(rename = "N")]
    pub n: usize,
    pub values: Vec<f64>,
}

impl CouplingProfile {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let profile = CouplingProfile {
            n: values.len() + 1,
            values,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.values.len() + 1 != self.n {
            return Err(Error::invalid(format!(
                "profile for N={} must hold N-1 values, got {}",
                self.n,
                self.values.len()
            )));
        }
        if let Some(bad) = self.values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::invalid(format!(
                "hopping amplitudes must be positive and finite, got {bad}"
            )));
        }
        Ok(())
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    /// Largest `|J_n − J_{N−n}|`.
    pub fn mirror_defect(&self) -> f64 {
        let len = self.values.len();
        (0..len)
            .map(|i| (self.values[i] - self.values[len - 1 - i]).abs())
            .fold(0.0, f64::max)
    }
}

/// The engineered hopping profile for `(N, m)`.
pub fn engineered_profile(eng: ChainEngineering) -> Result<CouplingProfile> {
    eng.validate()?;
    let n_sites = eng.n as f64;
    let m = eng.m as f64;
    let values = (1..eng.n)
        .map(|n| {
            let stretch = if n % 2 == 1 { 2.0 * m } else { 0.0 };
            let n = n as f64;
            (stretch + n).sqrt() * (stretch + n_sites - n).sqrt()
        })
        .collect();
    Ok(CouplingProfile { n: eng.n, values })
}

/// Uniform open-chain profile with every hopping equal to `j`.
pub fn uniform_profile(n: usize, j: f64) -> Result<CouplingProfile> {
    if n < 2 {
        return Err(Error::invalid(format!("chain needs at least 2 sites, got N={n}")));
    }
    if !(j > 0.0) || !j.is_finite() {
        return Err(Error::invalid(format!("hopping must be positive, got J={j}")));
    }
    Ok(CouplingProfile {
        n,
        values: vec![j; n - 1],
    })
}

/// One engineered chain per lattice axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeEngineering {
    pub axes: Vec<ChainEngineering>,
}

impl LatticeEngineering {
    pub fn new(axes: Vec<ChainEngineering>) -> Result<Self> {
        let eng = LatticeEngineering { axes };
        eng.validate()?;
        Ok(eng)
    }

    /// Convenience constructor from `(N, m)` pairs.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(n, m)| ChainEngineering { n, m }).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 3 {
            return Err(Error::invalid(format!(
                "lattice needs 1 to 3 axes, got {}",
                self.axes.len()
            )));
        }
        for axis in &self.axes {
            axis.validate()?;
        }
        Ok(())
    }

    pub fn basis(&self) -> SiteBasis {
        let dims: Vec<usize> = self.axes.iter().map(|a| a.n).collect();
        SiteBasis::new(&dims).expect("validated axes have N >= 2")
    }

    pub fn dim(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn profiles(&self) -> Result<Vec<CouplingProfile>> {
        self.axes.iter().map(|&a| engineered_profile(a)).collect()
    }
}

/// Hopping amplitude on every nearest-neighbor bond of a rectangular lattice.
///
/// A bond is keyed by its lower site and the axis it points along, so site
/// `r` and axis `k` name the bond `r → r + e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BondField {
    basis: SiteBasis,
    bonds: HashMap<(usize, usize), f64>,
}

impl BondField {
    pub fn new(basis: SiteBasis) -> Self {
        BondField {
            basis,
            bonds: HashMap::new(),
        }
    }

    /// Layer-uniform field whose axis-`k` bonds follow the axis profile.
    pub fn from_profiles(profiles: &[CouplingProfile]) -> Result<Self> {
        let dims: Vec<usize> = profiles.iter().map(|p| p.n).collect();
        let basis = SiteBasis::new(&dims)?;
        let mut field = BondField::new(basis);
        for site in 0..basis.dim() {
            let coords = basis.coords(site);
            for (axis, profile) in profiles.iter().enumerate() {
                if coords[axis] + 1 < basis.dims()[axis] {
                    field.bonds.insert((site, axis), profile.values[coords[axis]]);
                }
            }
        }
        Ok(field)
    }

    pub fn from_engineering(eng: &LatticeEngineering) -> Result<Self> {
        Self::from_profiles(&eng.profiles()?)
    }

    pub fn basis(&self) -> SiteBasis {
        self.basis
    }

    /// Set the bond from `coords` along `axis` (coordinates are 0-based).
    pub fn set(&mut self, coords: [usize; 3], axis: usize, value: f64) -> Result<()> {
        let site = self.basis.try_index(coords)?;
        if axis >= 3 || coords[axis] + 1 >= self.basis.dims()[axis] {
            return Err(Error::invalid(format!(
                "no bond from {coords:?} along axis {axis}"
            )));
        }
        self.bonds.insert((site, axis), value);
        Ok(())
    }

    /// Bond from linear site `site` along `axis`; missing entries are an
    /// input error.
    pub fn bond(&self, site: usize, axis: usize) -> Result<f64> {
        self.bonds.get(&(site, axis)).copied().ok_or_else(|| {
            Error::invalid(format!(
                "missing bond at site {:?} along axis {axis}",
                self.basis.coords(site)
            ))
        })
    }

    /// Every `(site, axis)` pair that must carry a bond.
    pub fn required_bonds(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let basis = self.basis;
        (0..basis.dim()).flat_map(move |site| {
            let coords = basis.coords(site);
            (0..3)
                .filter(move |&axis| coords[axis] + 1 < basis.dims()[axis])
                .map(move |axis| (site, axis))
        })
    }

    pub fn check_complete(&self) -> Result<()> {
        for (site, axis) in self.required_bonds() {
            self.bond(site, axis)?;
        }
        Ok(())
    }
}

/// True iff, for every axis `k`, the bond value depends only on the layer
/// coordinate `n_k`.
pub fn layer_uniformity_check(field: &BondField) -> Result<bool> {
    field.check_complete()?;
    let basis = field.basis();
    let mut layer_value: HashMap<(usize, usize), f64> = HashMap::new();
    for (site, axis) in field.required_bonds() {
        let value = field.bond(site, axis)?;
        let layer = basis.coords(site)[axis];
        match layer_value.get(&(axis, layer)) {
            Some(&reference) if (reference - value).abs() > HOPPING_TOL => return Ok(false),
            Some(_) => {}
            None => {
                layer_value.insert((axis, layer), value);
            }
        }
    }
    Ok(true)
}

/// Which pair of parallel bonds of a plaquette disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlaquetteEquality {
    /// `l12 ≠ l34`: the two bonds along the first axis.
    L12L34,
    /// `l13 ≠ l24`: the two bonds along the second axis.
    L13L24,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaquetteViolation {
    pub plaquette: usize,
    pub equality: PlaquetteEquality,
    pub mismatch: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaquetteReport {
    pub violations: Vec<PlaquetteViolation>,
    pub pass: bool,
}

/// Check `l12 = l34` and `l13 = l24` on every 2×2 plaquette.
///
/// Plaquettes are numbered in enumeration order: axis pairs `(i, j)` with
/// `i < j`, then lower-corner sites in linear order. Corners are
/// `1 = r`, `2 = r + e_i`, `3 = r + e_j`, `4 = r + e_i + e_j`.
pub fn plaquette_commutation_check(field: &BondField, tol: f64) -> Result<PlaquetteReport> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    field.check_complete()?;
    let basis = field.basis();
    let dims = basis.dims();
    let mut violations = Vec::new();
    let mut id = 0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            for site in 0..basis.dim() {
                let c = basis.coords(site);
                if c[i] + 1 >= dims[i] || c[j] + 1 >= dims[j] {
                    continue;
                }
                let corner2 = basis.neighbor(site, i).expect("inside lattice");
                let corner3 = basis.neighbor(site, j).expect("inside lattice");
                let l12 = field.bond(site, i)?;
                let l34 = field.bond(corner3, i)?;
                let l13 = field.bond(site, j)?;
                let l24 = field.bond(corner2, j)?;
                if (l12 - l34).abs() > tol {
                    violations.push(PlaquetteViolation {
                        plaquette: id,
                        equality: PlaquetteEquality::L12L34,
                        mismatch: (l12 - l34).abs(),
                    });
                }
                if (l13 - l24).abs() > tol {
                    violations.push(PlaquetteViolation {
                        plaquette: id,
                        equality: PlaquetteEquality::L13L24,
                        mismatch: (l13 - l24).abs(),
                    });
                }
                id += 1;
            }
        }
    }
    Ok(PlaquetteReport {
        pass: violations.is_empty(),
        violations,
    })
}
