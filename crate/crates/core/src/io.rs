//! Serialization formats shared by the library and the command-line tool.
//!
//! Complex numbers are written as `{"re": .., "im": ..}` objects. Spectra and
//! fidelity curves go to CSV with a header row, `.` decimal separator and
//! `\n` line endings; floats use Rust's shortest round-trip formatting so
//! identical results give byte-identical files.

use serde::{Deserialize, Serialize};

use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(z: ComplexJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// `#[serde(with = "crate::io::complex")]` for a single complex field.
pub mod complex {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        ComplexJson::from(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        ComplexJson::deserialize(d).map(Complex64::from)
    }
}

/// `#[serde(with = "crate::io::complex_vec")]` for a list of complex values.
pub mod complex_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(zs.iter().map(|&z| ComplexJson::from(z)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        Vec::<ComplexJson>::deserialize(d).map(|v| v.into_iter().map(Complex64::from).collect())
    }
}

/// Spectrum as CSV with header `index,eigenvalue`.
pub fn spectrum_csv(eigenvalues: &[f64]) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (i, e) in eigenvalues.iter().enumerate() {
        out.push_str(&format!("{i},{e}\n"));
    }
    out
}

/// Two-column CSV with the given header names.
pub fn two_column_csv(header: (&str, &str), xs: &[f64], ys: &[f64]) -> String {
    let mut out = format!("{},{}\n", header.0, header.1);
    for (x, y) in xs.iter().zip(ys) {
        out.push_str(&format!("{x},{y}\n"));
    }
    out
}

/// CSV with one named column per slice; rows stop at the shortest column.
pub fn columns_csv(headers: &[&str], columns: &[&[f64]]) -> String {
    let mut out = headers.join(",");
    out.push('\n');
    let rows = columns.iter().map(|c| c.len()).min().unwrap_or(0);
    for r in 0..rows {
        let row: Vec<String> = columns.iter().map(|c| c[r].to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
