//! Atomic file output.

use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

/// A file to be written once the run has succeeded.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub path: PathBuf,
    pub contents: String,
}

/// Write through a temporary file in the target directory, then rename over
/// the destination.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// `curve.csv` → `curve.json`; a `.json` primary gets `.sidecar.json`.
pub fn sidecar_path(primary: &Path) -> PathBuf {
    if primary.extension().is_some_and(|e| e == "json") {
        primary.with_extension("sidecar.json")
    } else {
        primary.with_extension("json")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replaces_existing_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        write_atomic(&path, "old\n").unwrap();
        write_atomic(&path, "new\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "new\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn missing_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(write_atomic(&dir.path().join("no/such/a.csv"), "x").is_err());
    }

    #[test]
    fn sidecars() {
        assert_eq!(
            sidecar_path(Path::new("out/curve.csv")),
            PathBuf::from("out/curve.json")
        );
        assert_eq!(sidecar_path(Path::new("r.json")), PathBuf::from("r.sidecar.json"));
        assert_eq!(sidecar_path(Path::new("curve")), PathBuf::from("curve.json"));
    }
}
