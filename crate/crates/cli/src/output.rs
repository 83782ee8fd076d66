//! CSV artifacts: header, rows, then `#` metadata lines. The last line is
//! always the SHA-256 of the scenario file.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const RATES_SCHEMA: &str = "raqmimo-rates/1";
pub const RATES_HEADER: [&str; 8] =
    ["sweep_value", "case", "rate_mc_mean", "rate_mc_stderr", "rate_jensen", "rate_closed_form", "trials", "seed"];

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Shortest round-trip decimal; NaN becomes an empty field.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvArtifact {
    pub schema: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub meta: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub config_sha256: String,
}

impl CsvArtifact {
    pub fn new(schema: &str, header: &[&str], config_bytes: &[u8]) -> Self {
        Self {
            schema: schema.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            meta: Vec::new(),
            seed: None,
            config_sha256: sha256_hex(config_bytes),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl std::fmt::Display) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        let _ = writeln!(out, "# schema={}", self.schema);
        let _ = writeln!(out, "# version={}", env!("CARGO_PKG_VERSION"));
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "# seed={seed}");
        }
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}={}", v.replace(['\n', '\r'], " "));
        }
        let _ = writeln!(out, "# config_sha256={}", self.config_sha256);
        out
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so an interrupted run never leaves a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir.display(), e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| CliError::io(path.display(), e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path.display(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path.display(), e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn render_layout() {
        let mut a = CsvArtifact::new("s/1", &["x", "y"], b"");
        a.push(vec![num(1.5), num(f64::NAN)]);
        a.seed = Some(7);
        a.note("figure", "fig5");
        let text = a.render();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,y");
        assert_eq!(lines[1], "1.5,");
        assert_eq!(lines[2], "# schema=s/1");
        assert!(lines.contains(&"# seed=7"));
        assert!(lines.last().unwrap().starts_with("# config_sha256=e3b0c442"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, "a\n").unwrap();
        write_atomic(&p, "b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "b\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
