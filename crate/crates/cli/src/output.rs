//! Artifact writing, content-hashed manifests and the pass/fail summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Upper bound on `value`; absent for yes/no checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub pass: bool,
}

/// Declared invariants of a run with their (possibly overridden) bounds.
#[derive(Clone, Debug)]
pub struct Checks {
    bounds: BTreeMap<String, f64>,
    items: Vec<Check>,
}

impl Checks {
    pub fn new(defaults: &[(&str, f64)], overrides: &BTreeMap<String, f64>) -> Result<Self, CliError> {
        let mut bounds: BTreeMap<String, f64> = defaults.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for (k, v) in overrides {
            match bounds.get_mut(k) {
                Some(b) => *b = *v,
                None => {
                    let known: Vec<&str> = defaults.iter().map(|d| d.0).collect();
                    return Err(CliError::Invalid(format!(
                        "unknown tolerance {k:?}; this subcommand declares: {}",
                        known.join(", ")
                    )));
                }
            }
        }
        Ok(Self { bounds, items: Vec::new() })
    }

    pub fn bound(&self, name: &str) -> f64 {
        self.bounds[name]
    }

    /// Records `value ≤ bound(name)`; NaN fails.
    pub fn at_most(&mut self, name: &str, value: f64) {
        let bound = self.bound(name);
        self.items.push(Check { name: name.into(), value, bound: Some(bound), pass: value <= bound });
    }

    pub fn holds(&mut self, name: &str, ok: bool) {
        self.items.push(Check { name: name.into(), value: f64::from(u8::from(ok)), bound: None, pass: ok });
    }

    pub fn into_vec(self) -> Vec<Check> {
        self.items
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub subcommand: String,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub runs: Vec<RunRecord>,
    pub files: Vec<FileEntry>,
}

/// Writes files under one directory and remembers their hashes.
pub struct Artifacts {
    dir: PathBuf,
    files: BTreeMap<String, FileEntry>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(2 * bytes.len()), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl Artifacts {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), files: BTreeMap::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        let entry = FileEntry { path: name.into(), bytes: bytes.len() as u64, sha256: hex(&Sha256::digest(bytes)) };
        self.files.insert(name.into(), entry);
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn write_csv(&mut self, name: &str, header: &[String], rows: &[Vec<f64>]) -> Result<(), CliError> {
        let mut text = header.join(",");
        text.push('\n');
        for row in rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
        self.write(name, text.as_bytes())
    }

    /// Writes `manifest.json` listing every file written so far.
    pub fn finish(self, run: RunRecord) -> Result<Manifest, CliError> {
        let manifest = Manifest { runs: vec![run], files: self.files.into_values().collect() };
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        let path = self.dir.join(MANIFEST);
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(manifest)
    }
}

pub fn read_manifest(path: &Path) -> Result<Manifest, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Table of every declared check; the flag is false when any check failed.
pub fn summarize(manifest: &Manifest) -> (String, bool) {
    if manifest.runs.is_empty() {
        return ("no runs\n".into(), true);
    }
    let mut out = String::new();
    let mut ok = true;
    let width = manifest.runs.iter().flat_map(|r| &r.checks).map(|c| c.name.len()).max().unwrap_or(0).max(5);
    for run in &manifest.runs {
        let _ = writeln!(out, "{}", run.subcommand);
        if run.checks.is_empty() {
            let _ = writeln!(out, "  (no declared invariants)");
        }
        for c in &run.checks {
            ok &= c.pass;
            let verdict = if c.pass { "ok  " } else { "FAIL" };
            let bound = c.bound.map_or_else(|| "-".to_string(), |b| format!("{b:.3e}"));
            let _ = writeln!(out, "  {verdict}  {:<width$}  {:>12.4e}  ≤ {bound}", c.name, c.value);
        }
    }
    (out, ok)
}

pub fn report_summary(path: &Path) -> Result<(String, bool), CliError> {
    Ok(summarize(&read_manifest(path)?))
}
