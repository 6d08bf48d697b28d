//! CSV emission and run manifests.
//!
//! Numbers are written as `{:.16e}` (17 significant digits), which parses
//! back to the identical `f64`. Lines end in LF and a header row is always
//! present.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tavis_core::{QGrid, TimeSeries};

use crate::{CliError, Result};

pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders a header and numeric rows as CSV text.
pub fn render_csv<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<f64>>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            write!(out, "{}", format_value(*v)).expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))
}

/// Columns `t, t_over_tr`, then one per observable.
pub fn time_series_csv(ts: &TimeSeries<f64>) -> String {
    let mut header = vec!["t", "t_over_tr"];
    header.extend(ts.columns.iter().map(String::as_str));
    let rows = ts.times.iter().zip(&ts.rows).map(|(t, row)| {
        let mut line = vec![*t, t / ts.revival_time];
        line.extend(row);
        line
    });
    render_csv(&header, rows)
}

/// Columns `re, im, Q`, real part varying fastest.
pub fn qgrid_csv(grid: &QGrid<f64>) -> String {
    let rows = (0..grid.im.count)
        .flat_map(|j| (0..grid.re.count).map(move |i| vec![grid.re.value(i), grid.im.value(j), grid.get(i, j)]));
    render_csv(&["re", "im", "Q"], rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Csv {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

pub fn parse_csv(text: &str) -> Result<Csv> {
    let bad = |line: usize, msg: String| CliError::Usage(format!("malformed CSV at line {line}: {msg}"));
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| bad(1, "missing header".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .enumerate()
        .map(|(i, line)| {
            let row = line
                .split(',')
                .map(|v| v.parse::<f64>().map_err(|e| bad(i + 2, format!("`{v}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != header.len() {
                return Err(bad(i + 2, format!("{} fields, expected {}", row.len(), header.len())));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Csv { header, rows })
}

pub fn read_csv(path: &Path) -> Result<Csv> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("cannot read {}", path.display()), e))?;
    parse_csv(&text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    /// Path relative to the manifest's directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Record of one `run` invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: serde_json::Value,
    pub version: String,
    pub duration_seconds: f64,
    pub files: Vec<FileEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_entry(dir: &Path, name: &str) -> Result<FileEntry> {
    let path = dir.join(name);
    let bytes = fs::read(&path).map_err(|e| CliError::io(format!("cannot read {}", path.display()), e))?;
    Ok(FileEntry {
        path: name.to_string(),
        sha256: sha256_hex(&bytes),
        bytes: bytes.len() as u64,
    })
}

pub fn write_manifest(path: &Path, manifest: &RunManifest) -> Result<()> {
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    write_file(path, &text)
}

/// Files whose current contents no longer match the manifest.
pub fn stale_entries(dir: &Path, manifest: &RunManifest) -> Vec<PathBuf> {
    manifest
        .files
        .iter()
        .filter(|f| file_entry(dir, &f.path).map_or(true, |now| now != **f))
        .map(|f| dir.join(&f.path))
        .collect()
}
