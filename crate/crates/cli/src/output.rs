//! File formats: sample CSVs, JSON reports and the spec hash.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};
use squeezelab::{CoordinateKind, SampleMeta, SampledWavefunction};

use crate::config::Format;
use crate::error::CliError;

pub const CSV_HEADER: [&str; 4] = ["coordinate", "re", "im", "abs2"];

/// 17 significant digits, enough to reproduce every binary64 value.
fn full(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_bytes(w: &SampledWavefunction) -> Result<Vec<u8>, CliError> {
    let mut out = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Failed(format!("csv encoding failed: {e}"));
    out.write_record(CSV_HEADER).map_err(fail)?;
    for (x, v) in w.grid().iter().zip(w.values()) {
        out.write_record([full(*x), full(v.re), full(v.im), full(v.norm_sqr())])
            .map_err(fail)?;
    }
    out.into_inner()
        .map_err(|e| CliError::Failed(format!("csv encoding failed: {e}")))
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| CliError::Failed(format!("json encoding failed: {e}")))?;
    v.push(b'\n');
    Ok(v)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Write samples as `<stem>.csv` or `<stem>.json` in `dir`; returns the file name.
pub fn write_samples(dir: &Path, stem: &str, w: &SampledWavefunction, format: Format) -> Result<String, CliError> {
    let (name, bytes) = match format {
        Format::Csv => (format!("{stem}.csv"), csv_bytes(w)?),
        Format::Json => (format!("{stem}.json"), json_bytes(w)?),
    };
    write_file(&dir.join(&name), &bytes)?;
    Ok(name)
}

/// Load a sample CSV written by [`csv_bytes`].
pub fn read_csv(path: &Path, kind: CoordinateKind, meta: SampleMeta) -> Result<SampledWavefunction, CliError> {
    let bad = |msg: String| CliError::Failed(format!("{}: {msg}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let header = rdr.headers().map_err(|e| bad(e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let mut grid = Vec::new();
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let field = |k: usize| -> Result<f64, CliError> {
            rec.get(k)
                .ok_or_else(|| bad("short record".into()))?
                .parse::<f64>()
                .map_err(|e| bad(e.to_string()))
        };
        grid.push(field(0)?);
        values.push(Complex64::new(field(1)?, field(2)?));
    }
    Ok(SampledWavefunction::new(kind, grid, values, meta)?)
}

/// Hex SHA-256 of the canonical (compact, field-ordered) JSON encoding.
pub fn spec_hash<T: Serialize>(value: &T) -> Result<String, CliError> {
    let bytes = serde_json::to_vec(value).map_err(|e| CliError::Failed(format!("json encoding failed: {e}")))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}
