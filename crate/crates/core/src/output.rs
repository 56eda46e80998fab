//! Deterministic text emission: fixed-precision CSV values and JSON files.
//!
//! Golden-file regression tests depend on every byte, so formatting is
//! pinned here: 12 significant digits, scientific notation below 1e-4,
//! `.` decimal separator, LF line endings, no timestamps.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::Result;

/// Formats one CSV numeric value with 12 significant digits, switching to
/// scientific notation for small magnitudes.
pub fn format_value(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    let a = x.abs();
    if a < 1e-4 {
        format!("{x:.11e}")
    } else {
        let mag = a.log10().floor() as i32;
        let decimals = (11 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    }
}

/// Writes a CSV file with a header row and LF line endings.
pub fn write_csv<P, I>(path: P, header: &[&str], rows: I) -> Result<()>
where
    P: AsRef<Path>,
    I: IntoIterator<Item = Vec<f64>>,
{
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(header.join(",").as_bytes())?;
    w.write_all(b"\n")?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
        w.write_all(line.join(",").as_bytes())?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a CSV file whose cells are already formatted strings (for rows
/// mixing integer and numeric columns).
pub fn write_csv_rows<P, I>(path: P, header: &[&str], rows: I) -> Result<()>
where
    P: AsRef<Path>,
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(header.join(",").as_bytes())?;
    w.write_all(b"\n")?;
    for row in rows {
        w.write_all(row.join(",").as_bytes())?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a JSON value with sorted keys and a trailing newline.
pub fn write_json<P: AsRef<Path>>(path: P, value: &serde_json::Value) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| crate::Error::InvalidConfig(format!("JSON serialization: {e}")))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
