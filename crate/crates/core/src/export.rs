//! Text formats shared by the CSV and JSON writers.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::Result;

/// Formats `x` with 17 significant digits in scientific notation, `.` as the
/// decimal separator. Non-finite values are written as the empty string.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

/// [`fmt_f64`] with `None` written as an empty cell.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)?;
    Ok(())
}
