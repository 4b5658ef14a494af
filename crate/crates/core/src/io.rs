//! JSON/CSV helpers shared by the file formats and the CLI.

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

/// Nested `[[[re, im], ...], ...]` to a matrix. Ragged or empty input is malformed.
pub fn rows_to_matrix(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let nrows = rows.len();
    if nrows == 0 {
        return Err(Error::Malformed("empty matrix".into()));
    }
    let ncols = rows[0].len();
    if ncols == 0 {
        return Err(Error::Malformed("empty matrix row".into()));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != ncols) {
        return Err(Error::Malformed(format!(
            "ragged matrix: row {i} has {} entries, expected {ncols}",
            r.len()
        )));
    }
    let m = CMatrix::from_fn(nrows, ncols, |i, j| {
        let [re, im] = rows[i][j];
        Complex64::new(re, im)
    });
    crate::linalg::ensure_finite(&m)?;
    Ok(m)
}

/// Rounds to 12 significant digits; maps `-0.0` to `0.0`.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// Positional decimal with 12 significant digits, e.g. `0.222222222222`,
/// `3.14159265359`, `0.00000000000`.
pub fn fmt_sig12(x: f64) -> String {
    let x = sig12(x);
    if x == 0.0 {
        return format!("{:.*}", SIGNIFICANT_DIGITS - 1, 0.0);
    }
    let exponent = x.abs().log10().floor() as i64;
    let decimals = (SIGNIFICANT_DIGITS as i64 - 1 - exponent).max(0) as usize;
    format!("{:.*}", decimals, x)
}

/// Rounds every number in a JSON tree with [`sig12`].
pub fn canonicalize(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    if let Some(r) = serde_json::Number::from_f64(sig12(f)) {
                        *n = r;
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(canonicalize),
        Value::Object(map) => map.values_mut().for_each(canonicalize),
        _ => {}
    }
}
