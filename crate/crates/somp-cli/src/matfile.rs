//! Plain-text matrix files: header-free CSV (one matrix row per line) or
//! whitespace-separated values. Files written here re-read to bit-identical
//! matrices.

use somp_core::{DenseMatrix, LinalgError};
use std::fs;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("{0}")]
pub struct MatrixFileError(String);

impl From<LinalgError> for MatrixFileError {
    fn from(e: LinalgError) -> Self {
        MatrixFileError(e.to_string())
    }
}

/// Reads a matrix, auto-detecting CSV versus whitespace separation.
pub fn read_matrix(path: &Path) -> Result<DenseMatrix, MatrixFileError> {
    let text = fs::read_to_string(path)
        .map_err(|e| MatrixFileError(format!("{}: {e}", path.display())))?;
    parse_matrix(&text, &path.display().to_string())
}

/// Parses matrix text. Errors name the source, the 1-based line, and the
/// 1-based field position.
pub fn parse_matrix(text: &str, name: &str) -> Result<DenseMatrix, MatrixFileError> {
    let comma_separated = text.contains(',');
    let mut rows = 0;
    let mut cols = 0;
    let mut data: Vec<f64> = Vec::new();
    for (line_index, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = if comma_separated {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        if rows == 0 {
            cols = fields.len();
        } else if fields.len() != cols {
            return Err(MatrixFileError(format!(
                "{name}:{}: expected {cols} fields, found {}",
                line_index + 1,
                fields.len()
            )));
        }
        for (field_index, field) in fields.iter().enumerate() {
            let value: f64 = field.parse().map_err(|_| {
                MatrixFileError(format!(
                    "{name}:{}:{}: not a real number: {field:?}",
                    line_index + 1,
                    field_index + 1
                ))
            })?;
            if !value.is_finite() {
                return Err(MatrixFileError(format!(
                    "{name}:{}:{}: entry must be finite, got {field:?}",
                    line_index + 1,
                    field_index + 1
                )));
            }
            data.push(value);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(MatrixFileError(format!("{name}: no matrix rows found")));
    }
    Ok(DenseMatrix::from_rows(rows, cols, data)?)
}

/// Writes a matrix as CSV with 17 significant digits, enough for every
/// value to round-trip exactly. Backs fixture generation and the
/// round-trip tests; no subcommand writes matrices today.
#[cfg_attr(not(test), allow(dead_code))]
pub fn write_matrix(matrix: &DenseMatrix, path: &Path) -> std::io::Result<()> {
    let mut out = Vec::new();
    for row in 0..matrix.rows() {
        for col in 0..matrix.cols() {
            if col > 0 {
                out.push(b',');
            }
            write!(out, "{:.16e}", matrix.get(row, col))?;
        }
        out.push(b'\n');
    }
    fs::write(path, out)
}
