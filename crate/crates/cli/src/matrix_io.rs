//! Sensing-matrix file exchange.
//!
//! The on-disk format is plain CSV with one matrix row per line and each
//! complex entry written as an interleaved `re,im` pair, so an M x N matrix
//! becomes M lines of 2N numbers. No header — the shape is the file's shape.

use std::path::Path;

use num_complex::Complex64;
use qcs_core::prelude::{MatrixFamily, SensingMatrix};
use qcs_core::CMat;

use crate::errors::CliError;

/// Write a matrix as CSV with interleaved real/imaginary columns.
pub fn export_matrix(a: &SensingMatrix, path: &Path) -> Result<(), CliError> {
    let mut text = String::new();
    for r in 0..a.matrix.rows() {
        let mut first = true;
        for v in a.matrix.row(r) {
            if !first {
                text.push(',');
            }
            first = false;
            text.push_str(&format!("{:.17e},{:.17e}", v.re, v.im));
        }
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Read a matrix produced by [`export_matrix`] (or any CSV of interleaved
/// `re,im` pairs with consistent row lengths). Columns are re-normalized to
/// unit energy on load, matching the measurement model's assumption.
pub fn import_matrix(path: &Path) -> Result<SensingMatrix, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut entries: Vec<Complex64> = Vec::new();
    let mut cols = None;
    let mut rows = 0usize;

    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let numbers: Vec<f64> = line
            .split(',')
            .map(|field| {
                field.trim().parse::<f64>().map_err(|_| {
                    CliError::config(format!(
                        "{}:{}: '{}' is not a number",
                        path.display(),
                        lineno + 1,
                        field.trim()
                    ))
                })
            })
            .collect::<Result<_, _>>()?;
        if numbers.len() % 2 != 0 {
            return Err(CliError::config(format!(
                "{}:{}: odd field count {}; entries are re,im pairs",
                path.display(),
                lineno + 1,
                numbers.len()
            )));
        }
        let line_cols = numbers.len() / 2;
        match cols {
            None => cols = Some(line_cols),
            Some(c) if c != line_cols => {
                return Err(CliError::config(format!(
                    "{}:{}: row has {} entries, earlier rows have {}",
                    path.display(),
                    lineno + 1,
                    line_cols,
                    c
                )));
            }
            _ => {}
        }
        entries.extend(
            numbers
                .chunks_exact(2)
                .map(|pair| Complex64::new(pair[0], pair[1])),
        );
        rows += 1;
    }

    let cols = cols.ok_or_else(|| {
        CliError::config(format!("{}: file holds no matrix rows", path.display()))
    })?;
    let raw = CMat {
        rows,
        cols,
        data: entries,
    };
    SensingMatrix::from_raw(raw, MatrixFamily::Custom).map_err(CliError::Numerical)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcs_core::prelude::build_matrix;

    #[test]
    fn export_then_import_round_trips_entries() {
        let dir = std::env::temp_dir().join("qcs-matrix-io-roundtrip");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("dft.csv");

        let a = build_matrix(MatrixFamily::PartialDft, 16, 32, 7).unwrap();
        export_matrix(&a, &path).unwrap();
        let back = import_matrix(&path).unwrap();

        assert_eq!(back.m, 16);
        assert_eq!(back.n, 32);
        assert_eq!(back.family, MatrixFamily::Custom);
        for (orig, loaded) in a.matrix.data.iter().zip(&back.matrix.data) {
            assert!((orig - loaded).norm() < 1e-12);
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn malformed_rows_are_reported_with_location() {
        let dir = std::env::temp_dir().join("qcs-matrix-io-malformed");
        std::fs::create_dir_all(&dir).unwrap();

        let ragged = dir.join("ragged.csv");
        std::fs::write(&ragged, "1,0,2,0\n1,0\n").unwrap();
        let err = import_matrix(&ragged).unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");

        let text = dir.join("text.csv");
        std::fs::write(&text, "1,0,abc,0\n").unwrap();
        let err = import_matrix(&text).unwrap_err();
        assert!(err.to_string().contains("abc"), "{err}");

        std::fs::remove_file(&ragged).ok();
        std::fs::remove_file(&text).ok();
    }
}
