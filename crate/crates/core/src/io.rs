//! Dense MatrixMarket (`array real`) reading and writing.
//!
//! Values are written with 17 significant digits so that a write/read round trip
//! reproduces every `f64` bit for bit. The symmetric variant stores the lower
//! triangle in column-major order, as the format prescribes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;

const BANNER: &str = "%%matrixmarket";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Symmetric,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a dense MatrixMarket document, returning the matrix and its declared symmetry.
pub fn parse_matrix_market(text: &str) -> Result<(DMatrix<f64>, Symmetry)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() != 5 || fields[0] != BANNER || fields[1] != "matrix" {
        return Err(parse_err(1, format!("bad header `{header}`")));
    }
    if fields[2] != "array" {
        return Err(parse_err(1, format!("unsupported format `{}`, need `array`", fields[2])));
    }
    if fields[3] != "real" {
        return Err(parse_err(1, format!("unsupported field `{}`, need `real`", fields[3])));
    }
    let symmetry = match fields[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(parse_err(1, format!("unsupported symmetry `{other}`"))),
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body.next().ok_or_else(|| parse_err(1, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(size_line, format!("bad dimension `{t}`"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(parse_err(size_line, "size line must hold two integers"));
    };
    if rows == 0 || cols == 0 {
        return Err(parse_err(size_line, "dimensions must be positive"));
    }
    if symmetry == Symmetry::Symmetric && rows != cols {
        return Err(parse_err(size_line, "symmetric matrix must be square"));
    }

    let mut values = Vec::new();
    let mut last_line = size_line;
    for (no, line) in body {
        last_line = no;
        for token in line.split_whitespace() {
            let v: f64 = token
                .parse()
                .map_err(|_| parse_err(no, format!("bad value `{token}`")))?;
            values.push(v);
        }
    }

    let expected = match symmetry {
        Symmetry::General => rows * cols,
        Symmetry::Symmetric => rows * (rows + 1) / 2,
    };
    if values.len() != expected {
        return Err(parse_err(
            last_line,
            format!("expected {expected} values, found {}", values.len()),
        ));
    }

    let m = match symmetry {
        Symmetry::General => DMatrix::from_column_slice(rows, cols, &values),
        Symmetry::Symmetric => {
            let mut m = DMatrix::zeros(rows, rows);
            let mut it = values.into_iter();
            for j in 0..rows {
                for i in j..rows {
                    let v = it.next().expect("count checked above");
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
            m
        }
    };
    Ok((m, symmetry))
}

/// Renders `m` as a MatrixMarket document. With [`Symmetry::Symmetric`] only the
/// lower triangle is emitted, so `m` must be square.
pub fn format_matrix_market(m: &DMatrix<f64>, symmetry: Symmetry) -> Result<String> {
    let (rows, cols) = m.shape();
    if symmetry == Symmetry::Symmetric && rows != cols {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{rows}x{cols}"),
        });
    }
    let kind = match symmetry {
        Symmetry::General => "general",
        Symmetry::Symmetric => "symmetric",
    };
    let mut out = format!("%%MatrixMarket matrix array real {kind}\n{rows} {cols}\n");
    for j in 0..cols {
        let start = if symmetry == Symmetry::Symmetric { j } else { 0 };
        for i in start..rows {
            writeln!(out, "{:.16e}", m[(i, j)]).expect("writing to a String");
        }
    }
    Ok(out)
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    let text = fs::read_to_string(path)?;
    Ok(parse_matrix_market(&text)?.0)
}

/// Reads a square file (either symmetry) into a [`SymmetricMatrix`].
pub fn read_symmetric(path: impl AsRef<Path>) -> Result<SymmetricMatrix> {
    SymmetricMatrix::new(read_matrix_market(path)?)
}

pub fn write_matrix_market(path: impl AsRef<Path>, m: &DMatrix<f64>, symmetry: Symmetry) -> Result<()> {
    fs::write(path, format_matrix_market(m, symmetry)?)?;
    Ok(())
}

pub fn write_symmetric(path: impl AsRef<Path>, m: &SymmetricMatrix) -> Result<()> {
    write_matrix_market(path, m.as_matrix(), Symmetry::Symmetric)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_general_column_major() {
        let text = "%%MatrixMarket matrix array real general\n% comment\n2 3\n1\n2\n3\n4\n5\n6\n";
        let (m, s) = parse_matrix_market(text).unwrap();
        assert_eq!(s, Symmetry::General);
        assert_eq!(m, DMatrix::from_row_slice(2, 3, &[1.0, 3.0, 5.0, 2.0, 4.0, 6.0]));
    }

    #[test]
    fn parses_symmetric_lower_triangle() {
        let text = "%%MatrixMarket matrix array real symmetric\n2 2\n1.5\n-2\n4\n";
        let (m, _) = parse_matrix_market(text).unwrap();
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[1.5, -2.0, -2.0, 4.0]));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let vals = [0.1, 1.0 / 3.0, -2.0e-300, 1.0e300, std::f64::consts::PI, 5e-324];
        let m = DMatrix::from_column_slice(3, 2, &vals);
        let text = format_matrix_market(&m, Symmetry::General).unwrap();
        let (back, _) = parse_matrix_market(&text).unwrap();
        for (a, b) in m.iter().zip(back.iter()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_matrix_market("").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 2\n").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix array complex general\n1 1\n1 0\n").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix array real symmetric\n2 3\n1\n2\n3\n").is_err());
        let err = parse_matrix_market("%%MatrixMarket matrix array real general\n1 1\nabc\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }
}
