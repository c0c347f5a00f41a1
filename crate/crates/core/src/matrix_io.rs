//! Plain-text complex matrices: a `rows cols` header, then one line per row
//! with space-separated entries written as `re±imi`, 17 significant digits.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

/// `re±imi` with both parts in `{:.16e}` form.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}i", z.re, sign, z.im.abs())
}

/// Parses `re`, `re±imi`, `±imi` (e.g. `0.5`, `1e-3-2.5i`, `-i`).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().ok().map(Complex64::from);
    };
    // Split at the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (body[..i].parse::<f64>().ok()?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().ok()?,
    };
    Some(Complex64::new(re, im))
}

pub fn write_matrix(m: &DMatrix<Complex64>) -> String {
    let mut out = format!("{} {}\n", m.nrows(), m.ncols());
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| format_complex(m[(r, c)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn read_matrix(text: &str) -> Result<DMatrix<Complex64>, ParseError> {
    let err = |line: usize, message: String| ParseError::Line { line, message };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<Result<_, _>>()
        .map_err(|e| err(1, format!("bad header: {e}")))?;
    let [rows, cols] = dims[..] else {
        return Err(err(1, "header must be `rows cols`".into()));
    };
    let mut data = Vec::with_capacity(rows * cols);
    for (i, line) in lines.by_ref().take(rows) {
        let entries: Vec<Complex64> = line
            .split_whitespace()
            .map(|t| parse_complex(t).ok_or_else(|| err(i + 1, format!("bad entry `{t}`"))))
            .collect::<Result<_, _>>()?;
        if entries.len() != cols {
            return Err(err(i + 1, format!("expected {cols} entries, found {}", entries.len())));
        }
        data.extend(entries);
    }
    if data.len() != rows * cols {
        return Err(err(rows + 1, format!("expected {rows} rows")));
    }
    Ok(DMatrix::from_row_slice(rows, cols, &data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_complex("0.5"), Some(Complex64::new(0.5, 0.0)));
        assert_eq!(parse_complex("1e-3-2.5i"), Some(Complex64::new(1e-3, -2.5)));
        assert_eq!(parse_complex("-2.5e+2+1E-2i"), Some(Complex64::new(-250.0, 0.01)));
        assert_eq!(parse_complex("-i"), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("3i"), Some(Complex64::new(0.0, 3.0)));
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex(""), None);
    }

    #[test]
    fn negative_zero_imaginary_keeps_sign() {
        assert_eq!(format_complex(Complex64::new(1.0, -0.0)), "1.0000000000000000e0-0.0000000000000000e0i");
    }

    proptest! {
        #[test]
        fn complex_text_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
            let z = Complex64::new(re, im);
            prop_assert_eq!(parse_complex(&format_complex(z)), Some(z));
        }
    }

    #[test]
    fn matrix_round_trip() {
        let m = DMatrix::from_fn(2, 3, |r, c| Complex64::new(r as f64 - 0.1, c as f64 * 1e-7));
        assert_eq!(read_matrix(&write_matrix(&m)).unwrap(), m);
        assert!(read_matrix("2 2\n1 2\n").is_err());
    }
}
