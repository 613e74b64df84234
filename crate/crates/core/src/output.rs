//! CSV and JSON writers with a fixed, locale-free number format.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// `%.16e` in C notation: 17 significant digits, signed exponent of at
/// least two digits, e.g. `1.1180339887498949e+01`.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.16e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// CSV text: a header line and one line per row, each newline-terminated.
pub fn csv_string(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", sci(*v));
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    fs::write(path, csv_string(header, rows))?;
    Ok(())
}

/// Compact JSON followed by a newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_exponents() {
        assert_eq!(sci(11.180339887498949), "1.1180339887498949e+01");
        assert_eq!(sci(0.0), "0.0000000000000000e+00");
        assert_eq!(sci(-2.5e-7), "-2.4999999999999999e-07");
        assert_eq!(sci(1e300), "1.0000000000000001e+300");
        assert_eq!(sci(f64::NAN), "nan");
    }

    #[test]
    fn round_trip() {
        for x in [
            std::f64::consts::PI,
            1.0 / 3.0,
            -7.123456789012345e-300,
            5e-324,
        ] {
            assert_eq!(sci(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_layout() {
        let s = csv_string(&["a", "b"], &[vec![1.0, -1.0], vec![0.5, 2.0]]);
        assert_eq!(
            s,
            "a,b\n1.0000000000000000e+00,-1.0000000000000000e+00\n5.0000000000000000e-01,2.0000000000000000e+00\n"
        );
    }
}
