//! Canonical text form of a [`FourierSeries`]: one term per line,
//! `j1:e1,j2:e2 -> re,im`, lines sorted by multi-index. The constant term is
//! written `-> re,im`. Numbers use the shortest representation that parses
//! back to the same bits.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::FourierSeries;
use crate::bohr::MultiIndex;
use crate::error::{Error, Result};

/// Shortest round-trip decimal form; exponent notation outside `[1e-5, 1e16)`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl FourierSeries {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (nu, a) in self.terms() {
            if nu.is_empty() {
                out.push_str("->");
            } else {
                let _ = write!(out, "{nu} ->");
            }
            let _ = writeln!(out, " {},{}", fmt_f64(a.re), fmt_f64(a.im));
        }
        out
    }

    /// Parses the canonical text form. Blank lines and `#` comments are
    /// skipped; repeated indices and zero coefficients are rejected.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut terms: Vec<(MultiIndex, Complex64)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse(format!("line {}: {msg}: {line:?}", lineno + 1));
            let (idx, coeff) = line.split_once("->").ok_or_else(|| err("missing '->'"))?;
            let nu: MultiIndex = idx.parse()?;
            let (re, im) = coeff.trim().split_once(',').ok_or_else(|| err("expected re,im"))?;
            let re: f64 = re.trim().parse().map_err(|_| err("bad real part"))?;
            let im: f64 = im.trim().parse().map_err(|_| err("bad imaginary part"))?;
            let a = Complex64::new(re, im);
            if a == Complex64::new(0.0, 0.0) {
                return Err(err("zero coefficient"));
            }
            terms.push((nu, a));
        }
        let n = terms.len();
        let series = FourierSeries::from_terms(terms);
        if series.len() != n {
            return Err(Error::Parse("repeated multi-index".into()));
        }
        Ok(series)
    }
}
