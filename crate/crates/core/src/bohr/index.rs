use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finitely supported integer exponent sequence `ν`.
///
/// Stored as `(coordinate, exponent)` pairs with 1-based coordinates in
/// strictly increasing order and no zero exponents, so derived equality,
/// ordering and hashing all respect the canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<(u32, i32)>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    /// Builds the canonical index from arbitrary pairs: sorts by coordinate,
    /// adds exponents of repeated coordinates and drops zeros.
    pub fn new(entries: impl IntoIterator<Item = (u32, i32)>) -> Result<Self> {
        let mut v: Vec<(u32, i32)> = entries.into_iter().collect();
        if v.iter().any(|&(j, _)| j == 0) {
            return Err(Error::domain("coordinates are 1-based"));
        }
        v.sort_by_key(|&(j, _)| j);
        let mut out: Vec<(u32, i32)> = Vec::with_capacity(v.len());
        for (j, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == j => {
                    last.1 = last.1.checked_add(e).ok_or_else(|| {
                        Error::Range(format!("exponent overflow at coordinate {j}"))
                    })?;
                }
                _ => out.push((j, e)),
            }
        }
        out.retain(|&(_, e)| e != 0);
        Ok(MultiIndex(out))
    }

    /// Index from a dense exponent vector; entry `i` is coordinate `i + 1`.
    pub fn from_dense(exponents: &[i32]) -> Self {
        MultiIndex(
            exponents
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| (i as u32 + 1, e))
                .collect(),
        )
    }

    /// The single-coordinate index `e · e_j`.
    pub fn unit(j: u32, e: i32) -> Self {
        assert!(j >= 1, "coordinates are 1-based");
        if e == 0 {
            MultiIndex::empty()
        } else {
            MultiIndex(vec![(j, e)])
        }
    }

    pub fn entries(&self) -> &[(u32, i32)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, j: u32) -> i32 {
        self.0
            .binary_search_by_key(&j, |&(c, _)| c)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    /// Largest coordinate carrying a nonzero exponent (0 for the empty index).
    pub fn dim(&self) -> u32 {
        self.0.last().map_or(0, |&(j, _)| j)
    }

    /// `|ν|₁ = Σ |ν_j|`.
    pub fn order(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e.unsigned_abs() as u64).sum()
    }

    /// `s(ν) = Σ ν_j`.
    pub fn diagonal_sum(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }

    /// `w_m(ν) = Σ m_j |ν_j|` for the exponent sequence `m`.
    pub fn weighted_degree(&self, m: impl Fn(u32) -> u64) -> u64 {
        self.0
            .iter()
            .map(|&(j, e)| m(j) * e.unsigned_abs() as u64)
            .sum()
    }

    /// `σ_m(ν) = Σ m_j ν_j`.
    pub fn diagonal_signature(&self, m: impl Fn(u32) -> u64) -> i64 {
        self.0.iter().map(|&(j, e)| m(j) as i64 * e as i64).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&(_, e)| e > 0)
    }

    pub fn is_nonpositive(&self) -> bool {
        self.0.iter().all(|&(_, e)| e < 0)
    }

    /// Keeps the coordinates `j ≤ m`.
    pub fn truncate(&self, m: u32) -> Self {
        MultiIndex(self.0.iter().copied().filter(|&(j, _)| j <= m).collect())
    }

    pub fn checked_add(&self, other: &MultiIndex) -> Result<Self> {
        MultiIndex::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn neg(&self) -> Self {
        MultiIndex(self.0.iter().map(|&(j, e)| (j, -e)).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (j, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}:{e}")?;
        }
        Ok(())
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    /// Parses `"j1:e1,j2:e2"`; the empty string is the empty index.
    /// Only canonical input is accepted.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(MultiIndex::empty());
        }
        let mut out = Vec::new();
        for part in s.split(',') {
            let (j, e) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected j:e, got {part:?}")))?;
            let j: u32 = j
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coordinate {j:?}")))?;
            let e: i32 = e
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
            out.push((j, e));
        }
        let idx = MultiIndex::new(out.iter().copied())?;
        if idx.0 != out {
            return Err(Error::Parse(format!("multi-index {s:?} is not canonical")));
        }
        Ok(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let a = MultiIndex::new([(3, 1), (1, 2), (3, -1), (2, 0)]).unwrap();
        assert_eq!(a.entries(), &[(1, 2)]);
        assert_eq!(a, MultiIndex::from_dense(&[2]));
        assert!(MultiIndex::new([(0, 1)]).is_err());
    }

    #[test]
    fn derived_quantities() {
        let nu = MultiIndex::from_dense(&[1, -2, 0, 3]);
        assert_eq!(nu.order(), 6);
        assert_eq!(nu.diagonal_sum(), 2);
        assert_eq!(nu.weighted_degree(|j| j as u64), 1 + 4 + 12);
        assert_eq!(nu.diagonal_signature(|j| j as u64), 1 - 4 + 12);
        assert_eq!(nu.dim(), 4);
        assert_eq!(nu.exponent(2), -2);
        assert_eq!(nu.exponent(3), 0);
        assert_eq!(nu.truncate(2), MultiIndex::from_dense(&[1, -2]));
    }

    #[test]
    fn text_form() {
        let nu: MultiIndex = "1:2,2:1".parse().unwrap();
        assert_eq!(nu, MultiIndex::from_dense(&[2, 1]));
        assert_eq!(nu.to_string(), "1:2,2:1");
        assert_eq!("".parse::<MultiIndex>().unwrap(), MultiIndex::empty());
        assert!("2:1,1:1".parse::<MultiIndex>().is_err());
        assert!("1:0".parse::<MultiIndex>().is_err());
        assert!("1".parse::<MultiIndex>().is_err());
    }
}
