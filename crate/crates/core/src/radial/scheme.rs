use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinate exponents `(m_j)` of the approach `(r^{m_1} z_1, r^{m_2} z_2, …)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialScheme {
    /// `m_j = j`.
    #[default]
    Diagonal,
    /// `m_j = ⌈j^α⌉`.
    Power { alpha: f64 },
    /// `m_j = table[j - 1]` for `j ≤ table.len()`, then `m_j = j`.
    Explicit { table: Vec<u64> },
}

/// Exponents are capped here so weighted degrees stay exact in `u64`.
const MAX_EXPONENT: u64 = 1 << 40;

impl RadialScheme {
    pub fn validate(&self) -> Result<()> {
        match self {
            RadialScheme::Diagonal => Ok(()),
            RadialScheme::Power { alpha } => {
                if alpha.is_finite() && *alpha > 0.0 {
                    Ok(())
                } else {
                    Err(Error::config(format!("power scheme needs alpha > 0, got {alpha}")))
                }
            }
            RadialScheme::Explicit { table } => {
                if let Some(j) = table.iter().position(|&m| m == 0 || m > MAX_EXPONENT) {
                    Err(Error::config(format!(
                        "explicit scheme exponent m_{} = {} is not in [1, 2^40]",
                        j + 1,
                        table[j]
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// `m_j` for the 1-based coordinate `j`.
    pub fn exponent(&self, j: u32) -> u64 {
        assert!(j >= 1, "coordinates are 1-based");
        match self {
            RadialScheme::Diagonal => j as u64,
            RadialScheme::Power { alpha } => power_exponent(j, *alpha),
            RadialScheme::Explicit { table } => table
                .get(j as usize - 1)
                .copied()
                .unwrap_or(j as u64),
        }
    }

    /// `m_1, …, m_n`.
    pub fn exponents(&self, n: usize) -> Vec<u64> {
        (1..=n as u32).map(|j| self.exponent(j)).collect()
    }
}

fn power_exponent(j: u32, alpha: f64) -> u64 {
    let x = (j as f64).powf(alpha);
    if x >= MAX_EXPONENT as f64 {
        return MAX_EXPONENT;
    }
    // j^α that is an integer up to rounding must not be bumped to the next one.
    let near = x.round();
    let m = if (x - near).abs() <= 1e-9 * near.max(1.0) { near } else { x.ceil() };
    (m as u64).max(1)
}
