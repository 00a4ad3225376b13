use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bohr::MultiIndex;
use crate::error::{Error, Result};
use crate::series::FourierSeries;

/// The probability measure `∏_{j=1}^{J} (1 + cos(q^j θ)) dθ/2π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RieszProductMeasure {
    base: u32,
    depth: u32,
}

impl RieszProductMeasure {
    /// Frequencies up to `q^{J+1}` must fit in `i32`.
    pub fn new(base: u32, depth: u32) -> Result<Self> {
        if base < 3 {
            return Err(Error::config(format!("Riesz product base must be at least 3, got {base}")));
        }
        if (base as i64).checked_pow(depth + 1).is_none_or(|v| v > i32::MAX as i64) {
            return Err(Error::config(format!("depth {depth} is too large for base {base}")));
        }
        Ok(RieszProductMeasure { base, depth })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `q + q^2 + ⋯ + q^J`, the largest frequency.
    pub fn max_frequency(&self) -> i64 {
        let q = self.base as i64;
        (1..=self.depth).map(|j| q.pow(j)).sum()
    }

    /// `2^{-#{j : ε_j ≠ 0}}` when `k = Σ_{j=1}^{J} ε_j q^j` with
    /// `ε_j ∈ {-1, 0, 1}`, and 0 otherwise.
    pub fn coeff(&self, k: i64) -> f64 {
        let q = self.base as i64;
        let mut k = k;
        let mut nonzero = 0;
        for j in 0..=self.depth {
            if k == 0 {
                break;
            }
            // Balanced digit in {-1, 0, 1}; any other residue is not representable.
            let d = match k.rem_euclid(q) {
                0 => 0,
                1 => 1,
                r if r == q - 1 => -1,
                _ => return 0.0,
            };
            if d != 0 {
                if j == 0 {
                    return 0.0;
                }
                nonzero += 1;
            }
            k = (k - d) / q;
        }
        if k != 0 {
            return 0.0;
        }
        0.5f64.powi(nonzero)
    }

    /// `∏_j (1 + cos(q^j θ))`.
    pub fn density(&self, theta: f64) -> f64 {
        let t = theta.rem_euclid(std::f64::consts::TAU);
        let mut freq = 1.0;
        (1..=self.depth)
            .map(|_| {
                freq *= self.base as f64;
                1.0 + (freq * t).cos()
            })
            .product()
    }

    /// Nonzero coefficients `(k, c_k)` in increasing `k`.
    pub fn support(&self) -> Vec<(i64, f64)> {
        let q = self.base as i64;
        let mut terms = vec![(0i64, 1.0f64)];
        for j in 1..=self.depth {
            let p = q.pow(j);
            let mut next = Vec::with_capacity(terms.len() * 3);
            for &(k, c) in &terms {
                next.push((k - p, 0.5 * c));
                next.push((k, c));
                next.push((k + p, 0.5 * c));
            }
            terms = next;
        }
        terms.sort_by_key(|t| t.0);
        terms
    }

    /// Poisson extension `Σ_k c_k r^{|k|} e^{ikθ}` summed term by term.
    pub fn poisson_direct(&self, r: f64, theta: f64) -> Result<f64> {
        check_r(r)?;
        Ok(self
            .support()
            .iter()
            .map(|&(k, c)| c * r.powi(k.unsigned_abs() as i32) * (k as f64 * theta).cos())
            .sum())
    }

    /// Poisson extension in `O(J)` operations. With `z = r e^{iθ}` the
    /// positive frequencies added at depth `j` sum to
    /// `½ z^{e_j} ∏_{i<j} (1 + z^{q^i})^2 / 2`, `e_j = q^j - (q + ⋯ + q^{j-1})`.
    pub fn poisson(&self, r: f64, theta: f64) -> Result<f64> {
        check_r(r)?;
        Ok(self.poisson_at(Complex64::from_polar(r, theta)))
    }

    pub(crate) fn poisson_at(&self, z: Complex64) -> f64 {
        let q = self.base;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut prod = Complex64::new(1.0, 0.0);
        let mut lower: u32 = 0;
        let mut qj: u32 = 1;
        for _ in 1..=self.depth {
            let prev = qj;
            qj *= q;
            if prev > 1 {
                let w = 1.0 + z.powu(prev);
                prod *= w * w * 0.5;
                lower += prev;
            }
            acc += z.powu(qj - lower) * prod;
        }
        1.0 + acc.re
    }

    /// The measure on coordinate `coord`: coefficients at `k e_coord`.
    pub fn to_series(&self, coord: u32) -> Result<FourierSeries> {
        if coord == 0 {
            return Err(Error::domain("coordinates are 1-based"));
        }
        Ok(FourierSeries::from_terms(self.support().into_iter().map(|(k, c)| {
            (MultiIndex::unit(coord, k as i32), Complex64::new(c, 0.0))
        })))
    }
}

fn check_r(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::domain(format!("radius must lie in [0, 1), got {r}")))
    }
}

/// Poisson extension of the measure placed on the first coordinate.
pub fn measure_radial_value(measure: &RieszProductMeasure, r: f64, theta1: f64) -> Result<f64> {
    measure.poisson(r, theta1)
}
