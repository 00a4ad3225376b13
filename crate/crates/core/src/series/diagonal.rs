use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{phase, FourierSeries, TorusPoint};
use crate::error::Result;

/// A one-variable trigonometric polynomial `Σ_k c_k e^{ikt}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigPolynomial {
    terms: BTreeMap<i64, Complex64>,
}

impl TrigPolynomial {
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.terms.get(&k).copied().unwrap_or_default()
    }

    pub fn min_frequency(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms()
            .map(|(k, c)| c * Complex64::cis(k as f64 * t))
            .sum()
    }
}

impl FourierSeries {
    /// Restriction to the diagonal circle `t ↦ (e^{i(θ_j + t)})_j`.
    ///
    /// The coefficient of `e^{ikt}` is `Σ_{s(ν) = k} a_ν e^{iν·θ}`; frequencies
    /// whose contributions cancel exactly are kept.
    pub fn diagonal_restriction(&self, theta: &TorusPoint) -> Result<TrigPolynomial> {
        self.check_angles(theta)?;
        let mut terms: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (nu, a) in self.terms() {
            *terms.entry(nu.diagonal_sum()).or_default() +=
                a * Complex64::cis(phase(nu, theta.angles()));
        }
        Ok(TrigPolynomial { terms })
    }
}
