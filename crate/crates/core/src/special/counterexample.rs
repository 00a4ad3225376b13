use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bump::{bump_width, BumpProfile};
use super::harmonic::{default_harmonics, BumpFamily, BumpHarmonic};
use crate::error::{Error, Result};
use crate::series::{PolydiscPoint, TorusPoint};

/// How `u_n + iũ_n` is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalRoute {
    #[default]
    Herglotz,
    /// Truncated cosine series; interior points only.
    Cosine,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleParams {
    /// Number of factors `N`.
    pub factors: usize,
    /// Cosine cutoff `K`; `None` uses [`default_harmonics`].
    #[serde(default)]
    pub harmonics: Option<usize>,
    #[serde(default)]
    pub profile: BumpProfile,
    #[serde(default)]
    pub route: EvalRoute,
}

impl CounterexampleParams {
    pub fn new(factors: usize) -> Self {
        CounterexampleParams {
            factors,
            harmonics: None,
            profile: BumpProfile::default(),
            route: EvalRoute::Herglotz,
        }
    }
}

/// `f(z) = ∏_{n ≤ N} exp(-u_n(z_n) - i ũ_n(z_n))`.
#[derive(Debug)]
pub struct Counterexample {
    params: CounterexampleParams,
    family: BumpFamily,
    harmonics: Vec<BumpHarmonic>,
}

impl Counterexample {
    pub fn new(params: CounterexampleParams) -> Result<Self> {
        if params.factors == 0 {
            return Err(Error::config("need at least one factor"));
        }
        if params.harmonics == Some(0) {
            return Err(Error::config("cosine cutoff must be positive"));
        }
        let family = BumpFamily::new(params.profile)?;
        let harmonics = (1..=params.factors)
            .map(|n| family.harmonic(n))
            .collect::<Result<_>>()?;
        Ok(Counterexample { params, family, harmonics })
    }

    pub fn params(&self) -> &CounterexampleParams {
        &self.params
    }

    pub fn harmonic(&self, n: usize) -> &BumpHarmonic {
        &self.harmonics[n - 1]
    }

    /// `u_n(w) + i ũ_n(w)` for the 1-based factor `n`.
    pub fn exponent(&self, n: usize, w: Complex64) -> Result<Complex64> {
        match self.params.route {
            EvalRoute::Herglotz => self.harmonic(n).herglotz(w),
            EvalRoute::Cosine => {
                let k = self.params.harmonics.unwrap_or_else(|| default_harmonics(n));
                let c = self.family.u_n_fourier(n, k)?;
                let (rho, t) = w.to_polar();
                if !(rho < 1.0) {
                    return Err(Error::domain("the cosine route needs |z_n| < 1"));
                }
                Ok(Complex64::new(c.value(rho, t), c.conjugate(rho, t)))
            }
        }
    }

    /// The exponents `u_n(z_n) + i ũ_n(z_n)`, `n = 1..=N`; missing
    /// coordinates are 0.
    pub fn exponents(&self, z: &PolydiscPoint) -> Result<Vec<Complex64>> {
        let zero = Complex64::new(0.0, 0.0);
        (1..=self.params.factors)
            .map(|n| self.exponent(n, z.coords().get(n - 1).copied().unwrap_or(zero)))
            .collect()
    }

    /// `f(z)` as the running product of the factors `exp(-u_n - iũ_n)`.
    pub fn value(&self, z: &PolydiscPoint) -> Result<Complex64> {
        Ok(self
            .exponents(z)?
            .into_iter()
            .fold(Complex64::new(1.0, 0.0), |acc, e| acc * (-e).exp()))
    }

    /// `log |f(z)| = -Σ u_n(z_n)`.
    pub fn log_modulus(&self, z: &PolydiscPoint) -> Result<f64> {
        Ok(-self.exponents(z)?.iter().map(|e| e.re).sum::<f64>())
    }

    /// `|f|` on the torus: `exp(-Σ ψ(θ_n/δ_n))`.
    pub fn boundary_modulus(&self, theta: &TorusPoint) -> f64 {
        let s: f64 = self
            .harmonics
            .iter()
            .zip(theta.angles())
            .map(|(h, &t)| h.boundary(t))
            .sum();
        (-s).exp()
    }

    /// `exp(-C Σ δ_n/(1 - |z_n|))` with `C = ∫ψ/π`, from the Herglotz
    /// bound `u_n(z) ≤ u_n(0) (1 + |z|)/(1 - |z|)`.
    pub fn modulus_lower_bound(&self, z: &PolydiscPoint) -> f64 {
        let c = self.params.profile.integral() / std::f64::consts::PI;
        let s: f64 = (1..=self.params.factors)
            .map(|n| {
                let rho = z.coords().get(n - 1).map_or(0.0, |w| w.norm());
                bump_width(n) / (1.0 - rho)
            })
            .sum();
        (-c * s).exp()
    }
}

/// [`Counterexample::value`] for one point.
pub fn counterexample_f(z: &PolydiscPoint, params: &CounterexampleParams) -> Result<Complex64> {
    Counterexample::new(params.clone())?.value(z)
}

/// `g(z) = Σ_n z_n/n`.
pub fn example_g(z: &PolydiscPoint) -> Complex64 {
    z.coords()
        .iter()
        .enumerate()
        .map(|(i, &w)| w / (i + 1) as f64)
        .sum()
}

/// `u(z) = ∏_n (1 + i (z_n + conj z_n)/(2n))`.
pub fn example_u(z: &PolydiscPoint) -> Complex64 {
    z.coords()
        .iter()
        .enumerate()
        .map(|(i, &w)| Complex64::new(1.0, w.re / (i + 1) as f64))
        .product()
}

/// `arg u(z) = Σ_n atan(Re z_n / n)`, unwrapped.
pub fn example_u_arg(z: &PolydiscPoint) -> f64 {
    z.coords()
        .iter()
        .enumerate()
        .map(|(i, &w)| (w.re / (i + 1) as f64).atan())
        .sum()
}
