//! Harmonic extension `u_n` of the boundary bump `ψ(t/δ_n)` and its
//! conjugate `ũ_n`, normalized by `ũ_n(0) = 0`.
//!
//! Two independent routes are provided. The cosine route sums quadrature
//! Fourier coefficients and is cached per `(n, K)`. The Herglotz route
//! writes the bump as a superposition of arc indicators,
//!
//! ```text
//! ψ(s/δ) = ∫ 1{|s| < δx} (-ψ'(x)) dx,
//! ```
//!
//! and integrates the closed-form Herglotz transform of an arc against the
//! level density. It costs a few dozen arc evaluations per point and
//! needs no truncation.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use rayon::prelude::*;

use super::bump::{bump_width, BumpProfile};
use crate::error::{Error, Result};
use crate::quad::integrate_complex;
use crate::series::points::reduce_angle;

const HERGLOTZ_TOL: f64 = 1e-12;

/// Largest default cosine cutoff.
pub const MAX_HARMONICS: usize = 1 << 20;

/// `u + iũ` for the indicator of the arc `(-a, a)`: the harmonic measure
/// of the arc plus `i` times its conjugate.
fn arc_herglotz(z: Complex64, a: f64) -> Complex64 {
    let num = Complex64::cis(a) - z;
    let den = Complex64::cis(-a) - z;
    let ratio = num / den;
    let turn = ratio.arg().rem_euclid(TAU);
    Complex64::new((turn - a) / PI, -(num.norm() / den.norm()).ln() / PI)
}

/// `t` folded to `[-π, π)`.
fn centered(t: f64) -> f64 {
    let t = reduce_angle(t);
    if t >= PI {
        t - TAU
    } else {
        t
    }
}

/// The `n`-th bump harmonic through the Herglotz route.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpHarmonic {
    profile: BumpProfile,
    delta: f64,
}

impl BumpHarmonic {
    pub fn new(n: usize, profile: BumpProfile) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("bump indices start at 1"));
        }
        profile.validate()?;
        Ok(BumpHarmonic { profile, delta: bump_width(n) })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Boundary data `ψ(t/δ)` with `t` taken in `[-π, π)`.
    pub fn boundary(&self, t: f64) -> f64 {
        self.profile.psi(centered(t) / self.delta)
    }

    /// `u(0) = (1/2π) ∫ ψ(t/δ) dt`.
    pub fn mean(&self) -> f64 {
        self.profile.integral() * self.delta / TAU
    }

    /// `u(z) + i ũ(z)` for `|z| ≤ 1`. On the circle the real part is the
    /// boundary value itself.
    pub fn herglotz(&self, z: Complex64) -> Result<Complex64> {
        let rho = z.norm();
        if !(rho <= 1.0) {
            return Err(Error::domain(format!("|z| = {rho} is outside the closed disc")));
        }
        if rho == 0.0 {
            return Ok(Complex64::new(self.mean(), 0.0));
        }
        let t = centered(z.arg());
        let kink = t.abs() / self.delta;
        let p = self.profile;
        let v = integrate_complex(
            |x| arc_herglotz(z, self.delta * x) * p.level_density(x),
            p.plateau,
            p.support,
            &[kink],
            HERGLOTZ_TOL,
        );
        if rho == 1.0 {
            Ok(Complex64::new(self.boundary(t), v.im))
        } else {
            Ok(v)
        }
    }

    /// Upper bound for `u(r e^{it})`: the mass `u(0)` times the Poisson
    /// kernel at the distance from `t` to the support, capped at 1.
    pub fn value_upper_bound(&self, r: f64, t: f64) -> f64 {
        let d = (centered(t).abs() - self.profile.support * self.delta).max(0.0);
        if d == 0.0 {
            return 1.0;
        }
        let s = (0.5 * d).sin();
        let kernel = (1.0 - r * r) / ((1.0 - r).powi(2) + 4.0 * r * s * s);
        (self.mean() * kernel).min(1.0)
    }

    /// `sup_{r<1} u(r e^{it}) ≤ u(0) / sin d` for `d < π/2`, and `u(0)`
    /// past that.
    pub fn maximal_upper_bound(&self, t: f64) -> f64 {
        let d = (centered(t).abs() - self.profile.support * self.delta).max(0.0);
        if d == 0.0 {
            1.0
        } else if d < PI / 2.0 {
            (self.mean() / d.sin()).min(1.0)
        } else {
            self.mean()
        }
    }
}

/// Cosine coefficients `c_0, …, c_K` of `ψ(t/δ_n) = c_0 + Σ c_k cos(kt)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CosineCoefficients {
    pub n: usize,
    pub coeffs: Vec<f64>,
    /// `max |c_k|` over the upper half `K/2 < k ≤ K`.
    pub tail_estimate: f64,
}

impl CosineCoefficients {
    /// `c_0 + Σ c_k ρ^k cos(kt)`.
    pub fn value(&self, rho: f64, t: f64) -> f64 {
        self.sum(rho, t, f64::cos) + self.coeffs[0]
    }

    /// `Σ c_k ρ^k sin(kt)`.
    pub fn conjugate(&self, rho: f64, t: f64) -> f64 {
        self.sum(rho, t, f64::sin)
    }

    fn sum(&self, rho: f64, t: f64, trig: fn(f64) -> f64) -> f64 {
        let mut rk = 1.0;
        let mut acc = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            rk *= rho;
            if rk == 0.0 {
                break;
            }
            acc += c * rk * trig(k as f64 * t);
        }
        acc
    }
}

/// Default cutoff `2048 ⌈1/δ_n⌉`, capped at [`MAX_HARMONICS`].
pub fn default_harmonics(n: usize) -> usize {
    (2048 * (1.0 / bump_width(n)).ceil() as usize).min(MAX_HARMONICS)
}

/// Cache of cosine coefficients keyed by `(n, K)`.
#[derive(Debug, Default)]
pub struct BumpFamily {
    profile: BumpProfile,
    cache: RwLock<HashMap<(usize, usize), Arc<CosineCoefficients>>>,
}

impl BumpFamily {
    pub fn new(profile: BumpProfile) -> Result<Self> {
        profile.validate()?;
        Ok(BumpFamily { profile, cache: RwLock::default() })
    }

    pub fn profile(&self) -> BumpProfile {
        self.profile
    }

    pub fn harmonic(&self, n: usize) -> Result<BumpHarmonic> {
        BumpHarmonic::new(n, self.profile)
    }

    /// Coefficients by the trapezoid rule on `4096 max(1, ⌈1/δ_n⌉)`
    /// equispaced points of the circle, summed over the support only.
    pub fn u_n_fourier(&self, n: usize, k_max: usize) -> Result<Arc<CosineCoefficients>> {
        if n == 0 || k_max == 0 {
            return Err(Error::domain("need n >= 1 and K >= 1"));
        }
        if let Some(c) = self.cache.read().expect("cache lock").get(&(n, k_max)) {
            return Ok(c.clone());
        }
        let delta = bump_width(n);
        let points = 4096 * (1.0 / delta).ceil().max(1.0) as usize;
        let h = TAU / points as f64;
        let last = ((self.profile.support * delta) / h).floor() as usize;
        // Even data: weight 1 at t = 0 and 2 for each ±t pair.
        let nodes: Vec<(f64, f64)> = (0..=last)
            .map(|i| {
                let t = i as f64 * h;
                let w = if i == 0 { 1.0 } else { 2.0 };
                (t, w * self.profile.psi(t / delta))
            })
            .filter(|&(_, w)| w > 0.0)
            .collect();
        let coeffs: Vec<f64> = (0..=k_max)
            .into_par_iter()
            .map(|k| {
                let s: f64 = nodes.iter().map(|&(t, w)| w * (k as f64 * t).cos()).sum();
                let scale = if k == 0 { h / TAU } else { h / PI };
                s * scale
            })
            .collect();
        let tail_estimate = coeffs[k_max / 2 + 1..]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
        let entry = Arc::new(CosineCoefficients { n, coeffs, tail_estimate });
        let mut cache = self.cache.write().expect("cache lock");
        Ok(cache.entry((n, k_max)).or_insert(entry).clone())
    }

    /// `u_n(ρ e^{it})` from the cosine series.
    pub fn u_n_value(&self, n: usize, rho: f64, t: f64, k_max: usize) -> Result<f64> {
        check_rho(rho)?;
        Ok(self.u_n_fourier(n, k_max)?.value(rho, t))
    }

    /// `ũ_n(ρ e^{it})` from the cosine series.
    pub fn u_n_conjugate(&self, n: usize, rho: f64, t: f64, k_max: usize) -> Result<f64> {
        check_rho(rho)?;
        Ok(self.u_n_fourier(n, k_max)?.conjugate(rho, t))
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if (0.0..1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::domain(format!("radius must lie in [0, 1), got {rho}")))
    }
}
