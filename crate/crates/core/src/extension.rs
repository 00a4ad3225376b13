//! Radial extensions along `(ξ^{m_1} z_1, ξ^{m_2} z_2, …)`.
//!
//! For `ξ = r e^{it}` the extension `f_ξ` of a series `f` multiplies the
//! coefficient of `ν` by `r^{w_m(ν)} e^{i t σ_m(ν)}`, where `w_m` is the
//! weighted degree and `σ_m` the weighted signature of the scheme `(m_j)`.

use num_complex::Complex64;

use crate::bohr::MultiIndex;
use crate::error::{Error, Result};
use crate::radial::RadialScheme;
use crate::series::{phase, FourierSeries, TorusPoint};

/// Multipliers below this are treated as zero.
pub const UNDERFLOW: f64 = 1e-300;

fn check_xi(xi: Complex64) -> Result<()> {
    if !xi.norm().is_finite() || xi.norm() > 1.0 {
        return Err(Error::domain(format!("|ξ| must be at most 1, got {}", xi.norm())));
    }
    Ok(())
}

/// `(P, N)` with multiplier `ξ^P conj(ξ)^N`: the scheme-weighted sums of the
/// positive and negative parts of `ν`.
pub fn multiplier_powers(nu: &MultiIndex, scheme: &RadialScheme) -> (u64, u64) {
    nu.entries().iter().fold((0, 0), |(p, n), &(j, e)| {
        let w = scheme.exponent(j) * e.unsigned_abs() as u64;
        if e > 0 {
            (p + w, n)
        } else {
            (p, n + w)
        }
    })
}

/// `r^{w} e^{i t σ}` for `ξ = r e^{it}`, computed as `exp(w ln r)`.
pub fn multiplier(nu: &MultiIndex, xi: Complex64, scheme: &RadialScheme) -> Complex64 {
    let (p, n) = multiplier_powers(nu, scheme);
    let w = p + n;
    if w == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let (r, t) = xi.to_polar();
    let modulus = (w as f64 * r.ln()).exp();
    if modulus < UNDERFLOW {
        return Complex64::new(0.0, 0.0);
    }
    let sigma = p as f64 - n as f64;
    Complex64::from_polar(modulus, t * sigma)
}

/// The twisted series `f_ξ`. Terms whose multiplier underflows are dropped.
pub fn twist(f: &FourierSeries, xi: Complex64, scheme: &RadialScheme) -> Result<FourierSeries> {
    check_xi(xi)?;
    scheme.validate()?;
    Ok(f.map_coefficients(|nu, a| a * multiplier(nu, xi, scheme)))
}

/// `f_ξ(θ)` without building the twisted series.
pub fn twisted_value(
    f: &FourierSeries,
    xi: Complex64,
    theta: &TorusPoint,
    scheme: &RadialScheme,
) -> Result<Complex64> {
    check_xi(xi)?;
    f.check_angles(theta)?;
    let th = theta.angles();
    Ok(f.terms()
        .map(|(nu, a)| a * multiplier(nu, xi, scheme) * Complex64::cis(phase(nu, th)))
        .sum())
}

/// `f_r(θ)` for real `r ∈ [0, 1]`.
pub fn radial_section(
    f: &FourierSeries,
    r: f64,
    theta: &TorusPoint,
    scheme: &RadialScheme,
) -> Result<Complex64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(format!("radius must lie in [0, 1], got {r}")));
    }
    twisted_value(f, Complex64::new(r, 0.0), theta, scheme)
}

/// Value of `∏_j (1 + |ξ|^j)/(1 - |ξ|^j)` and the number of factors used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WienerBound {
    pub value: f64,
    pub factors: u32,
}

/// The infinite product `∏_{j≥1} (1 + |ξ|^j)/(1 - |ξ|^j)`, truncated once
/// the log-tail bound `2|ξ|^{J+1}/(1 - |ξ|)^2` is below `tol`.
pub fn wiener_bound(xi: Complex64, tol: f64) -> Result<WienerBound> {
    let x = xi.norm();
    if !(x < 1.0) {
        return Err(Error::domain(format!("the product diverges for |ξ| = {x}")));
    }
    if !(tol > 0.0) {
        return Err(Error::config(format!("tolerance must be positive, got {tol}")));
    }
    let mut log = 0.0;
    let mut j = 0u32;
    let mut xj = 1.0;
    while 2.0 * xj * x / (1.0 - x).powi(2) >= tol {
        j += 1;
        xj *= x;
        log += (2.0 * xj / (1.0 - xj)).ln_1p();
    }
    Ok(WienerBound { value: log.exp(), factors: j })
}

/// `∏_{j ≤ coords} (1 + |ξ|^{m_j})/(1 - |ξ|^{m_j})`: the Wiener norm of the
/// twisted multipliers over all indices supported in the first `coords`
/// coordinates.
pub fn wiener_bound_finite(xi: Complex64, coords: u32, scheme: &RadialScheme) -> Result<f64> {
    let x = xi.norm();
    if !(x < 1.0) {
        return Err(Error::domain(format!("the product diverges for |ξ| = {x}")));
    }
    scheme.validate()?;
    let lx = x.ln();
    Ok((1..=coords)
        .map(|j| {
            let y = (scheme.exponent(j) as f64 * lx).exp();
            (2.0 * y / (1.0 - y)).ln_1p()
        })
        .sum::<f64>()
        .exp())
}

/// `(1 - x^2)/(1 - 2x cos θ + x^2)` for `x = r^m`, written with
/// `1 - 2x cos θ + x^2 = (1 - x)^2 + 4x sin^2(θ/2)`.
pub(crate) fn poisson_factor(r: f64, m: u64, theta: f64) -> f64 {
    if r == 0.0 {
        return 1.0;
    }
    let lr = m as f64 * r.ln();
    let x = lr.exp();
    let one_minus_x = -lr.exp_m1();
    let one_minus_x2 = -(2.0 * lr).exp_m1();
    let s = (0.5 * theta).sin();
    one_minus_x2 / (one_minus_x * one_minus_x + 4.0 * x * s * s)
}

/// `∏_{n ≤ m} (1 - r^{2m_n})/(1 - 2 r^{m_n} cos θ_n + r^{2m_n})`.
pub fn product_poisson_kernel(r: f64, theta: &TorusPoint, scheme: &RadialScheme) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("kernel needs 0 <= r < 1, got {r}")));
    }
    scheme.validate()?;
    Ok(theta
        .angles()
        .iter()
        .enumerate()
        .map(|(i, &th)| poisson_factor(r, scheme.exponent(i as u32 + 1), th))
        .product())
}

/// `1 - 2^{-k}` for `k = 1..=40`.
pub fn default_radius_grid() -> Vec<f64> {
    (1..=40).map(|k| 1.0 - 0.5f64.powi(k)).collect()
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::config("radius grid is empty"));
    }
    if let Some(r) = grid.iter().find(|r| !(0.0..1.0).contains(*r)) {
        return Err(Error::config(format!("grid radius {r} is outside [0, 1)")));
    }
    Ok(())
}

/// `max_{r ∈ grid} |f_r(θ)|`, a lower approximation of the radial maximal
/// function that can only grow when the grid is refined.
pub fn radial_maximal(
    f: &FourierSeries,
    theta: &TorusPoint,
    grid: &[f64],
    scheme: &RadialScheme,
) -> Result<f64> {
    check_grid(grid)?;
    grid.iter().try_fold(0.0f64, |m, &r| {
        Ok(m.max(radial_section(f, r, theta, scheme)?.norm()))
    })
}
