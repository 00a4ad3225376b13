use super::RadialScheme;
use crate::error::{Error, Result};

const MAX_TERMS: u64 = 100_000_000;

/// `A(r) = Σ_j r^{m_j}` and `A'(r) = Σ_j m_j r^{m_j - 1}`.
///
/// Diagonal and explicit schemes are summed in closed form. Power schemes
/// are summed until certified incomplete-gamma bounds on both tails drop
/// below `tol`; the returned values include those bounds, so they exceed
/// the true sums by less than `tol`.
pub fn admissibility_a(scheme: &RadialScheme, r: f64, tol: f64) -> Result<(f64, f64)> {
    scheme.validate()?;
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("admissibility needs 0 <= r < 1, got {r}")));
    }
    match scheme {
        RadialScheme::Diagonal => Ok((r / (1.0 - r), 1.0 / (1.0 - r).powi(2))),
        RadialScheme::Explicit { table } => {
            let (mut a, mut da) = (0.0, 0.0);
            for &m in table {
                let (t, dt) = term(r, m);
                a += t;
                da += dt;
            }
            let j = table.len() as i32;
            let rj = r.powi(j);
            a += rj * r / (1.0 - r);
            da += rj * ((j + 1) as f64 - j as f64 * r) / (1.0 - r).powi(2);
            Ok((a, da))
        }
        RadialScheme::Power { alpha } => power_sums(scheme, *alpha, r, tol),
    }
}

/// `(r^m, m r^{m-1})` with `0^0 = 1`.
fn term(r: f64, m: u64) -> (f64, f64) {
    if r == 0.0 {
        return (0.0, if m == 1 { 1.0 } else { 0.0 });
    }
    let lr = r.ln();
    let t = (m as f64 * lr).exp();
    (t, m as f64 * ((m - 1) as f64 * lr).exp())
}

fn power_sums(scheme: &RadialScheme, alpha: f64, r: f64, tol: f64) -> Result<(f64, f64)> {
    if r == 0.0 {
        return Ok((0.0, 1.0));
    }
    if !(tol > 0.0) {
        return Err(Error::config(format!("tolerance must be positive, got {tol}")));
    }
    let c = -r.ln();
    let s = 1.0 / alpha;
    let (mut a, mut da) = (0.0, 0.0);
    for j in 1..=MAX_TERMS {
        let (t, dt) = term(r, scheme.exponent(j as u32));
        a += t;
        da += dt;
        let y = c * (j as f64).powf(alpha);
        // x r^{x-1} is decreasing once x >= 1/c, which the A' bound needs.
        if y < 1.0 || y <= s {
            continue;
        }
        let tail_a = s * c.powf(-s) * upper_gamma_bound(s, y);
        let tail_da = s * c.powf(-s - 1.0) * upper_gamma_bound(s + 1.0, y) / r;
        if tail_a < tol && tail_da < tol {
            return Ok((a + tail_a, da + tail_da));
        }
    }
    Err(Error::Resource(format!(
        "admissibility sum for alpha = {alpha} at r = {r} needs more than {MAX_TERMS} terms"
    )))
}

/// `Γ(s, y) ≤ y^{s-1} e^{-y} / (1 - max(s-1, 0)/y)` for `y > max(s-1, 0)`.
fn upper_gamma_bound(s: f64, y: f64) -> f64 {
    let k = (s - 1.0).max(0.0);
    debug_assert!(y > k);
    ((s - 1.0) * y.ln() - y).exp() / (1.0 - k / y)
}
