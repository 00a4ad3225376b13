//! Radial approach schemes and structured approach paths.

mod admissibility;
mod mz;
mod paths;
mod scheme;

pub use admissibility::admissibility_a;
pub use mz::{
    build_mz_sequence, mz_default_radius, mz_default_sequence, mz_summand_bound, MzCheck,
    MzSequence, Run,
};
pub use paths::{
    adaptive_block_path, block_path, choose_blocks_mc, default_adaptive_grid,
    sampled_block_path, AdaptiveReport, ApproachPath, BlockSchedule, PathStep, TermOracle,
    BLOCK_WIDTH_CAP, HEAD_CAP,
};
pub use scheme::RadialScheme;

use crate::error::{Error, Result};
use crate::extension::poisson_factor;
use crate::series::TorusPoint;

/// `P_r(θ) / P_{r_k}(θ)` for the product Poisson kernel, as
/// `∏_n (1 - r^{2m_n})/(1 - r_k^{2m_n}) · |1 - r_k^{m_n} e^{iθ_n}|^2 / |1 - r^{m_n} e^{iθ_n}|^2`,
/// one factor at a time.
pub fn kernel_ratio(r: f64, r_k: f64, theta: &TorusPoint, scheme: &RadialScheme) -> Result<f64> {
    for x in [r, r_k] {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::domain(format!("kernel ratio needs radii in [0, 1), got {x}")));
        }
    }
    scheme.validate()?;
    if r == r_k {
        return Ok(1.0);
    }
    Ok(theta
        .angles()
        .iter()
        .enumerate()
        .map(|(i, &th)| {
            let m = scheme.exponent(i as u32 + 1);
            poisson_factor(r, m, th) / poisson_factor(r_k, m, th)
        })
        .product())
}
