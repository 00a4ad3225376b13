use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smooth even cutoff: `ψ = 1` on `|t| ≤ plateau`, `ψ = 0` on
/// `|t| ≥ support`, with the transition `S(u) = φ(u)/(φ(u) + φ(1-u))`,
/// `φ(x) = e^{-1/x}`, in the variable `u = (support - |t|)/(support - plateau)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpProfile {
    pub plateau: f64,
    pub support: f64,
}

impl Default for BumpProfile {
    fn default() -> Self {
        BumpProfile { plateau: 0.25, support: 0.5 }
    }
}

impl BumpProfile {
    pub fn validate(&self) -> Result<()> {
        if self.plateau > 0.0 && self.plateau < self.support && self.support < 1.0 {
            Ok(())
        } else {
            Err(Error::config(format!(
                "bump needs 0 < plateau < support < 1, got {} and {}",
                self.plateau, self.support
            )))
        }
    }

    pub fn psi(&self, t: f64) -> f64 {
        let a = t.abs();
        if a <= self.plateau {
            1.0
        } else if a >= self.support {
            0.0
        } else {
            transition((self.support - a) / (self.support - self.plateau))
        }
    }

    /// `-ψ'(x)` for `x > 0`; a probability density on `(plateau, support)`.
    pub fn level_density(&self, x: f64) -> f64 {
        if x <= self.plateau || x >= self.support {
            return 0.0;
        }
        let w = self.support - self.plateau;
        let u = (self.support - x) / w;
        let s = transition(u);
        s * (1.0 - s) * (u.powi(-2) + (1.0 - u).powi(-2)) / w
    }

    /// `∫ ψ = plateau + support`.
    pub fn integral(&self) -> f64 {
        self.plateau + self.support
    }
}

/// `S(u) = 1/(1 + e^{1/u - 1/(1-u)})` on `(0, 1)`, 0 and 1 outside.
fn transition(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        1.0 / (1.0 + (1.0 / u - 1.0 / (1.0 - u)).exp())
    }
}

/// `δ_n = 1/((n + 2) ln²(n + 2))`.
pub fn bump_width(n: usize) -> f64 {
    let m = (n + 2) as f64;
    1.0 / (m * m.ln().powi(2))
}

/// `ψ(t)` for the default profile.
pub fn psi(t: f64) -> f64 {
    BumpProfile::default().psi(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;
    use crate::rng::SeedStream;
    use rand::Rng;

    #[test]
    fn plateau_support_and_symmetry() {
        assert_eq!(psi(0.0), 1.0);
        assert_eq!(psi(0.25), 1.0);
        assert_eq!(psi(0.6), 0.0);
        assert_eq!(psi(0.5), 0.0);
        let mut rng = SeedStream::new(0).substream(0);
        for _ in 0..100 {
            let t: f64 = rng.gen_range(-1.0..1.0);
            assert_eq!(psi(t), psi(-t));
            assert!((0.0..=1.0).contains(&psi(t)));
        }
        let mut prev = 1.0;
        for i in 0..=1000 {
            let v = psi(0.25 + 0.25 * i as f64 / 1000.0);
            assert!(v <= prev);
            prev = v;
        }
        assert!((psi(0.375) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn integrals() {
        let p = BumpProfile::default();
        let total = integrate(|t| p.psi(t), -0.5, 0.5, &[-0.25, 0.25], 1e-13);
        assert!((total - p.integral()).abs() < 1e-12);
        let mass = integrate(|x| p.level_density(x), 0.25, 0.5, &[], 1e-13);
        assert!((mass - 1.0).abs() < 1e-12);
        // -ψ' by central differences.
        for x in [0.3, 0.37, 0.45] {
            let h = 1e-6;
            let fd = -(p.psi(x + h) - p.psi(x - h)) / (2.0 * h);
            assert!((fd - p.level_density(x)).abs() < 1e-6);
        }
    }

    #[test]
    fn widths() {
        assert!((bump_width(1) - 1.0 / (3.0 * 3f64.ln().powi(2))).abs() < 1e-15);
        assert!(bump_width(100) < bump_width(10));
        assert!(BumpProfile { plateau: 0.3, support: 0.2 }.validate().is_err());
    }
}
