//! Sparse multivariate Fourier series.
//!
//! A [`FourierSeries`] is the common representation of trigonometric
//! polynomials on `T^∞` and of measures known through finitely many Fourier
//! coefficients. Its polyharmonic extension to the closed polydisc is
//!
//! ```text
//! f(z) = Σ_ν a_ν ρ^{|ν|} e^{iν·θ},    z_j = ρ_j e^{iθ_j},
//! ```
//!
//! which for analytic spectrum is the usual power series.

mod diagonal;
pub(crate) mod points;
mod text;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bohr::MultiIndex;
use crate::error::{Error, Result};
use crate::rng::SeedStream;

pub use diagonal::TrigPolynomial;
pub use points::{PolydiscPoint, TorusPoint};
pub use text::fmt_f64;

/// Spectrum hypotheses, from tightest to loosest.
///
/// `Analytic ⊂ PMAnalytic ⊂ General` and `Analytic ⊂ Big ⊂ General`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumClass {
    /// Every exponent nonnegative.
    Analytic,
    /// Every term has all exponents ≥ 0 or all ≤ 0.
    PMAnalytic,
    /// Every term has `Σ ν_j ≥ 0`.
    Big,
    General,
}

impl SpectrumClass {
    /// Whether every series of class `self` also belongs to `other`.
    pub fn is_within(self, other: SpectrumClass) -> bool {
        use SpectrumClass::*;
        matches!(
            (self, other),
            (_, General) | (Analytic, _) | (PMAnalytic, PMAnalytic) | (Big, Big)
        )
    }
}

/// A finitely supported Fourier series with no stored zero coefficient.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FourierSeries {
    terms: BTreeMap<MultiIndex, Complex64>,
    dim: u32,
}

/// Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

impl FourierSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_terms([(MultiIndex::empty(), c)])
    }

    pub fn monomial(nu: MultiIndex, c: Complex64) -> Self {
        Self::from_terms([(nu, c)])
    }

    /// Sums coefficients of repeated indices and drops exact zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (MultiIndex, Complex64)>) -> Self {
        let mut map: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (nu, a) in terms {
            *map.entry(nu).or_default() += a;
        }
        Self::from_map(map)
    }

    fn from_map(mut terms: BTreeMap<MultiIndex, Complex64>) -> Self {
        terms.retain(|_, a| *a != Complex64::new(0.0, 0.0));
        let dim = terms.keys().map(MultiIndex::dim).max().unwrap_or(0);
        FourierSeries { terms, dim }
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&MultiIndex, Complex64)> + '_ {
        self.terms.iter().map(|(nu, &a)| (nu, a))
    }

    pub fn coeff(&self, nu: &MultiIndex) -> Complex64 {
        self.terms.get(nu).copied().unwrap_or_default()
    }

    /// `F̂(0)`.
    pub fn constant_term(&self) -> Complex64 {
        self.coeff(&MultiIndex::empty())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest `m` with all support in the first `m` coordinates.
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Coefficientwise map; the index set is unchanged apart from zeros.
    pub fn map_coefficients(&self, mut f: impl FnMut(&MultiIndex, Complex64) -> Complex64) -> Self {
        Self::from_map(self.terms.iter().map(|(nu, &a)| (nu.clone(), f(nu, a))).collect())
    }

    pub fn add(&self, other: &FourierSeries) -> Self {
        Self::from_terms(self.terms().chain(other.terms()).map(|(nu, a)| (nu.clone(), a)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_coefficients(|_, a| a * c)
    }

    /// Product of trigonometric polynomials (convolution of coefficients).
    pub fn mul(&self, other: &FourierSeries) -> Result<Self> {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for (mu, a) in self.terms() {
            for (nu, b) in other.terms() {
                out.push((mu.checked_add(nu)?, a * b));
            }
        }
        Ok(Self::from_terms(out))
    }

    /// Bohr's m-th abschnitt: the terms supported in the first `m` coordinates.
    pub fn abschnitt(&self, m: u32) -> Self {
        if m >= self.dim {
            return self.clone();
        }
        Self::from_map(
            self.terms
                .iter()
                .filter(|(nu, _)| nu.dim() <= m)
                .map(|(nu, &a)| (nu.clone(), a))
                .collect(),
        )
    }

    /// Tightest spectrum class containing the support.
    pub fn spectrum_class(&self) -> SpectrumClass {
        let keys = || self.terms.keys();
        if keys().all(MultiIndex::is_nonnegative) {
            SpectrumClass::Analytic
        } else if keys().all(|nu| nu.is_nonnegative() || nu.is_nonpositive()) {
            SpectrumClass::PMAnalytic
        } else if keys().all(|nu| nu.diagonal_sum() >= 0) {
            SpectrumClass::Big
        } else {
            SpectrumClass::General
        }
    }

    /// Polyharmonic extension at `z`. Coordinates beyond `z.len()` are 0,
    /// so a term using such a coordinate vanishes.
    pub fn evaluate(&self, z: &PolydiscPoint) -> Complex64 {
        let coords = z.coords();
        self.terms()
            .map(|(nu, a)| {
                let mut v = a;
                for &(j, e) in nu.entries() {
                    let Some(&zj) = coords.get(j as usize - 1) else {
                        return Complex64::new(0.0, 0.0);
                    };
                    v *= if e > 0 { zj.powi(e) } else { zj.conj().powi(-e) };
                }
                v
            })
            .sum()
    }

    /// Boundary value `Σ a_ν e^{iν·θ}`. Missing angles are an error, not 0.
    pub fn evaluate_torus(&self, theta: &TorusPoint) -> Result<Complex64> {
        self.check_angles(theta)?;
        let th = theta.angles();
        Ok(self
            .terms()
            .map(|(nu, a)| a * Complex64::cis(phase(nu, th)))
            .sum())
    }

    pub(crate) fn check_angles(&self, theta: &TorusPoint) -> Result<()> {
        if (theta.len() as u32) < self.dim {
            return Err(Error::domain(format!(
                "series has dimension {} but the point has {} angles",
                self.dim,
                theta.len()
            )));
        }
        Ok(())
    }

    /// `Σ |a_ν|`.
    pub fn wiener_norm(&self) -> f64 {
        self.terms.values().map(|a| a.norm()).sum()
    }

    /// `(Σ |a_ν|²)^{1/2}`, the L² norm by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Monte Carlo estimate of `‖F‖_p` on the torus.
    ///
    /// Sample `i` uses substream `i` of `stream`, so the value does not
    /// depend on the rayon pool size. The standard error is propagated from
    /// the sample mean of `|F|^p` by the delta method.
    pub fn lp_norm_mc(&self, p: f64, samples: usize, stream: &SeedStream) -> Result<McEstimate> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::config(format!("p must be positive, got {p}")));
        }
        if samples < 2 {
            return Err(Error::config("need at least 2 samples"));
        }
        let m = self.dim.max(1) as usize;
        let values: Vec<f64> = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let theta = TorusPoint::sample(m, &mut stream.substream(i));
                self.evaluate_torus(&theta).expect("dimension checked").norm().powf(p)
            })
            .collect();
        Ok(power_mean_estimate(&values, p))
    }
}

/// `(mean y)^{1/p}` with delta-method standard error.
pub(crate) fn power_mean_estimate(values: &[f64], p: f64) -> McEstimate {
    let (mean, se) = mean_and_se(values);
    let estimate = mean.powf(1.0 / p);
    let std_error = if mean > 0.0 {
        se * mean.powf(1.0 / p - 1.0) / p
    } else {
        0.0
    };
    McEstimate { estimate, std_error }
}

/// Sample mean and standard error of the mean, summed in index order.
pub(crate) fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// `ν·θ`; `θ` must cover the support.
pub(crate) fn phase(nu: &MultiIndex, theta: &[f64]) -> f64 {
    nu.entries()
        .iter()
        .map(|&(j, e)| e as f64 * theta[j as usize - 1])
        .sum()
}

impl TorusPoint {
    /// `m` i.i.d. uniform angles.
    pub fn sample<R: Rng + ?Sized>(m: usize, rng: &mut R) -> TorusPoint {
        TorusPoint::new(
            (0..m)
                .map(|_| rng.gen::<f64>() * std::f64::consts::TAU)
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z(j: u32) -> FourierSeries {
        FourierSeries::monomial(MultiIndex::unit(j, 1), c(1.0, 0.0))
    }

    fn zbar(j: u32) -> FourierSeries {
        FourierSeries::monomial(MultiIndex::unit(j, -1), c(1.0, 0.0))
    }

    pub(crate) fn random_series(seed: u64, terms: usize, dim: u32, max_exp: i32) -> FourierSeries {
        let mut rng = SeedStream::new(seed).substream(0);
        FourierSeries::from_terms((0..terms).map(|_| {
            let nu = MultiIndex::from_dense(
                &(0..dim).map(|_| rng.gen_range(-max_exp..=max_exp)).collect::<Vec<_>>(),
            );
            (nu, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        }))
    }

    #[test]
    fn abschnitt_examples() {
        let f = z(1).add(&z(3));
        assert_eq!(f.abschnitt(2), z(1));
        assert_eq!(f.abschnitt(3), f);
        assert_eq!(f.abschnitt(10), f);
        assert_eq!(f.dim(), 3);
    }

    #[test]
    fn abschnitt_matches_evaluation_with_zeroed_tail() {
        for seed in 0..20 {
            let f = random_series(seed, 8, 5, 2);
            let mut rng = SeedStream::new(seed).substream(1);
            let pts: Vec<Complex64> = (0..5)
                .map(|_| Complex64::from_polar(rng.gen::<f64>(), rng.gen::<f64>() * TAU))
                .collect();
            for m in 1..=5u32 {
                let mut zeroed = pts.clone();
                for v in zeroed.iter_mut().skip(m as usize) {
                    *v = c(0.0, 0.0);
                }
                let lhs = f.abschnitt(m).evaluate(&PolydiscPoint::new(pts.clone()).unwrap());
                let rhs = f.evaluate(&PolydiscPoint::new(zeroed).unwrap());
                assert!((lhs - rhs).norm() < 1e-13, "seed {seed} m {m}");
            }
        }
    }

    #[test]
    fn spectrum_examples() {
        assert_eq!(z(1).mul(&z(2)).unwrap().spectrum_class(), SpectrumClass::Analytic);
        assert_eq!(z(1).add(&zbar(2)).spectrum_class(), SpectrumClass::PMAnalytic);
        assert_eq!(z(1).mul(&zbar(2)).unwrap().spectrum_class(), SpectrumClass::Big);
        let g = zbar(1).add(&z(1).mul(&zbar(2)).unwrap());
        assert_eq!(g.spectrum_class(), SpectrumClass::General);
        assert_eq!(FourierSeries::zero().spectrum_class(), SpectrumClass::Analytic);
    }

    #[test]
    fn spectrum_lattice() {
        use SpectrumClass::*;
        assert!(Analytic.is_within(PMAnalytic) && Analytic.is_within(Big));
        assert!(PMAnalytic.is_within(General) && Big.is_within(General));
        assert!(!PMAnalytic.is_within(Big) && !Big.is_within(PMAnalytic));
        assert!(!General.is_within(Big));
    }

    #[test]
    fn evaluation_examples() {
        let f = z(1).mul(&z(2)).unwrap();
        let p = PolydiscPoint::new(vec![c(0.5, 0.0), Complex64::from_polar(0.5, FRAC_PI_2)]).unwrap();
        assert!((f.evaluate(&p) - c(0.0, 0.25)).norm() < 1e-15);

        let (rho, t) = (0.7, 1.3);
        let p = PolydiscPoint::new(vec![Complex64::from_polar(rho, t)]).unwrap();
        assert!((zbar(1).evaluate(&p) - Complex64::from_polar(rho, -t)).norm() < 1e-15);

        let g = FourierSeries::constant(c(1.0, 0.0)).add(&z(1));
        assert_eq!(g.evaluate(&PolydiscPoint::new(vec![c(0.0, 0.0)]).unwrap()), c(1.0, 0.0));
        // Missing coordinates count as 0.
        assert_eq!(g.evaluate(&PolydiscPoint::new(vec![]).unwrap()), c(1.0, 0.0));
    }

    #[test]
    fn torus_evaluation_matches_polydisc_evaluation() {
        for seed in 0..10 {
            let f = random_series(seed, 10, 4, 3);
            let theta = TorusPoint::sample(4, &mut SeedStream::new(seed).substream(9));
            let boundary = PolydiscPoint::on_torus(&theta);
            let a = f.evaluate_torus(&theta).unwrap();
            let b = f.evaluate(&boundary);
            assert!((a - b).norm() < 1e-12);
        }
        assert!(z(3).evaluate_torus(&TorusPoint::new(vec![0.0; 2])).is_err());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(FourierSeries::zero().wiener_norm(), 0.0);
        let f = z(1).scale(c(3.0, 0.0)).add(&z(2).scale(c(0.0, -4.0)));
        assert_eq!(f.wiener_norm(), 7.0);
        assert!((z(1).add(&z(2)).l2_norm() - 2f64.sqrt()).abs() < 1e-15);
        let unimodular = FourierSeries::from_terms((1..=9).map(|j| {
            (MultiIndex::unit(j, 1), Complex64::from_polar(1.0, j as f64))
        }));
        assert!((unimodular.l2_norm() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn lp_norm_examples() {
        let s = SeedStream::new(11);
        for (cst, p) in [(2.0, 2.0), (0.5, 4.0), (3.0, 1.0)] {
            let e = FourierSeries::constant(c(cst, 0.0)).lp_norm_mc(p, 100, &s).unwrap();
            assert_eq!(e.estimate, cst);
            assert_eq!(e.std_error, 0.0);
        }
        let e = z(1).lp_norm_mc(2.0, 1000, &s).unwrap();
        assert!((e.estimate - 1.0).abs() <= 3.0 * e.std_error + 1e-12);

        // ∫|z1+z2|^4 = Σ_k |coefficients of (z1+z2)^2|^2 = 1 + 4 + 1 = 6.
        let e = z(1).add(&z(2)).lp_norm_mc(4.0, 20_000, &s).unwrap();
        assert!((e.estimate - 6f64.powf(0.25)).abs() <= 3.0 * e.std_error, "{e:?}");

        assert!(z(1).lp_norm_mc(2.0, 1, &s).is_err());
        assert!(z(1).lp_norm_mc(0.0, 10, &s).is_err());
    }

    #[test]
    fn l2_norm_agrees_with_monte_carlo() {
        for seed in 0..10 {
            let f = random_series(100 + seed, 6, 3, 2);
            let e = f.lp_norm_mc(2.0, 4000, &SeedStream::new(seed)).unwrap();
            assert!(
                (e.estimate - f.l2_norm()).abs() <= 3.0 * e.std_error,
                "seed {seed}: {e:?} vs {}",
                f.l2_norm()
            );
        }
    }

    #[test]
    fn sampled_angles_are_reduced() {
        let theta = TorusPoint::sample(1000, &mut SeedStream::new(0).substream(0));
        assert!(theta.angles().iter().all(|&a| (0.0..TAU).contains(&a)));
        let mean_cos = theta.angles().iter().map(|a| a.cos()).sum::<f64>() / 1000.0;
        assert!(mean_cos.abs() < 3.0 / (1000f64.sqrt() * 2f64.sqrt()));
    }

    proptest! {
        #[test]
        fn operations_are_linear(seed in 0u64..500, a in -2.0f64..2.0, m in 1u32..5) {
            let f = random_series(seed, 6, 4, 2);
            let g = random_series(seed + 1000, 6, 4, 2);
            let k = c(a, 0.5);
            let h = f.scale(k).add(&g);
            let theta = TorusPoint::sample(4, &mut SeedStream::new(seed).substream(2));
            let lhs = h.abschnitt(m).evaluate_torus(&theta).unwrap();
            let rhs = k * f.abschnitt(m).evaluate_torus(&theta).unwrap()
                + g.abschnitt(m).evaluate_torus(&theta).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
