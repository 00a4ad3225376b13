//! Multi-index arithmetic and the Bohr correspondence.
//!
//! The positive integer `n = p_1^{ν_1} ⋯ p_k^{ν_k}` is identified with the
//! exponent vector `ν`, which turns a Dirichlet series `Σ a_n n^{-s}` into a
//! power series `Σ a_ν z^ν` in infinitely many variables.

mod index;
mod primes;

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{FourierSeries, SpectrumClass};

pub use index::MultiIndex;
pub use primes::SIEVE_LIMIT;

/// Exponent vector of the prime factorization of `n`.
///
/// Fails for `n = 0`, and with a range error when `n` has a prime factor
/// above [`SIEVE_LIMIT`] since the coordinate of such a prime is not known.
pub fn index_of_integer(n: u64) -> Result<MultiIndex> {
    if n == 0 {
        return Err(Error::domain("0 has no prime factorization"));
    }
    let sieve = primes::sieve();
    let mut entries: Vec<(u32, i32)> = Vec::new();
    let mut push = |p: u32| {
        let j = sieve.index_of_prime(p).expect("sieve prime");
        match entries.last_mut() {
            Some(last) if last.0 == j => last.1 += 1,
            _ => entries.push((j, 1)),
        }
    };
    let mut m = n;
    if m > SIEVE_LIMIT as u64 {
        for &p in sieve.primes() {
            let p64 = p as u64;
            if p64 * p64 > m {
                break;
            }
            while m.is_multiple_of(p64) {
                push(p);
                m /= p64;
            }
            if m <= SIEVE_LIMIT as u64 {
                break;
            }
        }
        if m > SIEVE_LIMIT as u64 {
            return Err(Error::Range(format!(
                "{n} has a prime factor above the sieve limit {SIEVE_LIMIT}"
            )));
        }
    }
    let mut m = m as u32;
    while m > 1 {
        let p = sieve.smallest_factor(m);
        push(p);
        m /= p;
    }
    MultiIndex::new(entries)
}

/// Inverse of [`index_of_integer`] with checked overflow.
pub fn integer_of_index(nu: &MultiIndex) -> Result<u64> {
    let sieve = primes::sieve();
    let mut n: u64 = 1;
    for &(j, e) in nu.entries() {
        if e < 0 {
            return Err(Error::domain(format!(
                "negative exponent {e} at coordinate {j}"
            )));
        }
        let p = sieve.nth_prime(j).ok_or_else(|| {
            Error::Range(format!("coordinate {j} is beyond the cached primes"))
        })? as u64;
        let pe = p
            .checked_pow(e as u32)
            .ok_or_else(|| Error::Range(format!("{p}^{e} overflows u64")))?;
        n = n
            .checked_mul(pe)
            .ok_or_else(|| Error::Range(format!("index {nu} overflows u64")))?;
    }
    Ok(n)
}

/// A finitely supported Dirichlet series `Σ a_n n^{-s}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DirichletSeries {
    terms: BTreeMap<u64, Complex64>,
}

impl DirichletSeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sums repeated `n`, drops zero coefficients; `n = 0` is rejected.
    pub fn from_terms(terms: impl IntoIterator<Item = (u64, Complex64)>) -> Result<Self> {
        let mut map: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (n, a) in terms {
            if n == 0 {
                return Err(Error::domain("Dirichlet series are indexed from n = 1"));
            }
            *map.entry(n).or_default() += a;
        }
        map.retain(|_, a| *a != Complex64::new(0.0, 0.0));
        Ok(DirichletSeries { terms: map })
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.terms.iter().map(|(&n, &a)| (n, a))
    }

    pub fn coeff(&self, n: u64) -> Complex64 {
        self.terms.get(&n).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_support(&self) -> u64 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    /// Dirichlet convolution `(a * b)_n = Σ_{de = n} a_d b_e`.
    pub fn convolve(&self, other: &DirichletSeries) -> Result<DirichletSeries> {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for (d, a) in self.terms() {
            for (e, b) in other.terms() {
                let n = d
                    .checked_mul(e)
                    .ok_or_else(|| Error::Range(format!("{d}·{e} overflows u64")))?;
                out.push((n, a * b));
            }
        }
        DirichletSeries::from_terms(out)
    }

    /// `Σ_{n ≤ cutoff} a_n n^{-s}`; `cutoff` must cover the support.
    pub fn eval(&self, s: Complex64, cutoff: u64) -> Result<Complex64> {
        if cutoff < self.max_support() {
            return Err(Error::domain(format!(
                "cutoff {cutoff} is below the largest support point {}",
                self.max_support()
            )));
        }
        Ok(self
            .terms()
            .take_while(|&(n, _)| n <= cutoff)
            .map(|(n, a)| a * (-s * (n as f64).ln()).exp())
            .sum())
    }
}

/// The Bohr lift: coefficient of `ν` is `a_n` with `n = integer_of_index(ν)`.
pub fn lift_dirichlet(d: &DirichletSeries) -> Result<FourierSeries> {
    let terms = d
        .terms()
        .map(|(n, a)| Ok((index_of_integer(n)?, a)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FourierSeries::from_terms(terms))
}

/// Inverse of [`lift_dirichlet`]; requires analytic spectrum.
pub fn unlift(f: &FourierSeries) -> Result<DirichletSeries> {
    if f.spectrum_class() != SpectrumClass::Analytic {
        return Err(Error::Spectrum(
            "only series with nonnegative exponents correspond to Dirichlet series".into(),
        ));
    }
    let terms = f
        .terms()
        .map(|(nu, a)| Ok((integer_of_index(nu)?, a)))
        .collect::<Result<Vec<_>>>()?;
    DirichletSeries::from_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn factorization_examples() {
        assert_eq!(index_of_integer(1).unwrap(), MultiIndex::empty());
        assert_eq!(index_of_integer(12).unwrap(), MultiIndex::new([(1, 2), (2, 1)]).unwrap());
        assert_eq!(index_of_integer(50).unwrap(), MultiIndex::new([(1, 1), (3, 2)]).unwrap());
        assert!(matches!(index_of_integer(0), Err(Error::Domain(_))));
    }

    #[test]
    fn integer_examples() {
        assert_eq!(integer_of_index(&MultiIndex::empty()).unwrap(), 1);
        assert_eq!(integer_of_index(&MultiIndex::unit(2, 1)).unwrap(), 3);
        assert_eq!(integer_of_index(&MultiIndex::new([(1, 3), (4, 1)]).unwrap()).unwrap(), 56);
        assert!(matches!(
            integer_of_index(&MultiIndex::unit(1, -1)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            integer_of_index(&MultiIndex::unit(1, 64)),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn large_integers() {
        // 2^40 · 999983 fits in u64 and factors through the sieve.
        let n = (1u64 << 40) * 999_983;
        let nu = index_of_integer(n).unwrap();
        assert_eq!(nu.exponent(1), 40);
        assert_eq!(integer_of_index(&nu).unwrap(), n);
        // 1000003 is prime and above the sieve.
        assert!(matches!(index_of_integer(1_000_003), Err(Error::Range(_))));
        // u64::MAX = 3·5·17·257·641·65537·6700417 has a factor above the sieve.
        assert!(matches!(index_of_integer(u64::MAX), Err(Error::Range(_))));
    }

    #[test]
    fn lift_examples() {
        let d = DirichletSeries::from_terms([(1, c(1.0))]).unwrap();
        let f = lift_dirichlet(&d).unwrap();
        assert_eq!(f.coeff(&MultiIndex::empty()), c(1.0));
        assert_eq!(f.len(), 1);

        let z = Complex64::new(0.5, -2.0);
        let d = DirichletSeries::from_terms([(6, z)]).unwrap();
        let f = lift_dirichlet(&d).unwrap();
        assert_eq!(f.coeff(&MultiIndex::from_dense(&[1, 1])), z);
        assert_eq!(f.spectrum_class(), SpectrumClass::Analytic);
    }

    #[test]
    fn lift_round_trip_on_composite_support() {
        let d = DirichletSeries::from_terms(
            [2u64, 3, 4, 5, 6, 12]
                .iter()
                .map(|&n| (n, Complex64::new(n as f64, 1.0 / n as f64))),
        )
        .unwrap();
        assert_eq!(unlift(&lift_dirichlet(&d).unwrap()).unwrap(), d);
    }

    #[test]
    fn unlift_rejects_negative_exponents() {
        let f = FourierSeries::from_terms([(MultiIndex::unit(1, -1), c(1.0))]);
        assert!(matches!(unlift(&f), Err(Error::Spectrum(_))));
    }

    #[test]
    fn dirichlet_eval_examples() {
        let one = DirichletSeries::from_terms([(1, c(1.0))]).unwrap();
        assert_eq!(one.eval(Complex64::new(3.0, 7.0), 1).unwrap(), c(1.0));

        let d = DirichletSeries::from_terms([(1, c(1.0)), (2, c(1.0)), (4, c(1.0))]).unwrap();
        let v = d.eval(c(1.0), 4).unwrap();
        assert!((v - c(1.75)).norm() < 1e-15);
        assert!(d.eval(c(1.0), 3).is_err());

        let zeta = DirichletSeries::from_terms((1..=100).map(|n| (n, c(1.0)))).unwrap();
        let v = zeta.eval(c(2.0), 100).unwrap();
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((v.re - pi2_6).abs() < 0.01 && v.im.abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn factorization_is_multiplicative(a in 1u64..5000, b in 1u64..5000) {
            let ia = index_of_integer(a).unwrap();
            let ib = index_of_integer(b).unwrap();
            prop_assert_eq!(index_of_integer(a * b).unwrap(), ia.checked_add(&ib).unwrap());
        }

        #[test]
        fn lift_turns_convolution_into_product(
            a in prop::collection::vec((1u64..40, -3i32..4), 1..6),
            b in prop::collection::vec((1u64..40, -3i32..4), 1..6),
        ) {
            let da = DirichletSeries::from_terms(a.iter().map(|&(n, x)| (n, c(x as f64)))).unwrap();
            let db = DirichletSeries::from_terms(b.iter().map(|&(n, x)| (n, c(x as f64)))).unwrap();
            let lhs = lift_dirichlet(&da.convolve(&db).unwrap()).unwrap();
            let rhs = lift_dirichlet(&da).unwrap().mul(&lift_dirichlet(&db).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
