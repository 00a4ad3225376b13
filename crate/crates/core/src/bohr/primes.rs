use std::sync::OnceLock;

/// Upper end of the cached sieve.
pub const SIEVE_LIMIT: u32 = 1_000_000;

pub(crate) struct Sieve {
    /// Smallest prime factor of every `n ≤ SIEVE_LIMIT` (0 for n < 2).
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl Sieve {
    fn build(limit: u32) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let p_i = spf[i];
            for &p in &primes {
                if p > p_i || i * p as usize > n {
                    break;
                }
                spf[i * p as usize] = p;
            }
        }
        Sieve { spf, primes }
    }

    pub(crate) fn smallest_factor(&self, n: u32) -> u32 {
        self.spf[n as usize]
    }

    pub(crate) fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// 1-based position of the prime `p` in the sequence of primes.
    pub(crate) fn index_of_prime(&self, p: u32) -> Option<u32> {
        self.primes.binary_search(&p).ok().map(|i| i as u32 + 1)
    }

    /// The `j`-th prime (1-based).
    pub(crate) fn nth_prime(&self, j: u32) -> Option<u32> {
        j.checked_sub(1)
            .and_then(|i| self.primes.get(i as usize).copied())
    }
}

pub(crate) fn sieve() -> &'static Sieve {
    static SIEVE: OnceLock<Sieve> = OnceLock::new();
    SIEVE.get_or_init(|| Sieve::build(SIEVE_LIMIT))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes() {
        let s = sieve();
        assert_eq!(&s.primes()[..8], &[2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(s.primes().len(), 78_498);
        assert_eq!(s.nth_prime(4), Some(7));
        assert_eq!(s.index_of_prime(999_983), Some(78_498));
        assert_eq!(s.smallest_factor(91), 7);
    }
}
