use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::primes::{is_prime, sieve, small_primes};
use crate::{Error, Result};

pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

/// Prime factorization of a positive integer, primes ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization(BTreeMap<BigInt, u32>);

impl Factorization {
    pub fn iter(&self) -> impl Iterator<Item = (&BigInt, u32)> {
        self.0.iter().map(|(p, &e)| (p, e))
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.0.keys()
    }

    pub fn exponent(&self, p: &BigInt) -> u32 {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn product(&self) -> BigInt {
        self.iter().fold(BigInt::one(), |acc, (p, e)| acc * p.pow(e))
    }

    fn push(&mut self, p: BigInt, e: u32) {
        *self.0.entry(p).or_insert(0) += e;
    }
}

/// Trial division up to `trial_bound`, then Brent's variant of Pollard rho.
#[derive(Clone, Debug)]
pub struct Factorizer {
    pub trial_bound: u64,
    /// Cap on the rho cycle length before a new polynomial is tried.
    pub rho_iterations: u64,
    pub rho_polynomials: u64,
}

impl Default for Factorizer {
    fn default() -> Self {
        Factorizer {
            trial_bound: DEFAULT_TRIAL_BOUND,
            rho_iterations: 1 << 24,
            rho_polynomials: 24,
        }
    }
}

impl Factorizer {
    pub fn with_trial_bound(trial_bound: u64) -> Self {
        Factorizer {
            trial_bound,
            ..Default::default()
        }
    }

    pub fn factor(&self, n: &BigInt) -> Result<Factorization> {
        if !n.is_positive() {
            return Err(Error::InvalidParams(format!("cannot factor {n}")));
        }
        let mut out = Factorization::default();
        let mut n = n.clone();
        let owned;
        let primes: &[u64] = if self.trial_bound <= DEFAULT_TRIAL_BOUND {
            small_primes()
        } else {
            owned = sieve(self.trial_bound);
            &owned
        };
        for (i, &p) in primes.iter().enumerate() {
            if p > self.trial_bound {
                break;
            }
            let pb = BigInt::from(p);
            if &pb * &pb > n {
                break;
            }
            let mut e = 0;
            loop {
                let (q, r) = n.div_rem(&pb);
                if !r.is_zero() {
                    break;
                }
                n = q;
                e += 1;
            }
            if e > 0 {
                out.push(pb, e);
            }
            // a large prime cofactor would otherwise cost the full trial range
            if i == 168 && n > BigInt::one() && is_prime(&n) {
                break;
            }
        }
        if n > BigInt::one() {
            self.split(n, 1, &mut out)?;
        }
        Ok(out)
    }

    fn split(&self, n: BigInt, mult: u32, out: &mut Factorization) -> Result<()> {
        if n.is_one() {
            return Ok(());
        }
        if is_prime(&n) {
            out.push(n, mult);
            return Ok(());
        }
        let r = n.sqrt();
        if &r * &r == n {
            return self.split(r, mult * 2, out);
        }
        let d = (1..=self.rho_polynomials)
            .find_map(|c| self.rho(&n, &BigInt::from(c)))
            .ok_or_else(|| Error::FactorizationFailed(n.to_string()))?;
        let other = &n / &d;
        self.split(d, mult, out)?;
        self.split(other, mult, out)
    }

    fn rho(&self, n: &BigInt, c: &BigInt) -> Option<BigInt> {
        let f = |y: &BigInt| (y * y + c).mod_floor(n);
        let m = 128u64;
        let mut y = BigInt::from(2);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut r = 1u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()).mod_floor(n);
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            if r > self.rho_iterations {
                return None;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        (&g != n).then_some(g)
    }
}

/// Factors with the default trial bound.
pub fn factor(n: &BigInt) -> Result<Factorization> {
    Factorizer::default().factor(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(n: i64) -> Vec<(i64, u32)> {
        factor(&BigInt::from(n))
            .unwrap()
            .iter()
            .map(|(p, e)| (i64::try_from(p).unwrap(), e))
            .collect()
    }

    #[test]
    fn small_values() {
        assert!(pairs(1).is_empty());
        assert_eq!(pairs(18), vec![(2, 1), (3, 2)]);
        assert_eq!(pairs(229), vec![(229, 1)]);
    }

    #[test]
    fn trial_division_oracle_agrees() {
        for n in 1..3000i64 {
            let mut m = n;
            let mut expect = Vec::new();
            let mut d = 2;
            while d * d <= m {
                let mut e = 0;
                while m % d == 0 {
                    m /= d;
                    e += 1;
                }
                if e > 0 {
                    expect.push((d, e));
                }
                d += 1;
            }
            if m > 1 {
                expect.push((m, 1));
            }
            assert_eq!(pairs(n), expect, "n = {n}");
        }
    }

    #[test]
    fn rho_splits_beyond_trial_bound() {
        // two primes above the trial bound, plus a repeated one
        let p = BigInt::from(1_000_000_007u64);
        let q = BigInt::from(998_244_353u64);
        let n = &p * &q * &q * BigInt::from(12);
        let f = Factorizer::with_trial_bound(1000).factor(&n).unwrap();
        assert_eq!(f.exponent(&q), 2);
        assert_eq!(f.exponent(&p), 1);
        assert_eq!(f.product(), n);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(factor(&BigInt::zero()).is_err());
    }
}
