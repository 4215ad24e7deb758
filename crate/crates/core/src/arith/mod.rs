//! Integer and square-class arithmetic.

mod f2;
mod factor;
pub mod modular;
pub mod primes;
mod square_class;

pub use f2::{functional_value, subgroup_contains, Coord, SpanDecision};
pub use factor::{factor, Factorization, Factorizer, DEFAULT_TRIAL_BOUND};
pub use primes::is_prime;
pub use square_class::{occurs, square_class, SquareClass, SquareClassTriple};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    assert!(!n.is_zero());
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `p`-adic valuation of a nonzero rational.
pub fn rational_valuation(q: &Rational, p: &BigInt) -> i64 {
    valuation(q.numer(), p) as i64 - valuation(q.denom(), p) as i64
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a rational, if it is the square of a rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let n = exact_sqrt(q.numer())?;
    let d = exact_sqrt(q.denom())?;
    Some(Rational::new(n, d))
}

pub fn is_rational_square(q: &Rational) -> bool {
    rational_sqrt(q).is_some()
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub(crate) fn is_integral(q: &Rational) -> bool {
    q.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(-72), &BigInt::from(2)), 3);
        assert_eq!(rational_valuation(&ratio(50, 9), &BigInt::from(3)), -2);
    }

    #[test]
    fn sqrt_rational() {
        assert_eq!(rational_sqrt(&ratio(49, 4)), Some(ratio(7, 2)));
        assert_eq!(rational_sqrt(&ratio(-4, 1)), None);
        assert_eq!(rational_sqrt(&ratio(2, 1)), None);
    }
}
