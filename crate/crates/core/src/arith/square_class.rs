use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::factor::Factorizer;
use crate::{Error, Rational, Result};

/// An element of Q*/Q*^2: a sign and the primes of odd valuation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SquareClass {
    negative: bool,
    primes: Vec<BigInt>,
}

impl SquareClass {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Builds a class from its parts. `primes` must be distinct primes;
    /// they are sorted here.
    pub fn from_parts(negative: bool, mut primes: Vec<BigInt>) -> Self {
        primes.sort();
        primes.dedup();
        SquareClass { negative, primes }
    }

    pub fn of_rational(q: &Rational, factorizer: &Factorizer) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroSquareClass);
        }
        // num * den has the same class as num / den
        let n = (q.numer() * q.denom()).abs();
        let f = factorizer.factor(&n)?;
        Ok(SquareClass {
            negative: q.is_negative(),
            primes: f.iter().filter(|(_, e)| e % 2 == 1).map(|(p, _)| p.clone()).collect(),
        })
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn primes(&self) -> &[BigInt] {
        &self.primes
    }

    pub fn is_trivial(&self) -> bool {
        !self.negative && self.primes.is_empty()
    }

    pub fn contains_prime(&self, p: &BigInt) -> bool {
        self.primes.binary_search(p).is_ok()
    }

    /// Group law: signs multiply, prime sets take symmetric difference.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.primes, &other.primes);
        let (mut i, mut j) = (0, 0);
        let mut primes = Vec::with_capacity(a.len() + b.len());
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    primes.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    primes.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        primes.extend_from_slice(&a[i..]);
        primes.extend_from_slice(&b[j..]);
        SquareClass {
            negative: self.negative != other.negative,
            primes,
        }
    }

    /// The squarefree integer representing this class.
    pub fn representative(&self) -> BigInt {
        let r: BigInt = self.primes.iter().fold(BigInt::one(), |acc, p| acc * p);
        if self.negative {
            -r
        } else {
            r
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative())
    }
}

/// Square class of a nonzero rational, using the default factorizer.
pub fn square_class(q: &Rational) -> Result<SquareClass> {
    SquareClass::of_rational(q, &Factorizer::default())
}

/// An element of (Q*/Q*^2)^3.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SquareClassTriple(pub [SquareClass; 3]);

impl SquareClassTriple {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn from_rationals(qs: &[Rational; 3]) -> Result<Self> {
        Ok(SquareClassTriple([
            square_class(&qs[0])?,
            square_class(&qs[1])?,
            square_class(&qs[2])?,
        ]))
    }

    pub fn from_i64s(v: [i64; 3]) -> Result<Self> {
        Self::from_rationals(&v.map(super::rat))
    }

    pub fn components(&self) -> &[SquareClass; 3] {
        &self.0
    }

    pub fn mul(&self, other: &Self) -> Self {
        SquareClassTriple([
            self.0[0].mul(&other.0[0]),
            self.0[1].mul(&other.0[1]),
            self.0[2].mul(&other.0[2]),
        ])
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(SquareClass::is_trivial)
    }

    /// Membership in the norm-one subgroup: the three classes multiply to 1.
    pub fn in_norm_kernel(&self) -> bool {
        self.0[0].mul(&self.0[1]).mul(&self.0[2]).is_trivial()
    }

    pub fn occurs(&self, p: &BigInt) -> bool {
        self.0.iter().any(|c| c.contains_prime(p))
    }
}

impl fmt::Display for SquareClassTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// True iff `p` has odd valuation in some component of `z`.
pub fn occurs(p: &BigInt, z: &SquareClassTriple) -> bool {
    z.occurs(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use proptest::prelude::*;

    fn sc(n: i64, d: i64) -> SquareClass {
        square_class(&ratio(n, d)).unwrap()
    }

    #[test]
    fn examples() {
        assert!(sc(4, 1).is_trivial());
        assert_eq!(sc(-18, 1), SquareClass::from_parts(true, vec![2.into()]));
        assert_eq!(sc(50, 9), SquareClass::from_parts(false, vec![2.into()]));
        assert_eq!(square_class(&ratio(0, 1)), Err(Error::ZeroSquareClass));
    }

    #[test]
    fn occurs_examples() {
        let z = SquareClassTriple::from_i64s([-1, 11, -11]).unwrap();
        assert!(occurs(&11.into(), &z));
        assert!(!occurs(&3.into(), &SquareClassTriple::trivial()));
        let z = SquareClassTriple::from_i64s([2, 10, 5]).unwrap();
        assert!(occurs(&5.into(), &z));
    }

    fn nonzero() -> impl Strategy<Value = Rational> {
        (-5000i64..5000, 1i64..5000)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| ratio(n, d))
    }

    proptest! {
        #[test]
        fn homomorphism(a in nonzero(), b in nonzero()) {
            let lhs = square_class(&(&a * &b)).unwrap();
            let rhs = square_class(&a).unwrap().mul(&square_class(&b).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn invariant_under_squares(a in nonzero(), r in nonzero()) {
            prop_assert_eq!(square_class(&(&a * &r * &r)).unwrap(), square_class(&a).unwrap());
        }

        #[test]
        fn squares_never_occur(a in nonzero(), b in nonzero(), c in nonzero(), p in 2i64..100) {
            let z = SquareClassTriple::from_rationals(&[a, b, c]).unwrap();
            prop_assert!(!z.mul(&z).occurs(&p.into()));
            prop_assert!(z.mul(&z).is_trivial());
        }
    }
}
