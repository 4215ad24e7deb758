use std::fmt::Debug;
use std::ops::Neg;

use num_traits::Num;

/// Scalars the polynomial and group-law code is generic over.
///
/// Division is assumed exact, so this is meant for fields: `BigRational`,
/// `Ratio<i64>` for small experiments, or `f64` when an approximation is fine.
pub trait Field: Clone + PartialEq + Debug + Num + Neg<Output = Self> {
    fn from_i64(v: i64) -> Self {
        let mut acc = Self::zero();
        let one = Self::one();
        let mut n = v.unsigned_abs();
        // double-and-add keeps this O(log v) for exact types
        let mut pow = one;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc + pow.clone();
            }
            pow = pow.clone() + pow;
            n >>= 1;
        }
        if v < 0 {
            -acc
        } else {
            acc
        }
    }
}

impl<T> Field for T where T: Clone + PartialEq + Debug + Num + Neg<Output = T> {}
