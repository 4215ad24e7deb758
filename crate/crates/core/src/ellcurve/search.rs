use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::torsion::IntegralModel;
use super::ECPoint;
use crate::arith::exact_sqrt;
use crate::{Curve, Point, Rational};

/// All affine points whose integral-model x-coordinate is `a/d^2` with
/// `|a| <= bound` and `1 <= d <= bound`, mapped back to `e`.
///
/// Ordered by `d`, then `a`, then `y` ascending.
pub fn search_points(e: &Curve, bound: u64) -> Vec<Point> {
    let model = IntegralModel::of(e);
    let b = bound as i64;
    let mut out = Vec::new();
    for d in 1..=b {
        let d = BigInt::from(d);
        let d2 = &d * &d;
        let d4 = &d2 * &d2;
        let d6 = &d4 * &d2;
        for a in -b..=b {
            let a = BigInt::from(a);
            if !a.gcd(&d).is_one() {
                continue;
            }
            // d^6 f(a/d^2)
            let n = &a * &a * &a + &model.a * &a * &a * &d2 + &model.b * &a * &d4 + &model.c * &d6;
            let Some(r) = exact_sqrt(&n) else { continue };
            let x = Rational::new(a.clone(), d2.clone());
            let y = Rational::new(r.clone(), &d2 * &d);
            let mut ys = vec![-y.clone(), y];
            ys.dedup();
            for y in ys {
                out.push(model.to_original(&ECPoint::new(x.clone(), y)));
            }
        }
    }
    out
}
