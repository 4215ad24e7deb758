use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn eval(a: &BigInt, b: &BigInt, c: &BigInt, x: &BigInt) -> BigInt {
    ((x + a) * x + b) * x + c
}

/// Integer roots of `x^3 + a x^2 + b x + c`, ascending and without repeats.
///
/// The real line is cut at integer windows around the critical points; on the
/// pieces between them the cubic is strictly monotone on integers, so each
/// piece is bisected exactly.
pub fn integer_roots_monic_cubic(a: &BigInt, b: &BigInt, c: &BigInt) -> Vec<BigInt> {
    let bound = BigInt::one() + a.abs().max(b.abs()).max(c.abs());
    let lo = -bound.clone();
    let hi = bound;

    // critical points are (-a ± sqrt(a^2 - 3b)) / 3
    let d = a * a - BigInt::from(3) * b;
    let mut windows: Vec<(BigInt, BigInt)> = Vec::new();
    if !d.is_negative() {
        let s = d.sqrt();
        let three = BigInt::from(3);
        // sqrt(d) lies in [s, s + 1]
        let lo1 = (-a - &s - 1i32).div_floor(&three) - 1;
        let hi1 = (-a - &s).div_ceil(&three) + 1;
        let lo2 = (-a + &s).div_floor(&three) - 1;
        let hi2 = (-a + &s + 1i32).div_ceil(&three) + 1;
        windows.push((lo1, hi1));
        windows.push((lo2, hi2));
    }

    let mut roots = Vec::new();
    let mut start = lo;
    for (wlo, whi) in windows {
        let wlo = wlo.max(start.clone());
        if wlo > whi {
            continue;
        }
        if start < wlo {
            bisect(a, b, c, &start, &(&wlo - 1), &mut roots);
        }
        let mut x = wlo.clone();
        while x <= whi {
            if eval(a, b, c, &x).is_zero() {
                roots.push(x.clone());
            }
            x += 1;
        }
        start = whi + 1;
    }
    if start <= hi {
        bisect(a, b, c, &start, &hi, &mut roots);
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Finds an integer root in `[lo, hi]` where the cubic is monotone.
fn bisect(a: &BigInt, b: &BigInt, c: &BigInt, lo: &BigInt, hi: &BigInt, out: &mut Vec<BigInt>) {
    let flo = eval(a, b, c, lo);
    let fhi = eval(a, b, c, hi);
    if flo.is_zero() {
        out.push(lo.clone());
        return;
    }
    if fhi.is_zero() {
        out.push(hi.clone());
        return;
    }
    if flo.signum() == fhi.signum() {
        return;
    }
    let increasing = flo.is_negative();
    let (mut l, mut h) = (lo.clone(), hi.clone());
    while &h - &l > BigInt::one() {
        let m: BigInt = (&l + &h).div_floor(&BigInt::from(2));
        let fm = eval(a, b, c, &m);
        if fm.is_zero() {
            out.push(m);
            return;
        }
        if fm.is_negative() == increasing {
            l = m;
        } else {
            h = m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn roots(a: i64, b: i64, c: i64) -> Vec<i64> {
        integer_roots_monic_cubic(&a.into(), &b.into(), &c.into())
            .into_iter()
            .map(|r| i64::try_from(r).unwrap())
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(roots(0, -1, 0), vec![-1, 0, 1]);
        assert_eq!(roots(5, 6, 0), vec![-3, -2, 0]);
        assert!(roots(5, 6, 1).is_empty());
        assert_eq!(roots(-3, 3, -1), vec![1]);
        assert_eq!(roots(0, 0, 0), vec![0]);
    }

    proptest! {
        #[test]
        fn recovers_planted_roots(r1 in -300i64..300, r2 in -300i64..300, r3 in -300i64..300) {
            let a = -(r1 + r2 + r3);
            let b = r1 * r2 + r1 * r3 + r2 * r3;
            let c = -(r1 * r2 * r3);
            let mut expect = vec![r1, r2, r3];
            expect.sort();
            expect.dedup();
            prop_assert_eq!(roots(a, b, c), expect);
        }

        #[test]
        fn matches_brute_force(a in -40i64..40, b in -40i64..40, c in -40i64..40) {
            let bound = 1 + a.abs().max(b.abs()).max(c.abs());
            let expect: Vec<i64> = (-bound..=bound).filter(|x| ((x + a) * x + b) * x + c == 0).collect();
            prop_assert_eq!(roots(a, b, c), expect);
        }
    }
}
