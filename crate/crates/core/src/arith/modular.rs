//! Modular helpers: inverses, Euler's criterion, CRT, rational reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Rational;

pub fn mod_inv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Image of a rational in `Z/mZ`; `None` if the denominator is not invertible.
pub fn rat_mod(q: &Rational, m: &BigInt) -> Option<BigInt> {
    let inv = mod_inv(q.denom(), m)?;
    Some((q.numer() * inv).mod_floor(m))
}

pub fn rat_mod_u64(q: &Rational, p: u64) -> Option<u64> {
    rat_mod(q, &BigInt::from(p)).and_then(|v| v.to_u64())
}

pub fn pow_mod_u64(b: u64, e: u64, m: u64) -> u64 {
    BigInt::from(b)
        .modpow(&BigInt::from(e), &BigInt::from(m))
        .to_u64()
        .expect("reduced mod a u64")
}

/// `a^((p-1)/2) mod p` for an odd prime `p`.
pub fn euler_criterion(a: u64, p: u64) -> u64 {
    pow_mod_u64(a % p, (p - 1) / 2, p)
}

/// True iff `a` is a nonzero quadratic residue mod the odd prime `p`.
pub fn is_qr(a: u64, p: u64) -> bool {
    !a.is_multiple_of(p) && euler_criterion(a, p) == 1
}

/// Tonelli-Shanks square root mod an odd prime.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if !is_qr(a, p) {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while is_qr(z, p) {
        z += 1;
    }
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = pow_mod_u64(z, q, p);
    let mut t = pow_mod_u64(a, q, p);
    let mut r = pow_mod_u64(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulm(t2, t2);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mulm(b, b);
        }
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

/// Solves `x = r1 mod m1`, `x = r2 mod m2` for coprime moduli.
/// Returns the least nonnegative solution and the combined modulus.
pub fn crt(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Option<(BigInt, BigInt)> {
    let inv = mod_inv(m1, m2)?;
    let m = m1 * m2;
    let k = ((r2 - r1) * inv).mod_floor(m2);
    Some(((r1 + m1 * k).mod_floor(&m), m))
}

/// Finds `u/v` with `u = a v mod m` and `|u|, |v| <= sqrt(m/2)`, if one exists.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !t1.gcd(m).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tonelli_shanks_all_residues() {
        for p in [3u64, 5, 13, 17, 41, 97, 113] {
            for a in 1..p {
                match sqrt_mod_prime(a, p) {
                    Some(r) => assert_eq!(r * r % p, a),
                    None => assert!(!is_qr(a, p)),
                }
            }
        }
    }

    #[test]
    fn crt_small() {
        let (r, m) = crt(&4.into(), &9.into(), &4.into(), &25.into()).unwrap();
        assert_eq!((r, m), (BigInt::from(4), BigInt::from(225)));
        let (r, m) = crt(&4.into(), &9.into(), &6.into(), &49.into()).unwrap();
        assert_eq!((r, m), (BigInt::from(202), BigInt::from(441)));
    }

    #[test]
    fn reconstruct() {
        let m = BigInt::from(1_000_003u64).pow(4);
        let q = Rational::new((-355).into(), 113.into());
        let a = rat_mod(&q, &m).unwrap();
        assert_eq!(rational_reconstruct(&a, &m), Some(q));
    }
}
