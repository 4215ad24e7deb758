//! Deciding squareness in `L`.
//!
//! Non-squares are certified by reduction at a prime `p` and a root `r` of a
//! component mod `p` where the element becomes a quadratic non-residue.
//! Squares are certified by an explicit square root, recovered by lifting
//! square roots at the roots of a split prime and rational reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{AlgebraElement, CubicEtaleAlgebra};
use crate::arith::modular::{euler_criterion, mod_inv, rat_mod, rat_mod_u64, rational_reconstruct, sqrt_mod_prime};
use crate::arith::primes::{first_odd_primes, is_prime_u64};
use crate::arith::rational_sqrt;
use crate::{Error, RatPoly, Rational, Result};

pub const DEFAULT_SQUARE_PRIMES: usize = 200;

/// Search bounds for [`is_square`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SquareEffort {
    /// How many odd primes, in increasing order, to scan for a certificate
    /// (and for a split prime to lift from).
    pub primes: usize,
    /// Largest modulus, in bits, used for square-root reconstruction.
    pub max_lift_bits: u64,
}

impl Default for SquareEffort {
    fn default() -> Self {
        SquareEffort {
            primes: DEFAULT_SQUARE_PRIMES,
            max_lift_bits: 4096,
        }
    }
}

impl SquareEffort {
    pub fn with_primes(primes: usize) -> Self {
        SquareEffort {
            primes,
            ..Default::default()
        }
    }
}

/// Proof that an element is not a square: at the odd prime `p`, the
/// component `component` has the root `root` mod `p`, and the element's
/// residue there is `value`, a non-residue.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NonSquareCertificate {
    pub p: u64,
    pub component: usize,
    pub root: u64,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquareDecision {
    /// `witness^2 == element` exactly.
    Square(AlgebraElement),
    NonSquare(NonSquareCertificate),
    /// Neither search succeeded within its bounds.
    Unknown,
}

impl SquareDecision {
    pub fn is_square(&self) -> bool {
        matches!(self, SquareDecision::Square(_))
    }
}

fn poly_mod_p(p: &RatPoly, m: u64) -> Option<Vec<u64>> {
    p.coeffs().iter().map(|c| rat_mod_u64(c, m)).collect()
}

fn eval_mod(coeffs: &[u64], x: u64, p: u64) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0u128, |acc, &c| (acc * x as u128 + c as u128) % p as u128) as u64
}

fn divides(p: u64, q: &Rational) -> bool {
    let pb = BigInt::from(p);
    let hits = |n: &BigInt| !n.is_zero() && (n % &pb).is_zero();
    hits(q.numer()) || hits(q.denom())
}

/// Whether reduction at `p` is usable for `a`: `p` odd, prime to the
/// discriminant of `f`, to the denominators of `f`, and to every nonzero
/// numerator and denominator in `a`.
fn admissible(alg: &CubicEtaleAlgebra, a: &AlgebraElement, p: u64) -> bool {
    if p < 3 || !is_prime_u64(p) {
        return false;
    }
    if divides(p, &alg.discriminant()) {
        return false;
    }
    let pb = BigInt::from(p);
    if alg.f().coeffs().iter().any(|c| (c.denom() % &pb).is_zero()) {
        return false;
    }
    !a.parts().iter().flat_map(|q| q.coeffs()).any(|c| divides(p, c))
}

fn roots_mod_p(coeffs: &[u64], p: u64) -> Vec<u64> {
    (0..p).filter(|&r| eval_mod(coeffs, r, p) == 0).collect()
}

impl NonSquareCertificate {
    /// Re-checks every condition the certificate relies on.
    pub fn validate(&self, alg: &CubicEtaleAlgebra, a: &AlgebraElement) -> bool {
        let p = self.p;
        if alg.check_shape(a).is_err() || self.component >= alg.components().len() {
            return false;
        }
        if !admissible(alg, a, p) || self.root >= p || self.value >= p {
            return false;
        }
        let (Some(m), Some(e)) = (
            poly_mod_p(&alg.components()[self.component], p),
            poly_mod_p(&a.parts()[self.component], p),
        ) else {
            return false;
        };
        eval_mod(&m, self.root, p) == 0
            && eval_mod(&e, self.root, p) == self.value
            && self.value != 0
            && euler_criterion(self.value, p) == p - 1
    }
}

/// Scans primes in increasing order; the first certifying prime wins, ties
/// broken by component index and then by the smallest root.
fn find_certificate(
    alg: &CubicEtaleAlgebra,
    a: &AlgebraElement,
    effort: &SquareEffort,
) -> Option<NonSquareCertificate> {
    for p in first_odd_primes(effort.primes) {
        if !admissible(alg, a, p) {
            continue;
        }
        for (ci, (m, part)) in alg.components().iter().zip(a.parts()).enumerate() {
            let (Some(mp), Some(ep)) = (poly_mod_p(m, p), poly_mod_p(part, p)) else {
                continue;
            };
            for root in roots_mod_p(&mp, p) {
                let value = eval_mod(&ep, root, p);
                if value != 0 && euler_criterion(value, p) == p - 1 {
                    return Some(NonSquareCertificate {
                        p,
                        component: ci,
                        root,
                        value,
                    });
                }
            }
        }
    }
    None
}

/// Decides whether `a` is a square in `L`.
pub fn is_square(alg: &CubicEtaleAlgebra, a: &AlgebraElement, effort: &SquareEffort) -> Result<SquareDecision> {
    alg.check_shape(a)?;
    if !alg.is_unit(a) {
        return Err(Error::NonUnit);
    }
    if let Some(cert) = find_certificate(alg, a, effort) {
        return Ok(SquareDecision::NonSquare(cert));
    }
    let mut roots = Vec::with_capacity(a.parts().len());
    for (m, part) in alg.components().iter().zip(a.parts()) {
        let r = if m.degree() == Some(1) {
            rational_sqrt(&part.coeff(0)).map(RatPoly::constant)
        } else {
            lift_sqrt(m, part, alg, a, effort)
        };
        match r {
            Some(r) => roots.push(r),
            None => return Ok(SquareDecision::Unknown),
        }
    }
    let witness = AlgebraElement::from_parts(roots);
    debug_assert_eq!(alg.mul(&witness, &witness), *a);
    Ok(SquareDecision::Square(witness))
}

/// Polynomials mod `n`, low degree first.
fn pmul(a: &[BigInt], b: &[BigInt], n: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (&out[i + j] + x * y).mod_floor(n);
        }
    }
    out
}

fn peval(c: &[BigInt], x: &BigInt, n: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, k| (acc * x + k).mod_floor(n))
}

/// Newton iteration for a simple root `r` of `g` mod `n = p^k`.
fn hensel_root(g: &[BigInt], dg: &[BigInt], r: u64, n: &BigInt, k: u32) -> Option<BigInt> {
    let mut x = BigInt::from(r);
    let steps = 32 - k.leading_zeros() + 1;
    for _ in 0..steps {
        let inv = mod_inv(&peval(dg, &x, n), n)?;
        x = (&x - peval(g, &x, n) * inv).mod_floor(n);
    }
    peval(g, &x, n).is_zero().then_some(x)
}

/// Square root of `part` in `Q[x]/(m)`, `deg m >= 2`, or `None`.
fn lift_sqrt(
    m: &RatPoly,
    part: &RatPoly,
    alg: &CubicEtaleAlgebra,
    a: &AlgebraElement,
    effort: &SquareEffort,
) -> Option<RatPoly> {
    let d = m.degree()?;
    // first admissible prime where m splits and part is a square at every root
    let (p, roots, sqrts) = first_odd_primes(effort.primes).into_iter().find_map(|p| {
        if !admissible(alg, a, p) {
            return None;
        }
        let mp = poly_mod_p(m, p)?;
        let ep = poly_mod_p(part, p)?;
        let roots = roots_mod_p(&mp, p);
        if roots.len() != d {
            return None;
        }
        let sqrts: Option<Vec<u64>> = roots
            .iter()
            .map(|&r| {
                let v = eval_mod(&ep, r, p);
                if v == 0 {
                    None
                } else {
                    sqrt_mod_prime(v, p)
                }
            })
            .collect();
        Some((p, roots, sqrts?))
    })?;

    let pb = BigInt::from(p);
    let bits_per = (p as f64).log2();
    let mut k = ((64.0 / bits_per).ceil() as u32).max(1);
    loop {
        let n = pb.pow(k);
        let mc: Vec<BigInt> = m.coeffs().iter().map(|c| rat_mod(c, &n)).collect::<Option<_>>()?;
        let dmc: Vec<BigInt> = m
            .derivative()
            .coeffs()
            .iter()
            .map(|c| rat_mod(c, &n))
            .collect::<Option<_>>()?;
        let ac: Vec<BigInt> = part.coeffs().iter().map(|c| rat_mod(c, &n)).collect::<Option<_>>()?;

        let lifted_roots: Vec<BigInt> = roots
            .iter()
            .map(|&r| hensel_root(&mc, &dmc, r, &n, k))
            .collect::<Option<_>>()?;
        let lifted_sqrts: Vec<BigInt> = lifted_roots
            .iter()
            .zip(&sqrts)
            .map(|(r, &s)| {
                let target = peval(&ac, r, &n);
                // s^2 - target
                let g = [(-&target).mod_floor(&n), BigInt::zero(), BigInt::one()];
                let dg = [BigInt::zero(), BigInt::from(2)];
                hensel_root(&g, &dg, s, &n, k)
            })
            .collect::<Option<_>>()?;

        // Lagrange basis polynomials mod n
        let basis: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                let mut acc = vec![BigInt::one()];
                let mut denom = BigInt::one();
                for j in 0..d {
                    if i != j {
                        acc = pmul(&acc, &[(-&lifted_roots[j]).mod_floor(&n), BigInt::one()], &n);
                        denom = (denom * (&lifted_roots[i] - &lifted_roots[j])).mod_floor(&n);
                    }
                }
                let inv = mod_inv(&denom, &n).expect("roots distinct mod p");
                acc.iter().map(|c| (c * &inv).mod_floor(&n)).collect()
            })
            .collect();

        // fix the sign at the first root; the overall sign is free
        for mask in 0..(1u32 << (d - 1)) {
            let mut coeffs = vec![BigInt::zero(); d];
            for i in 0..d {
                let s = if i > 0 && mask >> (i - 1) & 1 == 1 {
                    (-&lifted_sqrts[i]).mod_floor(&n)
                } else {
                    lifted_sqrts[i].clone()
                };
                for (c, b) in coeffs.iter_mut().zip(&basis[i]) {
                    *c = (&*c + &s * b).mod_floor(&n);
                }
            }
            let cand: Option<Vec<Rational>> = coeffs.iter().map(|c| rational_reconstruct(c, &n)).collect();
            if let Some(cand) = cand {
                let b = RatPoly::new(cand);
                if (&b * &b).rem(m) == *part {
                    return Some(b);
                }
            }
        }
        if n.bits() > effort.max_lift_bits {
            return None;
        }
        k *= 2;
    }
}

/// A class in `L*/L*^2`, held by a unit representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraSquareClass {
    pub representative: AlgebraElement,
}

impl AlgebraSquareClass {
    pub fn new(alg: &CubicEtaleAlgebra, representative: AlgebraElement) -> Result<Self> {
        alg.check_shape(&representative)?;
        if !alg.is_unit(&representative) {
            return Err(Error::NonUnit);
        }
        Ok(AlgebraSquareClass { representative })
    }

    pub fn trivial(alg: &CubicEtaleAlgebra) -> Self {
        AlgebraSquareClass {
            representative: alg.one(),
        }
    }

    pub fn mul(&self, alg: &CubicEtaleAlgebra, other: &Self) -> Self {
        AlgebraSquareClass {
            representative: alg.mul(&self.representative, &other.representative),
        }
    }

    /// Whether the class has square norm.
    pub fn in_norm_kernel(&self, alg: &CubicEtaleAlgebra) -> bool {
        alg.in_norm_kernel(&self.representative).unwrap_or(false)
    }

    pub fn is_trivial(&self, alg: &CubicEtaleAlgebra, effort: &SquareEffort) -> Result<SquareDecision> {
        is_square(alg, &self.representative, effort)
    }

    /// Equality of classes: the product of the representatives is a square.
    pub fn same_class(&self, alg: &CubicEtaleAlgebra, other: &Self, effort: &SquareEffort) -> Result<SquareDecision> {
        self.mul(alg, other).is_trivial(alg, effort)
    }
}
