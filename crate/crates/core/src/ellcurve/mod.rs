//! Elliptic curves `y^2 = f(x)` with `f` a monic cubic.
//!
//! The group law and the classical invariants are generic over [`Field`];
//! torsion and point search are specific to Q and live in submodules.

mod roots;
mod search;
mod torsion;

pub use roots::integer_roots_monic_cubic;
pub use search::search_points;
pub use torsion::{torsion_subgroup, TorsionGroup, TorsionStructure};

use crate::poly::Poly;
use crate::scalar::Field;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ECPoint<T> {
    Infinity,
    Affine { x: T, y: T },
}

impl<T: Field> ECPoint<T> {
    pub fn new(x: T, y: T) -> Self {
        ECPoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ECPoint::Infinity)
    }

    pub fn x(&self) -> Option<&T> {
        match self {
            ECPoint::Affine { x, .. } => Some(x),
            ECPoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&T> {
        match self {
            ECPoint::Affine { y, .. } => Some(y),
            ECPoint::Infinity => None,
        }
    }

    /// Affine points with `y = 0`.
    pub fn is_two_torsion(&self) -> bool {
        self.y().is_some_and(|y| y.is_zero())
    }
}

/// `y^2 = x^3 + c2 x^2 + c1 x + c0` with nonzero discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EllipticCurve<T> {
    c: [T; 3],
}

impl<T: Field> EllipticCurve<T> {
    pub fn new(c0: T, c1: T, c2: T) -> Result<Self> {
        let e = EllipticCurve { c: [c0, c1, c2] };
        if e.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(e)
    }

    /// `y^2 = (x - e1)(x - e2)(x - e3)`.
    pub fn from_roots(e1: T, e2: T, e3: T) -> Result<Self> {
        let c2 = -(e1.clone() + e2.clone() + e3.clone());
        let c1 = e1.clone() * e2.clone() + e1.clone() * e3.clone() + e2.clone() * e3.clone();
        let c0 = -(e1 * e2 * e3);
        Self::new(c0, c1, c2)
    }

    pub fn from_cubic(f: &Poly<T>) -> Result<Self> {
        if f.degree() != Some(3) || !f.is_monic() {
            return Err(Error::NotMonicCubic);
        }
        Self::new(f.coeff(0), f.coeff(1), f.coeff(2))
    }

    /// `[c0, c1, c2]`.
    pub fn coeffs(&self) -> &[T; 3] {
        &self.c
    }

    pub fn cubic(&self) -> Poly<T> {
        Poly::new(vec![self.c[0].clone(), self.c[1].clone(), self.c[2].clone(), T::one()])
    }

    pub fn eval_cubic(&self, x: &T) -> T {
        ((x.clone() + self.c[2].clone()) * x.clone() + self.c[1].clone()) * x.clone() + self.c[0].clone()
    }

    /// Discriminant of the cubic `f` (not the `16 disc(f)` of the curve).
    pub fn discriminant(&self) -> T {
        let [c, b, a] = &self.c;
        let n = |k: i64| T::from_i64(k);
        a.clone() * a.clone() * b.clone() * b.clone()
            - n(4) * b.clone() * b.clone() * b.clone()
            - n(4) * a.clone() * a.clone() * a.clone() * c.clone()
            - n(27) * c.clone() * c.clone()
            + n(18) * a.clone() * b.clone() * c.clone()
    }

    /// `(b2, b4, b6, b8)` for `a1 = a3 = 0`.
    pub fn b_invariants(&self) -> (T, T, T, T) {
        let [a6, a4, a2] = self.c.clone();
        let n = |k: i64| T::from_i64(k);
        (
            n(4) * a2.clone(),
            n(2) * a4.clone(),
            n(4) * a6.clone(),
            n(4) * a2 * a6 - a4.clone() * a4,
        )
    }

    pub fn c4(&self) -> T {
        let (b2, b4, _, _) = self.b_invariants();
        b2.clone() * b2 - T::from_i64(24) * b4
    }

    /// Discriminant of the Weierstrass model, `16 disc(f)`.
    pub fn weierstrass_discriminant(&self) -> T {
        let (b2, b4, b6, b8) = self.b_invariants();
        let n = |k: i64| T::from_i64(k);
        -(b2.clone() * b2.clone() * b8) - n(8) * b4.clone() * b4.clone() * b4.clone() - n(27) * b6.clone() * b6.clone()
            + n(9) * b2 * b4 * b6
    }

    pub fn j_invariant(&self) -> T {
        let c4 = self.c4();
        c4.clone() * c4.clone() * c4 / self.weierstrass_discriminant()
    }

    pub fn contains(&self, p: &ECPoint<T>) -> bool {
        match p {
            ECPoint::Infinity => true,
            ECPoint::Affine { x, y } => y.clone() * y.clone() == self.eval_cubic(x),
        }
    }

    fn check(&self, p: &ECPoint<T>) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OffCurve)
        }
    }

    pub fn neg(&self, p: &ECPoint<T>) -> ECPoint<T> {
        match p {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine { x, y } => ECPoint::new(x.clone(), -y.clone()),
        }
    }

    /// Chord-and-tangent addition; rejects points off the curve.
    pub fn add(&self, p: &ECPoint<T>, q: &ECPoint<T>) -> Result<ECPoint<T>> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    /// Addition without the membership check, for inputs already known to
    /// lie on the curve (or for approximate scalars).
    pub fn add_unchecked(&self, p: &ECPoint<T>, q: &ECPoint<T>) -> ECPoint<T> {
        let (x1, y1, x2, y2) = match (p, q) {
            (ECPoint::Infinity, _) => return q.clone(),
            (_, ECPoint::Infinity) => return p.clone(),
            (ECPoint::Affine { x: x1, y: y1 }, ECPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if (y1.clone() + y2.clone()).is_zero() {
                return ECPoint::Infinity;
            }
            let n = |k: i64| T::from_i64(k);
            (n(3) * x1.clone() * x1.clone() + n(2) * self.c[2].clone() * x1.clone() + self.c[1].clone())
                / (n(2) * y1.clone())
        } else {
            (y2.clone() - y1.clone()) / (x2.clone() - x1.clone())
        };
        let x3 = slope.clone() * slope.clone() - self.c[2].clone() - x1.clone() - x2.clone();
        let y3 = slope * (x1.clone() - x3.clone()) - y1.clone();
        ECPoint::new(x3, y3)
    }

    pub fn sub(&self, p: &ECPoint<T>, q: &ECPoint<T>) -> Result<ECPoint<T>> {
        self.add(p, &self.neg(q))
    }

    pub fn double(&self, p: &ECPoint<T>) -> Result<ECPoint<T>> {
        self.add(p, p)
    }

    /// `n * p` by double-and-add; negative `n` uses `-p`.
    pub fn mul(&self, p: &ECPoint<T>, n: i64) -> Result<ECPoint<T>> {
        self.check(p)?;
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = ECPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            k >>= 1;
        }
        Ok(acc)
    }
}
