//! Built-in curves, identifications and maps.
//!
//! The cyclic pair
//!
//! ```text
//! E: y^2 = x^3 + 5x^2 + 6x + 1
//! F: y^2 = x^3 - 6x^2 + 5x - 1
//! ```
//!
//! both have discriminant 49 and splitting field the cubic subfield of
//! `Q(zeta_7)`. The roots `beta` of `g` are `-1/alpha` for the roots `alpha`
//! of `f`, and `-1/x = x^2 + 5x + 6` modulo `f`, which gives
//! `psi: (alpha, 0) -> (alpha^2 + 5 alpha + 6, 0)`. The glued curve is
//! `C: y^2 = x^6 - 6x^4 + 5x^2 - 1 = g(x^2)` with covers
//! `(x, y) -> (-1/x^2, y/x^3)` to `E` and `(x, y) -> (x^2, y)` to `F`.

use crate::arith::rat;
use crate::glue::{CoverMap, GenusTwoCurve, GluingData, RationalFunction};
use crate::{Curve, Point, RatPoly, Rational};

pub fn cyclic_e() -> Curve {
    Curve::new(rat(1), rat(6), rat(5)).expect("nonsingular")
}

pub fn cyclic_f() -> Curve {
    Curve::new(rat(-1), rat(5), rat(-6)).expect("nonsingular")
}

/// `h = x^2 + 5x + 6`.
pub fn cyclic_h() -> RatPoly {
    RatPoly::from_i64s(&[6, 5, 1])
}

pub fn cyclic_gluing() -> GluingData {
    GluingData::new(cyclic_e(), cyclic_f(), cyclic_h()).expect("valid gluing")
}

/// `(-2, 1)` on [`cyclic_e`].
pub fn cyclic_point() -> Point {
    Point::new(rat(-2), rat(1))
}

/// `y^2 = x^6 - 6x^4 + 5x^2 - 1`.
pub fn cyclic_genus_two() -> GenusTwoCurve {
    GenusTwoCurve::new(RatPoly::from_i64s(&[-1, 0, 5, 0, -6, 0, 1])).expect("squarefree")
}

/// `y^2 = 7^8 g(x^2)`, the model before rescaling `y`.
pub fn cyclic_genus_two_unscaled() -> GenusTwoCurve {
    GenusTwoCurve::new(cyclic_genus_two().h6().scale(&rat(7i64.pow(8)))).expect("squarefree")
}

/// `7^4`.
pub fn cyclic_rescaling() -> Rational {
    rat(7i64.pow(4))
}

/// `(x, y) -> (-1/x^2, y/x^3)`.
pub fn cover_to_e() -> CoverMap {
    CoverMap {
        u: RationalFunction::new(RatPoly::from_i64s(&[-1]), RatPoly::from_i64s(&[0, 0, 1])).expect("nonzero"),
        v: RationalFunction::new(RatPoly::from_i64s(&[1]), RatPoly::from_i64s(&[0, 0, 0, 1])).expect("nonzero"),
    }
}

/// `(x, y) -> (x^2, y)`.
pub fn cover_to_f() -> CoverMap {
    CoverMap {
        u: RationalFunction::poly(RatPoly::from_i64s(&[0, 0, 1])),
        v: RationalFunction::poly(RatPoly::one()),
    }
}

/// `y^2 = x^3 - x`, rank 0 with torsion `(Z/2)^2`; the default partner for
/// the `E_p` family.
pub fn family_partner() -> Curve {
    Curve::from_roots(rat(-1), rat(0), rat(1)).expect("nonsingular")
}

/// `y^2 = x(x - 1)(x + 3)`.
pub fn family_partner_alt() -> Curve {
    Curve::from_roots(rat(0), rat(1), rat(-3)).expect("nonsingular")
}
