//! Gluing data `(E, F, psi)` and checks on genus-2 covers.
//!
//! `psi: E[2] -> F[2]` is stored as a polynomial `h` of degree at most 2
//! with `psi(a, 0) = (h(a), 0)`. Rational coefficients are exactly Galois
//! equivariance. `psi` comes from a geometric isomorphism `E -> F` iff `h`
//! reduced mod `f` is affine, since such isomorphisms act on `x` by
//! `x -> u^2 x + r`.
//!
//! The Jacobian of the glued curve is `(E x F) / graph(psi)`. It is never
//! built; its rational image in `E x F` is reached through the descent
//! criterion in [`crate::descent`].

use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::etale::{determinant, CubicEtaleAlgebra};
use crate::{Curve, Error, RatPoly, Rational, Result};

/// The degree `< n` polynomial through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> RatPoly {
    assert_eq!(xs.len(), ys.len());
    let mut out = RatPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut term = RatPoly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                let lin = RatPoly::new(vec![-xj.clone(), Rational::from_integer(1.into())]);
                term = (&term * &lin).scale(&(Rational::from_integer(1.into()) / (xi - xj)));
            }
        }
        out = &out + &term;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTorsionIdentification {
    h: RatPoly,
}

impl TwoTorsionIdentification {
    pub fn new(h: RatPoly) -> Result<Self> {
        if h.degree().unwrap_or(0) > 2 {
            return Err(Error::InvalidIdentification("h must have degree at most 2".into()));
        }
        Ok(TwoTorsionIdentification { h })
    }

    /// Split case: the identification sending `e_roots[i]` to `f_roots[i]`.
    pub fn from_matching(e_roots: &[Rational; 3], f_roots: &[Rational; 3]) -> Self {
        TwoTorsionIdentification {
            h: interpolate(e_roots, f_roots),
        }
    }

    pub fn h(&self) -> &RatPoly {
        &self.h
    }
}

/// One failed check on a proposed identification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    /// `g(h(x))` is not divisible by `f`.
    NotRootMap,
    /// `h` does not separate the roots of `f`.
    NotBijective,
    /// `psi` is the restriction of an isomorphism `E -> F`.
    GeometricRestriction,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::NotRootMap => "h does not send roots of f to roots of g",
            Violation::NotBijective => "h is not injective on the roots of f",
            Violation::GeometricRestriction => "psi is the restriction of a geometric isomorphism",
        })
    }
}

fn reduced_h(e: &Curve, psi: &TwoTorsionIdentification) -> RatPoly {
    psi.h.rem(&e.cubic())
}

/// `1, h, h^2` reduced mod `f` form a basis of `Q[x]/(f)`.
fn separates_roots(e: &Curve, psi: &TwoTorsionIdentification) -> bool {
    let f = e.cubic();
    let mut cols = Vec::with_capacity(3);
    let mut pw = RatPoly::one();
    for _ in 0..3 {
        let r = pw.rem(&f);
        cols.push((0..3).map(|i| r.coeff(i)).collect());
        pw = (&pw * &psi.h).rem(&f);
    }
    !num_traits::Zero::is_zero(&determinant(cols))
}

/// True iff `h mod f` has degree at most one.
pub fn is_geometric_restriction(e: &Curve, _f: &Curve, psi: &TwoTorsionIdentification) -> bool {
    reduced_h(e, psi).degree().unwrap_or(0) <= 1
}

/// Every failed check, in the order root map, bijectivity, non-geometric.
/// An empty list means the data is valid.
pub fn validate_identification(e: &Curve, f: &Curve, psi: &TwoTorsionIdentification) -> Vec<Violation> {
    let mut out = Vec::new();
    if !f.cubic().compose(&psi.h).rem(&e.cubic()).is_zero() {
        out.push(Violation::NotRootMap);
    }
    if !separates_roots(e, psi) {
        out.push(Violation::NotBijective);
    }
    if is_geometric_restriction(e, f, psi) {
        out.push(Violation::GeometricRestriction);
    }
    out
}

/// Validated `(E, F, psi)` with the algebras `L = Q[x]/(f)` and
/// `L' = Q[x]/(g)`.
#[derive(Clone, Debug)]
pub struct GluingData {
    pub e: Curve,
    pub f: Curve,
    pub psi: TwoTorsionIdentification,
    pub l: CubicEtaleAlgebra,
    pub l_prime: CubicEtaleAlgebra,
}

impl GluingData {
    pub fn new(e: Curve, f: Curve, h: RatPoly) -> Result<Self> {
        let psi = TwoTorsionIdentification::new(h)?;
        let l = CubicEtaleAlgebra::new(&e.cubic())?;
        let l_prime = CubicEtaleAlgebra::new(&f.cubic())?;
        Self::assemble(e, f, psi, l, l_prime)
    }

    /// Split case with matched indexing: `P_i = (e_roots[i], 0)` goes to
    /// `Q_i = (f_roots[i], 0)`, and both algebras list components in that
    /// order, so `psi*` is the identity on triples.
    pub fn split_matching(e_roots: [Rational; 3], f_roots: [Rational; 3]) -> Result<Self> {
        let e = Curve::from_roots(e_roots[0].clone(), e_roots[1].clone(), e_roots[2].clone())?;
        let f = Curve::from_roots(f_roots[0].clone(), f_roots[1].clone(), f_roots[2].clone())?;
        let psi = TwoTorsionIdentification::from_matching(&e_roots, &f_roots);
        let l = CubicEtaleAlgebra::split(e_roots)?;
        let l_prime = CubicEtaleAlgebra::split(f_roots)?;
        Self::assemble(e, f, psi, l, l_prime)
    }

    fn assemble(
        e: Curve,
        f: Curve,
        psi: TwoTorsionIdentification,
        l: CubicEtaleAlgebra,
        l_prime: CubicEtaleAlgebra,
    ) -> Result<Self> {
        let violations = validate_identification(&e, &f, &psi);
        if !violations.is_empty() {
            let msg: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidIdentification(msg.join("; ")));
        }
        Ok(GluingData { e, f, psi, l, l_prime })
    }

    pub fn is_split(&self) -> bool {
        self.l.is_split()
    }
}

/// `y^2 = h6(x)` with `h6` squarefree of degree 5 or 6.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusTwoCurve {
    #[serde(rename = "h", with = "crate::json::poly_coeffs")]
    h6: RatPoly,
}

impl GenusTwoCurve {
    pub fn new(h6: RatPoly) -> Result<Self> {
        if !matches!(h6.degree(), Some(5 | 6)) {
            return Err(Error::InvalidParams("genus-2 model needs degree 5 or 6".into()));
        }
        if !h6.is_squarefree() {
            return Err(Error::InvalidParams("genus-2 model must be squarefree".into()));
        }
        Ok(GenusTwoCurve { h6 })
    }

    pub fn h6(&self) -> &RatPoly {
        &self.h6
    }
}

/// `num / den` with rational polynomial numerator and denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunction {
    #[serde(with = "crate::json::poly_coeffs")]
    pub num: RatPoly,
    #[serde(with = "crate::json::poly_coeffs")]
    pub den: RatPoly,
}

impl RationalFunction {
    pub fn new(num: RatPoly, den: RatPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidParams("zero denominator".into()));
        }
        Ok(RationalFunction { num, den })
    }

    pub fn poly(p: RatPoly) -> Self {
        RationalFunction {
            num: p,
            den: RatPoly::one(),
        }
    }
}

/// A map `(x, y) -> (u(x), y v(x))` from a genus-2 curve to an elliptic curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverMap {
    pub u: RationalFunction,
    pub v: RationalFunction,
}

/// Checks `f(u(x)) = h6(x) v(x)^2` as rational functions, i.e. with
/// `u = N/D`, `v = V/W`:
/// `(N^3 + c2 N^2 D + c1 N D^2 + c0 D^3) W^2 = h6 V^2 D^3`.
pub fn verify_cover_map(c: &GenusTwoCurve, target: &Curve, u: &RationalFunction, v: &RationalFunction) -> bool {
    if u.den.is_zero() || v.den.is_zero() {
        return false;
    }
    let [c0, c1, c2] = target.coeffs();
    let (n, d) = (&u.num, &u.den);
    let n2 = n * n;
    let d2 = d * d;
    let lhs_num = &(&(&(&n2 * n) + &(&n2 * d).scale(c2)) + &(n * &d2).scale(c1)) + &(&d2 * d).scale(c0);
    let lhs = &lhs_num * &(&v.den * &v.den);
    let rhs = &(&c.h6 * &(&v.num * &v.num)) * &(&d2 * d);
    lhs == rhs
}

/// `C1: y^2 = h1` and `C2: y^2 = h2` with `h1 = c^2 h2`, related by `y -> c y`.
pub fn verify_rescaling(c1: &GenusTwoCurve, c2: &GenusTwoCurve, c: &Rational) -> bool {
    !num_traits::Zero::is_zero(c) && c1.h6 == c2.h6.scale(&(c * c))
}

#[derive(Serialize, Deserialize)]
struct GluingJson {
    #[serde(rename = "E")]
    e: Curve,
    #[serde(rename = "F")]
    f: Curve,
    #[serde(with = "crate::json::rational_vec")]
    h: Vec<Rational>,
}

impl Serialize for GluingData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let h = (0..3).map(|i| self.psi.h.coeff(i)).collect();
        GluingJson {
            e: self.e.clone(),
            f: self.f.clone(),
            h,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GluingData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GluingJson::deserialize(d)?;
        GluingData::new(raw.e, raw.f, RatPoly::new(raw.h)).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn f196() -> Curve {
        Curve::new(rat(1), rat(6), rat(5)).unwrap()
    }

    fn g784() -> Curve {
        Curve::new(rat(-1), rat(5), rat(-6)).unwrap()
    }

    fn h3() -> TwoTorsionIdentification {
        TwoTorsionIdentification::new(RatPoly::from_i64s(&[6, 5, 1])).unwrap()
    }

    #[test]
    fn cyclic_identification_is_valid() {
        assert!(validate_identification(&f196(), &g784(), &h3()).is_empty());
        assert!(!is_geometric_restriction(&f196(), &g784(), &h3()));
    }

    #[test]
    fn identity_on_same_curve_is_geometric() {
        let id = TwoTorsionIdentification::new(RatPoly::x()).unwrap();
        assert!(is_geometric_restriction(&f196(), &f196(), &id));
        assert_eq!(
            validate_identification(&f196(), &f196(), &id),
            vec![Violation::GeometricRestriction]
        );
        assert!(GluingData::new(f196(), f196(), RatPoly::x()).is_err());
    }

    #[test]
    fn wrong_target_and_collapsing_maps() {
        let v = validate_identification(&f196(), &f196(), &h3());
        assert!(v.contains(&Violation::NotRootMap));
        let constant = TwoTorsionIdentification::new(RatPoly::constant(rat(1))).unwrap();
        let v = validate_identification(&f196(), &g784(), &constant);
        assert!(v.contains(&Violation::NotBijective));
    }

    #[test]
    fn split_matching_for_e_p() {
        let p = 229;
        let e_roots = [rat(0), rat(-p - 1), rat(p - 1)];
        let f_roots = [rat(0), rat(1), rat(-1)];
        let psi = TwoTorsionIdentification::from_matching(&e_roots, &f_roots);
        // an affine map fits 0 -> 0, -p-1 -> 1 but then sends p-1 to (1-p)/(p+1) != -1
        let slope = ratio(1, -p - 1);
        assert_ne!(slope * rat(p - 1), rat(-1));
        let e = Curve::from_roots(e_roots[0].clone(), e_roots[1].clone(), e_roots[2].clone()).unwrap();
        let f = Curve::from_roots(rat(0), rat(1), rat(-1)).unwrap();
        assert!(!is_geometric_restriction(&e, &f, &psi));
        assert!(GluingData::split_matching(e_roots, f_roots).is_ok());
    }

    #[test]
    fn affine_matching_is_rejected() {
        // roots 0, 1, 2 and 0, 2, 4: x -> 2x is an isomorphism-induced map
        let r = GluingData::split_matching([rat(0), rat(1), rat(2)], [rat(0), rat(2), rat(4)]);
        assert!(r.is_err());
    }

    fn c_model() -> GenusTwoCurve {
        GenusTwoCurve::new(RatPoly::from_i64s(&[-1, 0, 5, 0, -6, 0, 1])).unwrap()
    }

    #[test]
    fn cover_maps() {
        let c = c_model();
        let x2 = RatPoly::from_i64s(&[0, 0, 1]);
        let x3 = RatPoly::from_i64s(&[0, 0, 0, 1]);
        let phi_u = RationalFunction::new(RatPoly::constant(rat(-1)), x2.clone()).unwrap();
        let phi_v = RationalFunction::new(RatPoly::one(), x3).unwrap();
        assert!(verify_cover_map(&c, &f196(), &phi_u, &phi_v));
        let psi_u = RationalFunction::poly(x2);
        let psi_v = RationalFunction::poly(RatPoly::one());
        assert!(verify_cover_map(&c, &g784(), &psi_u, &psi_v));
        assert!(!verify_cover_map(&c, &f196(), &psi_u, &psi_v));
        // sign of v does not matter
        let neg_v = RationalFunction::poly(RatPoly::constant(rat(-1)));
        assert!(verify_cover_map(&c, &g784(), &psi_u, &neg_v));
    }

    #[test]
    fn rescaling() {
        let g_x2 = g784().cubic().compose(&RatPoly::from_i64s(&[0, 0, 1]));
        let seven8 = rat(7).pow(8);
        let c1 = GenusTwoCurve::new(g_x2.scale(&seven8)).unwrap();
        assert!(verify_rescaling(&c1, &c_model(), &rat(7).pow(4)));
        assert!(verify_rescaling(&c_model(), &c_model(), &rat(1)));
        assert!(!verify_rescaling(&c_model(), &c_model(), &rat(2)));
    }

    #[test]
    fn genus_two_model_must_be_squarefree() {
        assert!(GenusTwoCurve::new(RatPoly::from_i64s(&[1, 2, 1, 0, 0, 0, 1])).is_ok());
        assert!(GenusTwoCurve::new(RatPoly::from_i64s(&[0, 0, 1, 0, 0, 1])).is_err());
    }

    #[test]
    fn gluing_json() {
        let g = GluingData::new(f196(), g784(), h3().h().clone()).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(
            serde_json::from_str::<serde_json::Value>(&s).unwrap(),
            serde_json::json!({"E": {"f": ["1", "6", "5"]}, "F": {"f": ["-1", "5", "-6"]}, "h": ["6", "5", "1"]})
        );
        let back: GluingData = serde_json::from_str(&s).unwrap();
        assert_eq!(back.psi, g.psi);
        let bad = r#"{"E": {"f": ["1","6","5"]}, "F": {"f": ["1","6","5"]}, "h": ["0","1","0"]}"#;
        assert!(serde_json::from_str::<GluingData>(bad).is_err());
    }
}
