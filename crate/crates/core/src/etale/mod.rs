//! The cubic étale algebra `L = Q[x]/(f)`.
//!
//! `L` is stored as the product of the fields `Q[x]/(m)` over the monic
//! irreducible factors `m` of `f`; an element is one residue polynomial per
//! factor. The distinguished element `X` has residue `x` everywhere.

mod square;

pub use square::{
    is_square, AlgebraSquareClass, NonSquareCertificate, SquareDecision, SquareEffort, DEFAULT_SQUARE_PRIMES,
};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::is_rational_square;
use crate::ellcurve::integer_roots_monic_cubic;
use crate::{Error, RatPoly, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicEtaleAlgebra {
    f: RatPoly,
    components: Vec<RatPoly>,
}

/// An element of `L`, one residue per component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraElement {
    #[serde(with = "parts_json")]
    parts: Vec<RatPoly>,
}

mod parts_json {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(parts: &[RatPoly], s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = parts
            .iter()
            .map(|p| p.coeffs().iter().map(crate::json::format_rational).collect())
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<RatPoly>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|cs| {
                cs.iter()
                    .map(|c| crate::json::parse_rational(c))
                    .collect::<Result<Vec<_>>>()
                    .map(RatPoly::new)
            })
            .collect::<Result<_>>()
            .map_err(serde::de::Error::custom)
    }
}

impl AlgebraElement {
    pub fn parts(&self) -> &[RatPoly] {
        &self.parts
    }

    /// Value of a degree-1 component as a rational.
    pub fn rational_part(&self, i: usize) -> Rational {
        self.parts[i].coeff(0)
    }

    pub fn from_parts(parts: Vec<RatPoly>) -> Self {
        AlgebraElement { parts }
    }
}

/// Rational roots of a monic rational cubic, ascending.
pub fn rational_roots_of_cubic(f: &RatPoly) -> Vec<Rational> {
    // x = X/u turns f into a monic integer cubic in X
    let u = (0..3).fold(BigInt::one(), |acc, i| {
        num_integer::Integer::lcm(&acc, f.coeff(i).denom())
    });
    let ur = Rational::from_integer(u.clone());
    let a = (f.coeff(2) * &ur).to_integer();
    let b = (f.coeff(1) * &ur * &ur).to_integer();
    let c = (f.coeff(0) * &ur * &ur * &ur).to_integer();
    integer_roots_monic_cubic(&a, &b, &c)
        .into_iter()
        .map(|r| Rational::new(r, u.clone()))
        .collect()
}

impl CubicEtaleAlgebra {
    /// Factors `f` (monic, squarefree cubic) into irreducibles: rational
    /// roots first in ascending order, then the remaining factor if any.
    pub fn new(f: &RatPoly) -> Result<Self> {
        if f.degree() != Some(3) || !f.is_monic() {
            return Err(Error::NotMonicCubic);
        }
        if !f.is_squarefree() {
            return Err(Error::SingularCurve);
        }
        let roots = rational_roots_of_cubic(f);
        let mut components: Vec<RatPoly> = roots.iter().map(linear).collect();
        match roots.len() {
            0 => components.push(f.clone()),
            1 => {
                let (q, r) = f.div_rem(&components[0]);
                debug_assert!(r.is_zero());
                // no second rational root, so the quadratic is irreducible
                debug_assert!(!is_rational_square(
                    &(q.coeff(1) * q.coeff(1) - q.coeff(0) * Rational::from_integer(4.into()))
                ));
                components.push(q);
            }
            _ => {}
        }
        Ok(CubicEtaleAlgebra {
            f: f.clone(),
            components,
        })
    }

    /// The split algebra `Q^3` with components ordered as the given roots.
    pub fn split(roots: [Rational; 3]) -> Result<Self> {
        if roots[0] == roots[1] || roots[0] == roots[2] || roots[1] == roots[2] {
            return Err(Error::SingularCurve);
        }
        let components: Vec<RatPoly> = roots.iter().map(linear).collect();
        let f = components.iter().fold(RatPoly::one(), |acc, c| &acc * c);
        Ok(CubicEtaleAlgebra { f, components })
    }

    /// Rebuilds an algebra from its list of monic irreducible components,
    /// keeping the given order.
    pub fn from_components(components: Vec<RatPoly>) -> Result<Self> {
        let f = components.iter().fold(RatPoly::one(), |acc, c| &acc * c);
        let rebuilt = CubicEtaleAlgebra::new(&f)?;
        let key = |p: &&RatPoly| format!("{p:?}");
        let mut want: Vec<&RatPoly> = components.iter().collect();
        let mut have: Vec<&RatPoly> = rebuilt.components.iter().collect();
        want.sort_by_key(key);
        have.sort_by_key(key);
        if want != have {
            return Err(Error::ShapeMismatch);
        }
        Ok(CubicEtaleAlgebra { f, components })
    }

    pub fn f(&self) -> &RatPoly {
        &self.f
    }

    pub fn components(&self) -> &[RatPoly] {
        &self.components
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.degree().unwrap()).collect()
    }

    pub fn is_split(&self) -> bool {
        self.components.len() == 3
    }

    /// Root of a degree-1 component.
    pub fn component_root(&self, i: usize) -> Option<Rational> {
        let c = &self.components[i];
        (c.degree() == Some(1)).then(|| -c.coeff(0))
    }

    /// Index of the degree-1 component `x - e`, if `e` is a root of `f`.
    pub fn component_of_root(&self, e: &Rational) -> Option<usize> {
        (0..self.components.len()).find(|&i| self.component_root(i).as_ref() == Some(e))
    }

    pub fn discriminant(&self) -> Rational {
        crate::Curve::from_cubic(&self.f)
            .map(|e| e.discriminant())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Image of a polynomial under `Q[x] -> L`.
    pub fn element(&self, p: &RatPoly) -> AlgebraElement {
        AlgebraElement {
            parts: self.components.iter().map(|m| p.rem(m)).collect(),
        }
    }

    pub fn constant(&self, c: Rational) -> AlgebraElement {
        self.element(&RatPoly::constant(c))
    }

    pub fn one(&self) -> AlgebraElement {
        self.constant(Rational::one())
    }

    /// The element `X`.
    pub fn x(&self) -> AlgebraElement {
        self.element(&RatPoly::x())
    }

    /// `c - X`.
    pub fn c_minus_x(&self, c: &Rational) -> AlgebraElement {
        self.element(&RatPoly::new(vec![c.clone(), -Rational::one()]))
    }

    /// Builds an element from explicit component residues, reducing each.
    pub fn from_parts(&self, parts: Vec<RatPoly>) -> Result<AlgebraElement> {
        if parts.len() != self.components.len() {
            return Err(Error::ShapeMismatch);
        }
        Ok(AlgebraElement {
            parts: parts.iter().zip(&self.components).map(|(p, m)| p.rem(m)).collect(),
        })
    }

    /// Element of a split algebra from its three coordinates.
    pub fn from_rationals(&self, vals: &[Rational]) -> Result<AlgebraElement> {
        if !self.is_split() {
            return Err(Error::ShapeMismatch);
        }
        self.from_parts(vals.iter().cloned().map(RatPoly::constant).collect())
    }

    pub fn check_shape(&self, a: &AlgebraElement) -> Result<()> {
        let ok = a.parts.len() == self.components.len()
            && a.parts
                .iter()
                .zip(&self.components)
                .all(|(p, m)| p.degree() < m.degree());
        if ok {
            Ok(())
        } else {
            Err(Error::ShapeMismatch)
        }
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            parts: a
                .parts
                .iter()
                .zip(&b.parts)
                .zip(&self.components)
                .map(|((x, y), m)| (x * y).rem(m))
                .collect(),
        }
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            parts: a.parts.iter().zip(&b.parts).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            parts: a.parts.iter().zip(&b.parts).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn is_unit(&self, a: &AlgebraElement) -> bool {
        // each component is a field
        a.parts.iter().all(|p| !p.is_zero())
    }

    pub fn inverse(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        let parts = a
            .parts
            .iter()
            .zip(&self.components)
            .map(|(p, m)| p.inverse_mod(m).ok_or(Error::NonUnit))
            .collect::<Result<_>>()?;
        Ok(AlgebraElement { parts })
    }

    /// Norm from the `i`-th component field down to Q.
    pub fn component_norm(&self, i: usize, a: &AlgebraElement) -> Rational {
        component_norm(&self.components[i], &a.parts[i])
    }

    /// Norm `L -> Q`: the product of the component norms.
    pub fn norm(&self, a: &AlgebraElement) -> Rational {
        (0..self.components.len()).fold(Rational::one(), |acc, i| acc * self.component_norm(i, a))
    }

    /// Whether `a` lies in the kernel of `L*/L*^2 -> Q*/Q*^2`, i.e. has
    /// square norm. Non-units are rejected.
    pub fn in_norm_kernel(&self, a: &AlgebraElement) -> Result<bool> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit);
        }
        Ok(is_rational_square(&self.norm(a)))
    }

    /// For each component of `self` (the target), the component of `src`
    /// that `x -> h(x)` maps into it, i.e. the `j` with
    /// `m_src_j(h(x)) = 0 mod m_dst_i`.
    pub fn component_map(&self, src: &CubicEtaleAlgebra, h: &RatPoly) -> Result<Vec<usize>> {
        self.components
            .iter()
            .map(|m| {
                let hx = h.rem(m);
                src.components
                    .iter()
                    .position(|n| n.compose(&hx).rem(m).is_zero())
                    .ok_or_else(|| Error::InvalidIdentification("h does not send roots of f to roots of g".into()))
            })
            .collect()
    }

    /// The ring map `src -> self` sending `X_src` to `h(X)`.
    pub fn map_from(&self, src: &CubicEtaleAlgebra, h: &RatPoly, a: &AlgebraElement) -> Result<AlgebraElement> {
        src.check_shape(a)?;
        let idx = self.component_map(src, h)?;
        let parts = self
            .components
            .iter()
            .zip(idx)
            .map(|(m, j)| a.parts[j].compose(&h.rem(m)).rem(m))
            .collect();
        Ok(AlgebraElement { parts })
    }
}

/// `A_dst`-image of `a` under the algebra map `X_src -> h(X_dst)`.
pub fn algebra_map(
    src: &CubicEtaleAlgebra,
    dst: &CubicEtaleAlgebra,
    h: &RatPoly,
    a: &AlgebraElement,
) -> Result<AlgebraElement> {
    dst.map_from(src, h, a)
}

fn linear(e: &Rational) -> RatPoly {
    RatPoly::new(vec![-e.clone(), Rational::one()])
}

/// Norm of `a` in `Q[x]/(m)`: determinant of multiplication by `a`.
fn component_norm(m: &RatPoly, a: &RatPoly) -> Rational {
    let d = m.degree().unwrap();
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(d);
    let mut basis = RatPoly::one();
    for _ in 0..d {
        let prod = (a * &basis).rem(m);
        cols.push((0..d).map(|i| prod.coeff(i)).collect());
        basis = &basis * &RatPoly::x();
    }
    determinant(cols)
}

pub(crate) fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            let factor = &m[r][col] / &p;
            if factor.is_zero() {
                continue;
            }
            let (top, bottom) = m.split_at_mut(r);
            for (x, pv) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= pv * &factor;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};
    use proptest::prelude::*;

    fn k196() -> CubicEtaleAlgebra {
        CubicEtaleAlgebra::new(&RatPoly::from_i64s(&[1, 6, 5, 1])).unwrap()
    }

    #[test]
    fn factorization_patterns() {
        assert_eq!(k196().degrees(), vec![3]);
        let split = CubicEtaleAlgebra::new(&RatPoly::from_i64s(&[0, -1, 0, 1])).unwrap();
        assert_eq!(split.degrees(), vec![1, 1, 1]);
        assert_eq!(split.component_root(0), Some(rat(-1)));
        // x^3 - 2x = x (x^2 - 2)
        let mixed = CubicEtaleAlgebra::new(&RatPoly::from_i64s(&[0, -2, 0, 1])).unwrap();
        assert_eq!(mixed.degrees(), vec![1, 2]);
        assert!(CubicEtaleAlgebra::new(&RatPoly::from_i64s(&[0, 0, 1, 1])).is_err());
    }

    #[test]
    fn norm_examples() {
        let k = k196();
        assert_eq!(k.norm(&k.c_minus_x(&rat(-2))), rat(1));
        assert_eq!(k.norm(&k.one()), rat(1));
        let s = CubicEtaleAlgebra::split([rat(0), rat(1), rat(2)]).unwrap();
        let a = s.from_rationals(&[rat(2), rat(3), rat(5)]).unwrap();
        assert_eq!(s.norm(&a), rat(30));
    }

    #[test]
    fn norm_kernel_examples() {
        let k = k196();
        assert!(k.in_norm_kernel(&k.c_minus_x(&rat(-2))).unwrap());
        assert!(!k.in_norm_kernel(&k.constant(rat(2))).unwrap());
        let p = 229;
        let s = CubicEtaleAlgebra::split([rat(0), rat(-p - 1), rat(p - 1)]).unwrap();
        let a = s.from_rationals(&[rat(p + 1), rat(1), ratio(1, p + 1)]).unwrap();
        assert!(s.in_norm_kernel(&a).unwrap());
        assert_eq!(s.in_norm_kernel(&s.constant(rat(0))), Err(Error::NonUnit));
    }

    #[test]
    fn algebra_map_cyclic() {
        let l = k196();
        let lp = CubicEtaleAlgebra::new(&RatPoly::from_i64s(&[-1, 5, -6, 1])).unwrap();
        let h = RatPoly::from_i64s(&[6, 5, 1]);
        assert_eq!(l.map_from(&lp, &h, &lp.constant(rat(7))).unwrap(), l.constant(rat(7)));
        assert_eq!(l.map_from(&lp, &h, &lp.x()).unwrap(), l.element(&h));
        let c = rat(3);
        let img = l.map_from(&lp, &h, &lp.c_minus_x(&c)).unwrap();
        assert_eq!(img, l.element(&(&RatPoly::constant(c) - &h)));
        // x -> x is not a root map from g to f
        assert!(l.map_from(&lp, &RatPoly::x(), &lp.x()).is_err());
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-60i64..60, 1i64..20).prop_map(|(n, d)| ratio(n, d))
    }

    fn arb_poly() -> impl Strategy<Value = RatPoly> {
        prop::collection::vec(arb_rat(), 3).prop_map(RatPoly::new)
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in arb_poly(), b in arb_poly()) {
            for f in [[1, 6, 5, 1], [0, -1, 0, 1], [0, -2, 0, 1]] {
                let l = CubicEtaleAlgebra::new(&RatPoly::from_i64s(&f)).unwrap();
                let (ea, eb) = (l.element(&a), l.element(&b));
                prop_assert_eq!(l.norm(&l.mul(&ea, &eb)), l.norm(&ea) * l.norm(&eb));
            }
        }

        #[test]
        fn norm_of_c_minus_x_is_f_of_c(c in arb_rat()) {
            for f in [[1, 6, 5, 1], [0, -1, 0, 1], [0, -2, 0, 1], [-1, 5, -6, 1]] {
                let fp = RatPoly::from_i64s(&f);
                let l = CubicEtaleAlgebra::new(&fp).unwrap();
                prop_assert_eq!(l.norm(&l.c_minus_x(&c)), fp.eval(&c));
            }
        }

        #[test]
        fn split_map_permutes_coordinates(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            // g with roots 0, 1, -1; f with roots 5, 7, 11; h sends 5->1, 7->-1, 11->0
            let lp = CubicEtaleAlgebra::split([rat(0), rat(1), rat(-1)]).unwrap();
            let l = CubicEtaleAlgebra::split([rat(5), rat(7), rat(11)]).unwrap();
            let h = crate::glue::interpolate(&[rat(5), rat(7), rat(11)], &[rat(1), rat(-1), rat(0)]);
            let src = lp.from_rationals(&[a.clone(), b.clone(), c.clone()]).unwrap();
            let img = l.map_from(&lp, &h, &src).unwrap();
            prop_assert_eq!(img.rational_part(0), b);
            prop_assert_eq!(img.rational_part(1), c);
            prop_assert_eq!(img.rational_part(2), a);
        }
    }
}
