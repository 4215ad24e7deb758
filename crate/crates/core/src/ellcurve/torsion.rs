use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::roots::integer_roots_monic_cubic;
use super::ECPoint;
use crate::arith::{factor, is_integral};
use crate::{Curve, Point, Rational, Result};

/// A model `Y^2 = X^3 + a X^2 + b X + c` with integer coefficients, related
/// to the original curve by `X = u^2 x`, `Y = u^3 y`.
#[derive(Clone, Debug)]
pub(crate) struct IntegralModel {
    pub u: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl IntegralModel {
    pub fn of(e: &Curve) -> Self {
        let [c0, c1, c2] = e.coeffs();
        let u = c0.denom().lcm(c1.denom()).lcm(c2.denom());
        let u2 = Rational::from_integer(&u * &u);
        let scaled = |q: &Rational, k: u32| (q * u2.pow(k as i32)).to_integer();
        IntegralModel {
            a: scaled(c2, 1),
            b: scaled(c1, 2),
            c: scaled(c0, 3),
            u,
        }
    }

    pub fn curve(&self) -> Curve {
        let r = |n: &BigInt| Rational::from_integer(n.clone());
        Curve::new(r(&self.c), r(&self.b), r(&self.a)).expect("integral model of a smooth curve")
    }

    pub fn to_original(&self, p: &Point) -> Point {
        match p {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine { x, y } => {
                let u = Rational::from_integer(self.u.clone());
                ECPoint::new(x / (&u * &u), y / (&u * &u * &u))
            }
        }
    }
}

/// Rational torsion structures allowed by Mazur's theorem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TorsionStructure {
    /// `Z/n` for `n` in 1..=10 or 12.
    Cyclic(u32),
    /// `Z/2 x Z/n` for `n` in {2, 4, 6, 8}.
    TwoBy(u32),
}

impl TorsionStructure {
    pub fn order(&self) -> u32 {
        match *self {
            TorsionStructure::Cyclic(n) => n,
            TorsionStructure::TwoBy(n) => 2 * n,
        }
    }

    pub fn is_mazur(&self) -> bool {
        match *self {
            TorsionStructure::Cyclic(n) => (1..=10).contains(&n) || n == 12,
            TorsionStructure::TwoBy(n) => matches!(n, 2 | 4 | 6 | 8),
        }
    }

    /// Whether the full 2-torsion `(Z/2)^2` is a subgroup.
    pub fn contains_full_two_torsion(&self) -> bool {
        matches!(self, TorsionStructure::TwoBy(_))
    }
}

impl fmt::Display for TorsionStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorsionStructure::Cyclic(1) => write!(f, "trivial"),
            TorsionStructure::Cyclic(n) => write!(f, "Z/{n}"),
            TorsionStructure::TwoBy(n) => write!(f, "Z/2 x Z/{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionGroup {
    pub structure: TorsionStructure,
    pub generators: Vec<Point>,
    /// Every element, identity first.
    pub points: Vec<Point>,
}

impl TorsionGroup {
    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.contains(p)
    }
}

fn point_integral(p: &Point) -> bool {
    match p {
        ECPoint::Infinity => true,
        ECPoint::Affine { x, y } => is_integral(x) && is_integral(y),
    }
}

/// Order of `p` if it is a torsion point, using that every multiple of a
/// torsion point on an integral model is integral and that orders are at
/// most 12.
fn torsion_order(e: &Curve, p: &Point) -> Option<u32> {
    if p.is_infinity() {
        return Some(1);
    }
    let mut q = p.clone();
    for k in 2..=12 {
        q = e.add_unchecked(&q, p);
        if q.is_infinity() {
            return Some(k);
        }
        if !point_integral(&q) {
            return None;
        }
    }
    None
}

/// All `y >= 0` with `y^2 | n`, from the factorization of `n`.
fn square_divisor_roots(n: &BigInt) -> Result<Vec<BigInt>> {
    let f = factor(&n.abs())?;
    let mut out = vec![BigInt::one()];
    for (p, e) in f.iter() {
        let mut next = Vec::with_capacity(out.len() * (e as usize / 2 + 1));
        for y in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e / 2 {
                next.push(y * &pk);
                pk *= p;
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}

/// The full rational torsion subgroup, by Lutz-Nagell on an integral model.
pub fn torsion_subgroup(e: &Curve) -> Result<TorsionGroup> {
    let model = IntegralModel::of(e);
    let me = model.curve();
    let disc = me.discriminant().to_integer();

    let mut ys = vec![BigInt::zero()];
    ys.extend(square_divisor_roots(&disc)?);

    let mut torsion: Vec<(Point, u32)> = vec![(ECPoint::Infinity, 1)];
    for y in &ys {
        let c = &model.c - y * y;
        for x in integer_roots_monic_cubic(&model.a, &model.b, &c) {
            let xr = Rational::from_integer(x);
            let yr = Rational::from_integer(y.clone());
            let signs: Vec<Rational> = if y.is_zero() { vec![yr] } else { vec![yr.clone(), -yr] };
            for yv in signs {
                let p = ECPoint::new(xr.clone(), yv);
                if let Some(k) = torsion_order(&me, &p) {
                    torsion.push((p, k));
                }
            }
        }
    }

    let n = torsion.len() as u32;
    let max_order = torsion.iter().map(|(_, k)| *k).max().unwrap_or(1);
    let (structure, gens) = if max_order == n {
        let g = torsion.iter().find(|(_, k)| *k == n).map(|(p, _)| p.clone()).unwrap();
        let gens = if n == 1 { vec![] } else { vec![g] };
        (TorsionStructure::Cyclic(n), gens)
    } else {
        let g = torsion
            .iter()
            .find(|(_, k)| *k == max_order)
            .map(|(p, _)| p.clone())
            .unwrap();
        let half = me.mul(&g, (max_order / 2) as i64)?;
        let t = torsion
            .iter()
            .find(|(p, k)| *k == 2 && *p != half)
            .map(|(p, _)| p.clone())
            .expect("non-cyclic torsion has a second 2-torsion point");
        (TorsionStructure::TwoBy(max_order), vec![g, t])
    };
    debug_assert!(structure.is_mazur() && structure.order() == n);

    Ok(TorsionGroup {
        structure,
        generators: gens.iter().map(|p| model.to_original(p)).collect(),
        points: torsion.iter().map(|(p, _)| model.to_original(p)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    #[test]
    fn fixtures_trivial() {
        let e196 = Curve::new(rat(1), rat(6), rat(5)).unwrap();
        let f784 = Curve::new(rat(-1), rat(5), rat(-6)).unwrap();
        assert_eq!(torsion_subgroup(&e196).unwrap().structure, TorsionStructure::Cyclic(1));
        assert_eq!(torsion_subgroup(&f784).unwrap().structure, TorsionStructure::Cyclic(1));
    }

    #[test]
    fn e3_has_full_two_torsion() {
        let e3 = Curve::from_roots(rat(0), rat(-4), rat(2)).unwrap();
        let t = torsion_subgroup(&e3).unwrap();
        assert!(t.structure.contains_full_two_torsion());
        for r in [0, -4, 2] {
            assert!(t.contains(&Point::new(rat(r), rat(0))));
        }
    }

    #[test]
    fn known_structures() {
        // y^2 = x^3 + 1 has Z/6
        let e = Curve::new(rat(1), rat(0), rat(0)).unwrap();
        assert_eq!(torsion_subgroup(&e).unwrap().structure, TorsionStructure::Cyclic(6));
        // y^2 = x^3 - x has Z/2 x Z/2
        let e = Curve::from_roots(rat(0), rat(1), rat(-1)).unwrap();
        assert_eq!(torsion_subgroup(&e).unwrap().structure, TorsionStructure::TwoBy(2));
        // y^2 = x^3 - 2 has trivial torsion
        let e = Curve::new(rat(-2), rat(0), rat(0)).unwrap();
        assert_eq!(torsion_subgroup(&e).unwrap().order(), 1);
        // y^2 = x^3 + 4 has Z/3 via (0, ±2)
        let e = Curve::new(rat(4), rat(0), rat(0)).unwrap();
        assert_eq!(torsion_subgroup(&e).unwrap().structure, TorsionStructure::Cyclic(3));
    }

    #[test]
    fn non_integral_model() {
        // y^2 = x^3 - x/16 needs a denominator-clearing change of variables;
        // its 2-torsion sits at x = 0, ±1/4
        let e = Curve::new(rat(0), ratio(-1, 16), rat(0)).unwrap();
        let t = torsion_subgroup(&e).unwrap();
        assert_eq!(t.structure, TorsionStructure::TwoBy(2));
        assert!(t.contains(&Point::new(ratio(1, 4), rat(0))));
    }

    #[test]
    fn group_closed_under_addition() {
        let e = Curve::new(rat(1), rat(0), rat(0)).unwrap();
        let t = torsion_subgroup(&e).unwrap();
        for a in &t.points {
            for b in &t.points {
                assert!(t.contains(&e.add(a, b).unwrap()));
            }
        }
    }
}
