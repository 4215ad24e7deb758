//! Descent maps and the image criterion.
//!
//! For `E: y^2 = f` the map `iota: E(Q)/2E(Q) -> L^` sends a point with
//! `y != 0` to the class of `x_P - X`, a 2-torsion point `(e, 0)` to the
//! class that agrees with `e - X` off the component `x - e` and is forced on
//! that component by the norm condition, and `O` to 1.
//!
//! `(P, Q)` is in the image of `J(Q)` under `(phi_*, phi'_*)` iff
//! `iota(P) = psi*(iota'(Q))`, i.e. iff `iota(P) * psi*(iota'(Q))` is a
//! square in `L`.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::arith::{rational_valuation, square_class, subgroup_contains, Coord, SpanDecision, SquareClassTriple};
use crate::ellcurve::{torsion_subgroup, ECPoint};
use crate::etale::{
    is_square, AlgebraElement, AlgebraSquareClass, CubicEtaleAlgebra, NonSquareCertificate, SquareDecision,
    SquareEffort,
};
use crate::glue::GluingData;
use crate::{Curve, Error, Point, RatPoly, Rational, Result};

/// Value of `iota`, canonical in the split case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum IotaImage {
    Split(SquareClassTriple),
    General(AlgebraSquareClass),
}

impl IotaImage {
    pub fn as_triple(&self) -> Option<&SquareClassTriple> {
        match self {
            IotaImage::Split(t) => Some(t),
            IotaImage::General(_) => None,
        }
    }

    /// Membership in `L^`: trivial norm class.
    pub fn in_norm_kernel(&self, alg: &CubicEtaleAlgebra) -> bool {
        match self {
            IotaImage::Split(t) => t.in_norm_kernel(),
            IotaImage::General(c) => c.in_norm_kernel(alg),
        }
    }
}

fn check_algebra(e: &Curve, l: &CubicEtaleAlgebra) -> Result<()> {
    if *l.f() == e.cubic() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch)
    }
}

/// A unit of `L` representing `iota(P)`.
pub fn iota_element(e: &Curve, l: &CubicEtaleAlgebra, p: &Point) -> Result<AlgebraElement> {
    check_algebra(e, l)?;
    if !e.contains(p) {
        return Err(Error::OffCurve);
    }
    let ECPoint::Affine { x, y } = p else {
        return Ok(l.one());
    };
    let elem = l.c_minus_x(x);
    if !num_traits::Zero::is_zero(y) {
        return Ok(elem);
    }
    // (e, 0) with e rational: x - e is a degree-1 component, and the value
    // there is fixed by requiring the norm to be a square.
    let i = l
        .component_of_root(x)
        .expect("rational 2-torsion point has a linear component");
    let forced: Rational = (0..l.components().len())
        .filter(|&j| j != i)
        .map(|j| l.component_norm(j, &elem))
        .product();
    let mut parts = elem.parts().to_vec();
    parts[i] = RatPoly::constant(forced);
    l.from_parts(parts)
}

/// The value `f'(e)` that the forced component of `iota((e, 0))` must agree
/// with up to squares, since `f'(e)` is the product of `e - e_j` over the
/// other roots.
pub fn two_torsion_forced_value(e: &Curve, root: &Rational) -> Rational {
    e.cubic().derivative().eval(root)
}

pub fn iota(e: &Curve, l: &CubicEtaleAlgebra, p: &Point) -> Result<IotaImage> {
    let elem = iota_element(e, l, p)?;
    image_of(l, elem)
}

fn image_of(l: &CubicEtaleAlgebra, elem: AlgebraElement) -> Result<IotaImage> {
    if l.is_split() {
        let qs = [elem.rational_part(0), elem.rational_part(1), elem.rational_part(2)];
        Ok(IotaImage::Split(SquareClassTriple::from_rationals(&qs)?))
    } else {
        Ok(IotaImage::General(AlgebraSquareClass::new(l, elem)?))
    }
}

/// `psi*: L'^ -> L^`, induced by `X' -> h(X)`.
pub fn psi_star(g: &GluingData, c: &IotaImage) -> Result<IotaImage> {
    match c {
        IotaImage::Split(t) => {
            let idx = g.l.component_map(&g.l_prime, g.psi.h())?;
            let comps = t.components();
            Ok(IotaImage::Split(SquareClassTriple([
                comps[idx[0]].clone(),
                comps[idx[1]].clone(),
                comps[idx[2]].clone(),
            ])))
        }
        IotaImage::General(c) => {
            let rep = g.l.map_from(&g.l_prime, g.psi.h(), &c.representative)?;
            Ok(IotaImage::General(AlgebraSquareClass::new(&g.l, rep)?))
        }
    }
}

/// Why a rational number is not a square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RationalNonSquare {
    Negative,
    OddValuation(#[serde(with = "crate::json::bigint_str")] BigInt),
}

/// Evidence that an element of `L` is not a square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonSquareEvidence {
    /// Reduction at a prime; carries the algebra and the element so it can be
    /// re-checked on its own.
    NonResidue {
        #[serde(with = "components_json")]
        components: Vec<RatPoly>,
        element: AlgebraElement,
        #[serde(flatten)]
        certificate: NonSquareCertificate,
    },
    /// A degree-1 component whose value is visibly not a rational square.
    Rational {
        component: usize,
        #[serde(with = "crate::json::rational_str")]
        value: Rational,
        reason: RationalNonSquare,
    },
}

mod components_json {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "crate::json::poly_coeffs")] RatPoly);

    pub fn serialize<S: Serializer>(cs: &[RatPoly], s: S) -> std::result::Result<S::Ok, S::Error> {
        cs.iter().map(|c| Wrap(c.clone())).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<RatPoly>, D::Error> {
        Ok(Vec::<Wrap>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}

impl NonSquareEvidence {
    /// Re-checks the evidence using only its own contents.
    pub fn validate(&self) -> bool {
        match self {
            NonSquareEvidence::NonResidue {
                components,
                element,
                certificate,
            } => CubicEtaleAlgebra::from_components(components.clone())
                .map(|alg| certificate.validate(&alg, element))
                .unwrap_or(false),
            NonSquareEvidence::Rational { value, reason, .. } => match reason {
                RationalNonSquare::Negative => value.is_negative(),
                RationalNonSquare::OddValuation(p) => {
                    crate::arith::is_prime(p)
                        && !num_traits::Zero::is_zero(value)
                        && rational_valuation(value, p) % 2 != 0
                }
            },
        }
    }

    /// Checks that the evidence is about `elem` in `alg`.
    pub fn applies_to(&self, alg: &CubicEtaleAlgebra, elem: &AlgebraElement) -> bool {
        match self {
            NonSquareEvidence::NonResidue {
                components,
                element,
                certificate,
            } => components == alg.components() && element == elem && certificate.validate(alg, elem),
            NonSquareEvidence::Rational { component, value, .. } => {
                alg.component_root(*component).is_some()
                    && elem.parts().get(*component).map(|p| p.coeff(0)) == Some(value.clone())
                    && self.validate()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MembershipVerdict {
    InImage,
    NotInImage { certificate: NonSquareEvidence },
    Unknown { square_primes: usize },
}

/// `iota(P) * psi*(iota'(Q))` as an element of `L`.
pub fn criterion_element(g: &GluingData, p: &Point, q: &Point) -> Result<AlgebraElement> {
    let a = iota_element(&g.e, &g.l, p)?;
    let b_src = iota_element(&g.f, &g.l_prime, q)?;
    let b = g.l.map_from(&g.l_prime, g.psi.h(), &b_src)?;
    Ok(g.l.mul(&a, &b))
}

fn rational_evidence(component: usize, value: &Rational) -> Result<Option<NonSquareEvidence>> {
    if value.is_negative() {
        return Ok(Some(NonSquareEvidence::Rational {
            component,
            value: value.clone(),
            reason: RationalNonSquare::Negative,
        }));
    }
    let class = square_class(value)?;
    Ok(class.primes().first().map(|p| NonSquareEvidence::Rational {
        component,
        value: value.clone(),
        reason: RationalNonSquare::OddValuation(p.clone()),
    }))
}

/// Decides whether `(P, Q)` lies in the image of `J(Q)`.
pub fn membership(g: &GluingData, p: &Point, q: &Point, effort: &SquareEffort) -> Result<MembershipVerdict> {
    let c = criterion_element(g, p, q)?;
    decide_square(&g.l, &c, effort)
}

fn decide_square(l: &CubicEtaleAlgebra, c: &AlgebraElement, effort: &SquareEffort) -> Result<MembershipVerdict> {
    if l.is_split() {
        for i in 0..3 {
            if let Some(ev) = rational_evidence(i, &c.rational_part(i))? {
                return Ok(MembershipVerdict::NotInImage { certificate: ev });
            }
        }
        return Ok(MembershipVerdict::InImage);
    }
    Ok(match is_square(l, c, effort)? {
        SquareDecision::Square(_) => MembershipVerdict::InImage,
        SquareDecision::NonSquare(cert) => MembershipVerdict::NotInImage {
            certificate: NonSquareEvidence::NonResidue {
                components: l.components().to_vec(),
                element: c.clone(),
                certificate: cert,
            },
        },
        SquareDecision::Unknown => MembershipVerdict::Unknown {
            square_primes: effort.primes,
        },
    })
}

/// Re-derives the criterion element for `(P, Q)` and checks that the
/// certificate of a `NotInImage` verdict is about it.
pub fn verify_not_in_image(g: &GluingData, p: &Point, q: &Point, evidence: &NonSquareEvidence) -> Result<bool> {
    let c = criterion_element(g, p, q)?;
    Ok(evidence.applies_to(&g.l, &c))
}

/// Witness that `iota(P)` is outside the span of the generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObstructionWitness {
    /// Split case: a functional on the F2 coordinates vanishing on all
    /// generators and not on the target.
    Functional {
        generators: Vec<SquareClassTriple>,
        target: SquareClassTriple,
        functional: Vec<Coord>,
    },
    /// General case: every product of `iota(P)` with a subset of the
    /// generators is certified a non-square.
    NonSquares { certificates: Vec<NonSquareEvidence> },
}

impl ObstructionWitness {
    pub fn validate(&self) -> bool {
        match self {
            ObstructionWitness::Functional {
                generators,
                target,
                functional,
            } => SpanDecision::NotContained {
                functional: functional.clone(),
            }
            .verify(generators, target),
            ObstructionWitness::NonSquares { certificates } => {
                certificates.len().is_power_of_two() && certificates.iter().all(NonSquareEvidence::validate)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ObstructionVerdict {
    /// `iota(P)` is the product of the images of these generators.
    Contained {
        labels: Vec<String>,
        subset: Vec<usize>,
    },
    NotContained {
        labels: Vec<String>,
        witness: ObstructionWitness,
    },
    Unknown,
}

impl ObstructionVerdict {
    pub fn is_not_contained(&self) -> bool {
        matches!(self, ObstructionVerdict::NotContained { .. })
    }
}

/// Largest generator list the non-split case will enumerate subsets of.
const MAX_GENERAL_GENERATORS: usize = 12;

/// Tests whether `iota(P)` lies in the span of `iota(T)` for the torsion
/// generators `T` of `E` (when `include_torsion`) and `psi*(iota'(g))` for
/// `g` in `f_generators` together with the torsion generators of `F`.
///
/// `NotContained` proves `P` is not in `E(Q)_tors + phi_*(J(Q))`, provided
/// the `f_generators` and `F`'s torsion generate `F(Q)`.
pub fn surjectivity_obstruction(
    g: &GluingData,
    p: &Point,
    f_generators: &[Point],
    include_torsion: bool,
    effort: &SquareEffort,
) -> Result<ObstructionVerdict> {
    let mut gens: Vec<(String, AlgebraElement)> = Vec::new();
    if include_torsion {
        for t in torsion_subgroup(&g.e)?.generators {
            gens.push((format!("E torsion {}", show(&t)), iota_element(&g.e, &g.l, &t)?));
        }
    }
    let f_tors = torsion_subgroup(&g.f)?.generators;
    for q in f_tors.iter().chain(f_generators) {
        let src = iota_element(&g.f, &g.l_prime, q)?;
        gens.push((format!("F {}", show(q)), g.l.map_from(&g.l_prime, g.psi.h(), &src)?));
    }
    let target = iota_element(&g.e, &g.l, p)?;
    let labels: Vec<String> = gens.iter().map(|(l, _)| l.clone()).collect();

    if g.l.is_split() {
        let to_triple = |a: &AlgebraElement| match image_of(&g.l, a.clone())? {
            IotaImage::Split(t) => Ok(t),
            IotaImage::General(_) => unreachable!(),
        };
        let gen_triples: Vec<SquareClassTriple> = gens.iter().map(|(_, a)| to_triple(a)).collect::<Result<_>>()?;
        let target = to_triple(&target)?;
        return Ok(match subgroup_contains(&gen_triples, &target) {
            SpanDecision::Contained { subset } => ObstructionVerdict::Contained { labels, subset },
            SpanDecision::NotContained { functional } => ObstructionVerdict::NotContained {
                labels,
                witness: ObstructionWitness::Functional {
                    generators: gen_triples,
                    target,
                    functional,
                },
            },
        });
    }

    if gens.len() > MAX_GENERAL_GENERATORS {
        return Ok(ObstructionVerdict::Unknown);
    }
    let mut certificates = Vec::with_capacity(1 << gens.len());
    for mask in 0u32..(1 << gens.len()) {
        let subset: Vec<usize> = (0..gens.len()).filter(|i| mask >> i & 1 == 1).collect();
        let prod = subset.iter().fold(target.clone(), |acc, &i| g.l.mul(&acc, &gens[i].1));
        match decide_square(&g.l, &prod, effort)? {
            MembershipVerdict::InImage => return Ok(ObstructionVerdict::Contained { labels, subset }),
            MembershipVerdict::NotInImage { certificate } => certificates.push(certificate),
            MembershipVerdict::Unknown { .. } => return Ok(ObstructionVerdict::Unknown),
        }
    }
    Ok(ObstructionVerdict::NotContained {
        labels,
        witness: ObstructionWitness::NonSquares { certificates },
    })
}

fn show(p: &Point) -> String {
    match p {
        ECPoint::Infinity => "O".into(),
        ECPoint::Affine { x, y } => format!("({x}, {y})"),
    }
}

/// Convenience: `iota` of a point given only the curve, using the algebra
/// with components in ascending-root order.
pub fn iota_on(e: &Curve, p: &Point) -> Result<IotaImage> {
    let l = CubicEtaleAlgebra::new(&e.cubic())?;
    iota(e, &l, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn ep(p: i64) -> (Curve, CubicEtaleAlgebra) {
        let roots = [rat(0), rat(-p - 1), rat(p - 1)];
        let e = Curve::from_roots(roots[0].clone(), roots[1].clone(), roots[2].clone()).unwrap();
        (e, CubicEtaleAlgebra::split(roots).unwrap())
    }

    fn triple(v: [i64; 3]) -> SquareClassTriple {
        SquareClassTriple::from_i64s(v).unwrap()
    }

    #[test]
    fn iota_on_e_p_matches_closed_forms() {
        for p in [3i64, 11, 229] {
            let (e, l) = ep(p);
            let img = |x: i64, y: i64| iota(&e, &l, &Point::new(rat(x), rat(y))).unwrap();
            assert_eq!(img(-1, p), IotaImage::Split(triple([-1, p, -p])));
            assert_eq!(img(0, 0), IotaImage::Split(triple([-p * p + 1, p + 1, -p + 1])));
            assert_eq!(
                img(-p - 1, 0),
                IotaImage::Split(triple([-p - 1, 2 * p * (p + 1), -2 * p]))
            );
            assert_eq!(img(p - 1, 0), IotaImage::Split(triple([p - 1, 2 * p, 2 * p * (p - 1)])));
        }
    }

    #[test]
    fn iota_of_identity_is_trivial() {
        let (e, l) = ep(11);
        assert_eq!(
            iota(&e, &l, &Point::Infinity).unwrap(),
            IotaImage::Split(SquareClassTriple::trivial())
        );
    }

    #[test]
    fn iota_rejects_off_curve() {
        let (e, l) = ep(11);
        assert_eq!(iota(&e, &l, &Point::new(rat(1), rat(1))), Err(Error::OffCurve));
    }

    #[test]
    fn forced_component_is_f_prime() {
        for p in [3i64, 11] {
            let (e, l) = ep(p);
            for i in 0..3 {
                let root = l.component_root(i).unwrap();
                let elem = iota_element(&e, &l, &Point::new(root.clone(), rat(0))).unwrap();
                let fp = two_torsion_forced_value(&e, &root);
                assert_eq!(
                    square_class(&elem.rational_part(i)).unwrap(),
                    square_class(&fp).unwrap()
                );
            }
        }
    }

    #[test]
    fn cyclic_iota_is_minus_two_minus_x() {
        let e = Curve::new(rat(1), rat(6), rat(5)).unwrap();
        let l = CubicEtaleAlgebra::new(&e.cubic()).unwrap();
        let img = iota(&e, &l, &Point::new(rat(-2), rat(1))).unwrap();
        let IotaImage::General(c) = img else { panic!() };
        assert_eq!(c.representative, l.c_minus_x(&rat(-2)));
        assert!(c.in_norm_kernel(&l));
    }
}
