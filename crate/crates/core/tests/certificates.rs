use mwglue::arith::rat;
use mwglue::descent::{
    membership, surjectivity_obstruction, verify_not_in_image, MembershipVerdict, NonSquareEvidence,
    ObstructionVerdict, ObstructionWitness,
};
use mwglue::etale::{is_square, AlgebraElement, NonSquareCertificate, SquareDecision, SquareEffort};
use mwglue::family::{build_instance, run_family, verify_instance, FamilyParams, FamilyRun};
use mwglue::fixtures;
use mwglue::glue::GluingData;
use mwglue::json::{from_str, to_string};
use mwglue::{Curve, Point, RatPoly};
use proptest::prelude::*;

fn cyclic_certificate() -> NonSquareEvidence {
    let g = fixtures::cyclic_gluing();
    match membership(
        &g,
        &fixtures::cyclic_point(),
        &Point::Infinity,
        &SquareEffort::default(),
    )
    .unwrap()
    {
        MembershipVerdict::NotInImage { certificate } => certificate,
        v => panic!("{v:?}"),
    }
}

#[test]
fn membership_certificate_round_trips() {
    let cert = cyclic_certificate();
    let verdict = MembershipVerdict::NotInImage {
        certificate: cert.clone(),
    };
    let text = to_string(&verdict);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["verdict"], "not_in_image");
    assert_eq!(value["certificate"]["p"], 13);
    let back: MembershipVerdict = from_str(&text).unwrap();
    assert_eq!(back, verdict);
    let MembershipVerdict::NotInImage { certificate } = back else {
        unreachable!()
    };
    assert!(certificate.validate());
    let g = fixtures::cyclic_gluing();
    assert!(verify_not_in_image(&g, &fixtures::cyclic_point(), &Point::Infinity, &certificate).unwrap());
    let two_p = g.e.double(&fixtures::cyclic_point()).unwrap();
    assert!(!verify_not_in_image(&g, &two_p, &Point::Infinity, &certificate).unwrap());
}

#[test]
fn tampered_certificates_fail() {
    let NonSquareEvidence::NonResidue {
        components,
        element,
        certificate,
    } = cyclic_certificate()
    else {
        panic!()
    };
    let tamper = |c: NonSquareCertificate| NonSquareEvidence::NonResidue {
        components: components.clone(),
        element: element.clone(),
        certificate: c,
    };
    let mut c = certificate.clone();
    c.value = (c.value + 1) % c.p;
    assert!(!tamper(c).validate());
    let mut c = certificate.clone();
    c.p = 7;
    assert!(!tamper(c).validate());
    let mut c = certificate.clone();
    c.root = (c.root + 1) % c.p;
    assert!(!tamper(c).validate());

    let forged = NonSquareEvidence::Rational {
        component: 0,
        value: rat(9),
        reason: mwglue::descent::RationalNonSquare::OddValuation(3.into()),
    };
    assert!(!forged.validate());
}

fn family_run() -> FamilyRun {
    let params = FamilyParams::new(3, 5, fixtures::family_partner(), vec![], 1_000_000, 3).unwrap();
    run_family(&params, &SquareEffort::default()).unwrap()
}

#[test]
fn family_witnesses_round_trip() {
    let run = family_run();
    let text = to_string(&run);
    let back: FamilyRun = from_str(&text).unwrap();
    assert_eq!(back, run);
    for rep in &back.reports {
        let ObstructionVerdict::NotContained { witness, .. } = &rep.obstruction else {
            panic!("p = {}", rep.p)
        };
        let w: ObstructionWitness = from_str(&to_string(witness)).unwrap();
        assert!(w.validate());
    }
}

#[test]
fn field_case_witness_round_trips() {
    let g = fixtures::cyclic_gluing();
    let v = surjectivity_obstruction(&g, &fixtures::cyclic_point(), &[], true, &SquareEffort::default()).unwrap();
    let back: ObstructionVerdict = from_str(&to_string(&v)).unwrap();
    let ObstructionVerdict::NotContained { witness, .. } = back else {
        panic!()
    };
    assert!(witness.validate());
}

#[test]
fn tampered_functional_fails() {
    let params = FamilyParams::new(3, 5, fixtures::family_partner(), vec![], 1_000_000, 1).unwrap();
    let rep = verify_instance(&build_instance(229).unwrap(), &params, &SquareEffort::default()).unwrap();
    let ObstructionVerdict::NotContained {
        witness:
            ObstructionWitness::Functional {
                generators,
                target,
                functional,
            },
        ..
    } = rep.obstruction
    else {
        panic!()
    };
    // the functional must not vanish on the target's own class
    let w = ObstructionWitness::Functional {
        generators: [generators.clone(), vec![target.clone()]].concat(),
        target: target.clone(),
        functional: functional.clone(),
    };
    assert!(!w.validate());
    let w = ObstructionWitness::Functional {
        generators,
        target,
        functional: vec![],
    };
    assert!(!w.validate());
}

#[test]
fn gluing_and_points_round_trip() {
    let g = fixtures::cyclic_gluing();
    let text = to_string(&g);
    let back: GluingData = from_str(&text).unwrap();
    assert_eq!(back.e, g.e);
    assert_eq!(back.f, g.f);
    assert_eq!(back.psi, g.psi);
    for p in [
        Point::Infinity,
        fixtures::cyclic_point(),
        Point::new(rat(1) / rat(4), rat(-3) / rat(8)),
    ] {
        assert_eq!(from_str::<Point>(&to_string(&p)).unwrap(), p);
    }
    let c: Curve = from_str(r#"{"f": ["1", "6", "5"]}"#).unwrap();
    assert_eq!(c, fixtures::cyclic_e());
    assert!(
        from_str::<GluingData>(r#"{"E": {"f": ["0","-1","0"]}, "F": {"f": ["0","-1","0"]}, "h": ["0","1"]}"#).is_err()
    );
}

fn cyclic_element(c: [i64; 3]) -> AlgebraElement {
    let l = fixtures::cyclic_gluing().l;
    l.element(&RatPoly::from_i64s(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn square_decisions_never_conflict(c in prop::array::uniform3(-30i64..30)) {
        let l = fixtures::cyclic_gluing().l;
        let a = cyclic_element(c);
        prop_assume!(l.is_unit(&a));
        let mut seen_square = false;
        let mut seen_non_square = false;
        for primes in [5, 40, 200] {
            match is_square(&l, &a, &SquareEffort::with_primes(primes)).unwrap() {
                SquareDecision::Square(w) => {
                    prop_assert_eq!(l.mul(&w, &w), a.clone());
                    seen_square = true;
                }
                SquareDecision::NonSquare(cert) => {
                    let back: NonSquareCertificate = from_str(&to_string(&cert)).unwrap();
                    prop_assert!(back.validate(&l, &a));
                    seen_non_square = true;
                }
                SquareDecision::Unknown => {}
            }
        }
        prop_assert!(!(seen_square && seen_non_square));
    }

    #[test]
    fn squares_are_recognized(c in prop::array::uniform3(-12i64..12)) {
        let l = fixtures::cyclic_gluing().l;
        let b = cyclic_element(c);
        prop_assume!(l.is_unit(&b));
        let a = l.mul(&b, &b);
        let d = is_square(&l, &a, &SquareEffort::default()).unwrap();
        prop_assert!(d.is_square(), "{:?}", d);
    }
}
