//! The family `E_p: y^2 = x(x + p + 1)(x - p + 1)`.
//!
//! Fix an elliptic curve `F` with full rational 2-torsion and two distinct
//! odd primes `l1, l2` that occur in no class of `iota'(F(Q))`. For a prime
//! `p = l1 + 1 mod l1^2`, `p = l2 - 1 mod l2^2` that also does not occur in
//! `iota'(F(Q))`, glue `E_p` to `F` by matching the 2-torsion points in
//! order. With `P = (-1, p)` and `P_1, P_2, P_3` the 2-torsion points at
//! `x = 0, -p - 1, p - 1`:
//!
//! ```text
//! iota(P)   = (-1,       p,          -p)
//! iota(P_1) = (-p^2 + 1, p + 1,      -p + 1)
//! iota(P_2) = (-p - 1,   2p(p + 1),  -2p)
//! iota(P_3) = (p - 1,    2p,         2p(p - 1))
//! ```
//!
//! `p` occurs in `iota(P)` and in `iota(P + P_1)`, `l2` in `iota(P + P_2)`
//! and `l1` in `iota(P + P_3)`, so `iota(P)` is outside the span of the
//! torsion and of `psi*(iota'(F(Q)))`, and `P` is not in
//! `E_p(Q)_tors + phi_*(J(Q))`.
//!
//! Whether a prime occurs in `iota'(F(Q))` is decided on generator images
//! only: the map sending a class to its valuation vector at `q` is F2-linear,
//! so `q` occurs in some element of a span iff it occurs in a generator.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::modular::crt;
use crate::arith::primes::is_prime_u64;
use crate::arith::{factor, rat, SquareClassTriple};
use crate::descent::{iota, surjectivity_obstruction, IotaImage, ObstructionVerdict};
use crate::ellcurve::{torsion_subgroup, TorsionStructure};
use crate::etale::{rational_roots_of_cubic, CubicEtaleAlgebra, SquareEffort};
use crate::glue::GluingData;
use crate::{Curve, Error, Point, Rational, Result};

pub const DEFAULT_BOUND: u64 = 1_000_000;
pub const DEFAULT_COUNT: usize = 5;

#[derive(Clone, Debug)]
pub struct FamilyParams {
    pub l1: u64,
    pub l2: u64,
    pub f: Curve,
    /// Rational roots of `F`'s cubic, ascending; `E_p`'s roots
    /// `0, -p - 1, p - 1` are matched to them in this order.
    pub f_roots: [Rational; 3],
    pub f_generators: Vec<Point>,
    pub bound: u64,
    pub count: usize,
    f_images: Vec<SquareClassTriple>,
}

impl FamilyParams {
    /// `f_generators` together with the rational torsion of `F` must
    /// generate `F(Q)`; this is taken on trust.
    pub fn new(l1: u64, l2: u64, f: Curve, f_generators: Vec<Point>, bound: u64, count: usize) -> Result<Self> {
        if l1 == l2 {
            return Err(Error::InvalidParams(format!("l1 and l2 must be distinct (both {l1})")));
        }
        for l in [l1, l2] {
            if l == 2 || !is_prime_u64(l) {
                return Err(Error::InvalidParams(format!("{l} is not an odd prime")));
            }
        }
        if bound == 0 || count == 0 {
            return Err(Error::InvalidParams("bound and count must be positive".into()));
        }
        let roots = rational_roots_of_cubic(&f.cubic());
        let f_roots: [Rational; 3] = roots
            .try_into()
            .map_err(|_| Error::InvalidParams("F must have three rational 2-torsion points".into()))?;
        let l_prime = CubicEtaleAlgebra::split(f_roots.clone())?;
        let mut f_images = Vec::new();
        for q in torsion_subgroup(&f)?.generators.iter().chain(&f_generators) {
            match iota(&f, &l_prime, q)? {
                IotaImage::Split(t) => f_images.push(t),
                IotaImage::General(_) => unreachable!("split algebra"),
            }
        }
        let params = FamilyParams {
            l1,
            l2,
            f,
            f_roots,
            f_generators,
            bound,
            count,
            f_images,
        };
        for l in [l1, l2] {
            if params.occurs_in_f(l) {
                return Err(Error::InvalidParams(format!("{l} occurs in the image of F(Q)")));
            }
        }
        Ok(params)
    }

    /// `iota'` of the torsion generators of `F` followed by the supplied
    /// generators.
    pub fn f_images(&self) -> &[SquareClassTriple] {
        &self.f_images
    }

    pub fn occurs_in_f(&self, q: u64) -> bool {
        let q = BigInt::from(q);
        self.f_images.iter().any(|t| t.occurs(&q))
    }

    /// The CRT residue of `l1 + 1 mod l1^2` and `l2 - 1 mod l2^2`, with the
    /// modulus `l1^2 l2^2`.
    pub fn residue(&self) -> (u64, u64) {
        let (m1, m2) = (BigInt::from(self.l1 * self.l1), BigInt::from(self.l2 * self.l2));
        let (r, m) = crt(&BigInt::from(self.l1 + 1), &m1, &BigInt::from(self.l2 - 1), &m2)
            .expect("distinct primes give coprime moduli");
        (r.try_into().expect("fits"), m.try_into().expect("fits"))
    }

    pub fn gluing(&self, p: u64) -> Result<GluingData> {
        GluingData::split_matching(e_p_roots(p), self.f_roots.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSearch {
    pub primes: Vec<u64>,
    /// The bound was reached before `count` primes were found.
    pub bound_exhausted: bool,
}

pub fn find_primes(params: &FamilyParams) -> PrimeSearch {
    let (r, m) = params.residue();
    let mut primes = Vec::new();
    let mut p = r;
    while p <= params.bound && primes.len() < params.count {
        if p > 2 && is_prime_u64(p) && !params.occurs_in_f(p) {
            primes.push(p);
        }
        p += m;
    }
    PrimeSearch {
        bound_exhausted: primes.len() < params.count,
        primes,
    }
}

/// `[0, -p - 1, p - 1]`.
pub fn e_p_roots(p: u64) -> [Rational; 3] {
    let p = p as i64;
    [rat(0), rat(-p - 1), rat(p - 1)]
}

pub fn e_p(p: u64) -> Result<Curve> {
    let [a, b, c] = e_p_roots(p);
    Curve::from_roots(a, b, c)
}

#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub p: u64,
    pub e: Curve,
    pub l: CubicEtaleAlgebra,
    /// `P = (-1, p)`.
    pub point: Point,
    /// `P_1, P_2, P_3` at `x = 0, -p - 1, p - 1`.
    pub two_torsion: [Point; 3],
    /// `iota` of `P, P_1, P_2, P_3`.
    pub iota_table: [SquareClassTriple; 4],
}

pub fn build_instance(p: u64) -> Result<FamilyInstance> {
    if p < 2 || p > i64::MAX as u64 / 4 {
        return Err(Error::InvalidParams(format!("p = {p} out of range")));
    }
    let roots = e_p_roots(p);
    let e = e_p(p)?;
    let l = CubicEtaleAlgebra::split(roots.clone())?;
    let point = Point::new(rat(-1), rat(p as i64));
    let two_torsion = roots.map(|r| Point::new(r, rat(0)));
    let split = |q: &Point| -> Result<SquareClassTriple> {
        match iota(&e, &l, q)? {
            IotaImage::Split(t) => Ok(t),
            IotaImage::General(_) => unreachable!("split algebra"),
        }
    };
    let iota_table = [
        split(&point)?,
        split(&two_torsion[0])?,
        split(&two_torsion[1])?,
        split(&two_torsion[2])?,
    ];
    Ok(FamilyInstance {
        p,
        e,
        l,
        point,
        two_torsion,
        iota_table,
    })
}

/// Closed forms for `iota(P), iota(P_1), iota(P_2), iota(P_3)`, for `p < 2^31`.
pub fn closed_form_iota_table(p: u64) -> Result<[SquareClassTriple; 4]> {
    if p >= 1 << 31 {
        return Err(Error::InvalidParams(format!("p = {p} out of range")));
    }
    let p = p as i64;
    Ok([
        SquareClassTriple::from_i64s([-1, p, -p])?,
        SquareClassTriple::from_i64s([-p * p + 1, p + 1, -p + 1])?,
        SquareClassTriple::from_i64s([-p - 1, 2 * p * (p + 1), -2 * p])?,
        SquareClassTriple::from_i64s([p - 1, 2 * p, 2 * p * (p - 1)])?,
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub p: u64,
    pub iota_table: [SquareClassTriple; 4],
    pub checks: Vec<Check>,
    pub obstruction: ObstructionVerdict,
    pub torsion: String,
    #[serde(with = "crate::json::rational_str")]
    pub j_invariant: Rational,
}

impl InstanceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const CHECK_OCCURRENCE: &str = "occurrence";
pub const CHECK_NONTRIVIAL: &str = "two_torsion_images_nontrivial";
pub const CHECK_TORSION: &str = "torsion_structure";
pub const CHECK_OBSTRUCTION: &str = "obstruction";
pub const CHECK_J_PRIME: &str = "j_largest_bad_prime";

/// The four occurrence claims for `P, P + P_1, P + P_2, P + P_3`, with
/// `iota` recomputed from the sums.
pub fn occurrence_claims(inst: &FamilyInstance, l1: u64, l2: u64) -> Result<[bool; 4]> {
    let primes = [inst.p, inst.p, l2, l1];
    let mut out = [false; 4];
    for (k, q) in primes.into_iter().enumerate() {
        let pt = if k == 0 {
            inst.point.clone()
        } else {
            inst.e.add(&inst.point, &inst.two_torsion[k - 1])?
        };
        let IotaImage::Split(t) = iota(&inst.e, &inst.l, &pt)? else {
            unreachable!("split algebra")
        };
        out[k] = t.occurs(&BigInt::from(q));
    }
    Ok(out)
}

/// Largest prime dividing the denominator of `j`.
pub fn largest_bad_prime(j: &Rational) -> Result<Option<BigInt>> {
    Ok(factor(j.denom())?.primes().max().cloned())
}

pub fn verify_instance(inst: &FamilyInstance, params: &FamilyParams, effort: &SquareEffort) -> Result<InstanceReport> {
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(Check {
            name: name.into(),
            passed,
            detail,
        })
    };

    let occ = occurrence_claims(inst, params.l1, params.l2)?;
    push(
        CHECK_OCCURRENCE,
        occ.iter().all(|&b| b),
        format!(
            "{} in iota(P): {}, {} in iota(P+P1): {}, {} in iota(P+P2): {}, {} in iota(P+P3): {}",
            inst.p, occ[0], inst.p, occ[1], params.l2, occ[2], params.l1, occ[3]
        ),
    );

    let nontrivial: Vec<bool> = inst.iota_table[1..].iter().map(|t| !t.is_trivial()).collect();
    push(
        CHECK_NONTRIVIAL,
        nontrivial.iter().all(|&b| b),
        format!("iota(P1), iota(P2), iota(P3) nontrivial: {nontrivial:?}"),
    );

    let torsion = torsion_subgroup(&inst.e)?.structure;
    push(
        CHECK_TORSION,
        matches!(torsion, TorsionStructure::TwoBy(2) | TorsionStructure::TwoBy(6)),
        format!("E_p(Q)_tors = {torsion}"),
    );

    let g = params.gluing(inst.p)?;
    let obstruction = surjectivity_obstruction(&g, &inst.point, &params.f_generators, true, effort)?;
    push(
        CHECK_OBSTRUCTION,
        obstruction.is_not_contained(),
        match &obstruction {
            ObstructionVerdict::NotContained { .. } => "iota(P) outside the torsion and F(Q) span".into(),
            ObstructionVerdict::Contained { subset, .. } => format!("iota(P) in span via generators {subset:?}"),
            ObstructionVerdict::Unknown => "undecided".into(),
        },
    );

    let j = inst.e.j_invariant();
    let bad = largest_bad_prime(&j)?;
    push(
        CHECK_J_PRIME,
        bad == Some(BigInt::from(inst.p)),
        match &bad {
            Some(q) => format!("largest prime in denominator of j: {q}"),
            None => "j is integral".into(),
        },
    );

    Ok(InstanceReport {
        p: inst.p,
        iota_table: inst.iota_table.clone(),
        checks,
        obstruction,
        torsion: torsion.to_string(),
        j_invariant: j,
    })
}

/// True iff the j-invariants are pairwise distinct.
pub fn pairwise_distinct(instances: &[FamilyInstance]) -> bool {
    let mut js: Vec<Rational> = instances.iter().map(|i| i.e.j_invariant()).collect();
    js.sort();
    js.windows(2).all(|w| w[0] != w[1])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRun {
    pub l1: u64,
    pub l2: u64,
    pub search: PrimeSearch,
    pub reports: Vec<InstanceReport>,
    pub pairwise_distinct: bool,
}

impl FamilyRun {
    /// Every instance verified and the search found `count` primes.
    pub fn passed(&self) -> bool {
        !self.search.bound_exhausted && self.reports.iter().all(InstanceReport::passed) && self.pairwise_distinct
    }

    pub fn falsified(&self) -> bool {
        !self.pairwise_distinct || self.reports.iter().any(|r| !r.passed())
    }
}

/// Finds the primes and verifies each instance in parallel; reports come
/// back in ascending `p`.
pub fn run_family(params: &FamilyParams, effort: &SquareEffort) -> Result<FamilyRun> {
    let search = find_primes(params);
    let instances: Vec<FamilyInstance> = search
        .primes
        .iter()
        .map(|&p| build_instance(p))
        .collect::<Result<_>>()?;
    let reports: Vec<InstanceReport> = instances
        .par_iter()
        .map(|inst| verify_instance(inst, params, effort))
        .collect::<Result<_>>()?;
    Ok(FamilyRun {
        l1: params.l1,
        l2: params.l2,
        pairwise_distinct: pairwise_distinct(&instances),
        search,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{family_partner, family_partner_alt};

    fn params(l1: u64, l2: u64, count: usize, bound: u64) -> FamilyParams {
        FamilyParams::new(l1, l2, family_partner(), vec![], bound, count).unwrap()
    }

    #[test]
    fn first_primes() {
        assert_eq!(params(3, 5, 1, DEFAULT_BOUND).residue(), (4, 225));
        assert_eq!(find_primes(&params(3, 5, 1, DEFAULT_BOUND)).primes, vec![229]);
        assert_eq!(params(3, 7, 1, DEFAULT_BOUND).residue(), (202, 441));
        assert_eq!(find_primes(&params(3, 7, 1, DEFAULT_BOUND)).primes, vec![643]);
    }

    #[test]
    fn returned_primes_satisfy_congruences() {
        let pr = params(3, 5, 8, DEFAULT_BOUND);
        let s = find_primes(&pr);
        assert_eq!(s.primes.len(), 8);
        assert!(!s.bound_exhausted);
        for p in s.primes {
            assert_eq!(p % 9, 4);
            assert_eq!(p % 25, 4);
            assert!(is_prime_u64(p));
        }
    }

    #[test]
    fn bound_exhaustion_is_flagged() {
        let s = find_primes(&params(3, 5, 100, 1000));
        assert!(s.bound_exhausted);
        assert!(s.primes.len() < 100);
    }

    #[test]
    fn invalid_params_rejected() {
        let f = family_partner();
        assert!(FamilyParams::new(3, 3, f.clone(), vec![], 10, 1).is_err());
        assert!(FamilyParams::new(2, 3, f.clone(), vec![], 10, 1).is_err());
        assert!(FamilyParams::new(9, 5, f.clone(), vec![], 10, 1).is_err());
        // 3 occurs in iota'((0,0)) = (-3, -1, 3) on y^2 = x(x-1)(x+3)
        assert!(FamilyParams::new(3, 5, family_partner_alt(), vec![], 10, 1).is_err());
        let no_two_torsion = Curve::new(rat(1), rat(0), rat(0)).unwrap();
        assert!(FamilyParams::new(3, 5, no_two_torsion, vec![], 10, 1).is_err());
    }

    #[test]
    fn instance_229() {
        let pr = params(3, 5, 1, DEFAULT_BOUND);
        let inst = build_instance(229).unwrap();
        assert_eq!(inst.iota_table, closed_form_iota_table(229).unwrap());
        let report = verify_instance(&inst, &pr, &SquareEffort::default()).unwrap();
        assert!(report.passed(), "{report:#?}");
    }

    #[test]
    fn violating_prime_is_flagged() {
        let pr = params(3, 5, 1, DEFAULT_BOUND);
        let report = verify_instance(&build_instance(3).unwrap(), &pr, &SquareEffort::default()).unwrap();
        assert!(!report.check(CHECK_OCCURRENCE).unwrap().passed);
    }

    #[test]
    fn distinctness() {
        let e3 = build_instance(3).unwrap();
        let e5 = build_instance(5).unwrap();
        assert!(pairwise_distinct(&[e3.clone(), e5]));
        assert!(pairwise_distinct(&[e3]));
        let e229 = build_instance(229).unwrap();
        assert!(!pairwise_distinct(&[e229.clone(), e229]));
    }

    #[test]
    fn valuations_of_p_plus_minus_one() {
        use crate::arith::valuation;
        for p in [3u64, 229, 2029] {
            let pb = BigInt::from(p);
            for n in [p + 1, p - 1, p * p - 1] {
                assert_eq!(valuation(&BigInt::from(n), &pb), 0);
            }
        }
    }

    #[test]
    fn generator_occurrence_matches_span_occurrence() {
        let gens = [
            SquareClassTriple::from_i64s([-3, -1, 3]).unwrap(),
            SquareClassTriple::from_i64s([6, 10, 15]).unwrap(),
            SquareClassTriple::from_i64s([7, 7, 1]).unwrap(),
        ];
        for q in [2i64, 3, 5, 7, 11] {
            let q = BigInt::from(q);
            let by_gen = gens.iter().any(|g| g.occurs(&q));
            let by_span = (0u32..8).any(|mask| {
                (0..3)
                    .filter(|i| mask >> i & 1 == 1)
                    .fold(SquareClassTriple::trivial(), |acc, i| acc.mul(&gens[i]))
                    .occurs(&q)
            });
            assert_eq!(by_gen, by_span);
        }
    }
}
