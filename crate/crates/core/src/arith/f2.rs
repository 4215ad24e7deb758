//! Linear algebra over F2 on square-class triples.
//!
//! A triple is a vector over F2 whose coordinates are indexed by
//! `(component, sign)` and `(component, prime)`. Products of classes are sums
//! of vectors, so span membership is Gaussian elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::square_class::SquareClassTriple;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordKind {
    Sign,
    Prime(#[serde(with = "crate::json::bigint_str")] BigInt),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coord {
    pub component: usize,
    pub kind: CoordKind,
}

fn coords_of(z: &SquareClassTriple) -> impl Iterator<Item = Coord> + '_ {
    z.components().iter().enumerate().flat_map(|(i, c)| {
        let sign = c.is_negative().then_some(Coord {
            component: i,
            kind: CoordKind::Sign,
        });
        sign.into_iter().chain(c.primes().iter().map(move |p| Coord {
            component: i,
            kind: CoordKind::Prime(p.clone()),
        }))
    })
}

/// Outcome of a span-membership test, with a checkable witness either way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum SpanDecision {
    /// The product of the generators at these indices equals the target.
    Contained { subset: Vec<usize> },
    /// A linear functional (sum of the listed coordinates mod 2) that is zero
    /// on every generator and one on the target.
    NotContained { functional: Vec<Coord> },
}

impl SpanDecision {
    pub fn is_contained(&self) -> bool {
        matches!(self, SpanDecision::Contained { .. })
    }

    /// Re-checks the witness against the inputs.
    pub fn verify(&self, generators: &[SquareClassTriple], target: &SquareClassTriple) -> bool {
        match self {
            SpanDecision::Contained { subset } => {
                if subset.iter().any(|&i| i >= generators.len()) {
                    return false;
                }
                let prod = subset
                    .iter()
                    .fold(SquareClassTriple::trivial(), |acc, &i| acc.mul(&generators[i]));
                prod == *target
            }
            SpanDecision::NotContained { functional } => {
                generators.iter().all(|g| !functional_value(functional, g)) && functional_value(functional, target)
            }
        }
    }
}

/// Value of the functional `sum(coords)` on `z`, as a bit.
pub fn functional_value(functional: &[Coord], z: &SquareClassTriple) -> bool {
    functional.iter().filter(|c| has_coord(z, c)).count() % 2 == 1
}

fn has_coord(z: &SquareClassTriple, c: &Coord) -> bool {
    let Some(sc) = z.components().get(c.component) else {
        return false;
    };
    match &c.kind {
        CoordKind::Sign => sc.is_negative(),
        CoordKind::Prime(p) => sc.contains_prime(p),
    }
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn xor(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }
    fn first_one(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b))
    }
}

/// Decides whether `target` lies in the subgroup generated by `generators`.
pub fn subgroup_contains(generators: &[SquareClassTriple], target: &SquareClassTriple) -> SpanDecision {
    let mut index: BTreeMap<Coord, usize> = BTreeMap::new();
    for z in generators.iter().chain(std::iter::once(target)) {
        for c in coords_of(z) {
            let n = index.len();
            index.entry(c).or_insert(n);
        }
    }
    let ncols = index.len();
    let to_bits = |z: &SquareClassTriple| {
        let mut b = Bits::zeros(ncols);
        for c in coords_of(z) {
            b.set(index[&c]);
        }
        b
    };

    // reduced row echelon basis: (vector, pivot column, generator combination)
    let mut basis: Vec<(Bits, usize, Bits)> = Vec::new();
    for (gi, g) in generators.iter().enumerate() {
        let mut v = to_bits(g);
        let mut combo = Bits::zeros(generators.len());
        combo.set(gi);
        for (bv, piv, bc) in &basis {
            if v.get(*piv) {
                v.xor(bv);
                combo.xor(bc);
            }
        }
        let Some(piv) = v.first_one() else { continue };
        for (bv, _, bc) in basis.iter_mut() {
            if bv.get(piv) {
                bv.xor(&v);
                bc.xor(&combo);
            }
        }
        basis.push((v, piv, combo));
    }

    let mut t = to_bits(target);
    let mut combo = Bits::zeros(generators.len());
    for (bv, piv, bc) in &basis {
        if t.get(*piv) {
            t.xor(bv);
            combo.xor(bc);
        }
    }
    match t.first_one() {
        None => SpanDecision::Contained {
            subset: combo.ones().filter(|&i| i < generators.len()).collect(),
        },
        Some(col) => {
            let by_index: BTreeMap<usize, &Coord> = index.iter().map(|(c, &i)| (i, c)).collect();
            let mut functional = vec![by_index[&col].clone()];
            functional.extend(
                basis
                    .iter()
                    .filter(|(bv, _, _)| bv.get(col))
                    .map(|(_, piv, _)| by_index[piv].clone()),
            );
            functional.sort();
            SpanDecision::NotContained { functional }
        }
    }
}
