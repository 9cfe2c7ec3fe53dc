//! Idempotents and indecomposable factors of scalar rings, and the
//! classification verdicts (tame/QFA, regular/rigid, super tame,
//! bi-interpretability with `Z`).

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bilin::{enumerate_group, induced_bilinear_map, pa_ring, pf_ring};
use crate::error::{Error, Result};
use crate::linalg::Int;
use crate::qalg::RationalAlgebra;
use crate::ring::FdzRing;

/// Largest torsion subgroup enumerated when lifting idempotents.
pub const TORSION_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Yes,
    No,
    Unknown,
    NotApplicable,
}

impl TriState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriState::Yes
        } else {
            TriState::No
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Unknown => "unknown",
            TriState::NotApplicable => "not_applicable",
        }
    }
}

/// The closed set of justifications a verdict may carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Citation {
    #[serde(rename = "def:tame")]
    DefTame,
    #[serde(rename = "def:regular")]
    DefRegular,
    #[serde(rename = "thm:Main1")]
    Main1,
    #[serde(rename = "thm:main2")]
    Main2,
    #[serde(rename = "thm:Main3+spec0-rule")]
    Main3Spec0,
    #[serde(rename = "thm:Main1+thm:1.4")]
    Main1Thm14,
    #[serde(rename = "cor:1.8")]
    Cor18,
    #[serde(rename = "def:super-tame+spec0-rule")]
    SuperTameSpec0,
    #[serde(rename = "def:super-tame")]
    SuperTame,
    #[serde(rename = "def:super-tame:scalar-ring-undefined")]
    SuperTameUndefined,
    #[serde(rename = "def:super-tame:factorization-incomplete")]
    SuperTameIncomplete,
    #[serde(rename = "finite-ring")]
    FiniteRing,
    #[serde(rename = "no-criterion")]
    NoCriterion,
}

impl Citation {
    pub fn as_str(self) -> &'static str {
        match self {
            Citation::DefTame => "def:tame",
            Citation::DefRegular => "def:regular",
            Citation::Main1 => "thm:Main1",
            Citation::Main2 => "thm:main2",
            Citation::Main3Spec0 => "thm:Main3+spec0-rule",
            Citation::Main1Thm14 => "thm:Main1+thm:1.4",
            Citation::Cor18 => "cor:1.8",
            Citation::SuperTameSpec0 => "def:super-tame+spec0-rule",
            Citation::SuperTame => "def:super-tame",
            Citation::SuperTameUndefined => "def:super-tame:scalar-ring-undefined",
            Citation::SuperTameIncomplete => "def:super-tame:factorization-incomplete",
            Citation::FiniteRing => "finite-ring",
            Citation::NoCriterion => "no-criterion",
        }
    }

    pub const ALL: [Citation; 13] = [
        Citation::DefTame,
        Citation::DefRegular,
        Citation::Main1,
        Citation::Main2,
        Citation::Main3Spec0,
        Citation::Main1Thm14,
        Citation::Cor18,
        Citation::SuperTameSpec0,
        Citation::SuperTame,
        Citation::SuperTameUndefined,
        Citation::SuperTameIncomplete,
        Citation::FiniteRing,
        Citation::NoCriterion,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub value: TriState,
    pub justification: Citation,
}

impl Verdict {
    fn new(value: TriState, justification: Citation) -> Self {
        Verdict { value, justification }
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumAnalysis {
    /// Every idempotent of the ring, sorted.
    pub idempotents: Vec<Vec<Int>>,
    pub primitive_idempotents: Vec<Vec<Int>>,
    /// `eP` for each primitive idempotent `e`.
    pub factors: Vec<FdzRing>,
    pub infinite_factor_count: usize,
    /// Number of primitive idempotents of `P ⊗ Q`, i.e. minimal primes of `P`.
    pub minimal_prime_count: usize,
    pub spec0_connected: TriState,
}

fn to_q(x: &Int) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// `P ⊗ Q` on the infinite-order coordinates of `P`.
fn rational_algebra(p: &FdzRing) -> (RationalAlgebra, Vec<usize>) {
    let free: Vec<usize> = (0..p.rank()).filter(|&i| p.orders()[i].is_zero()).collect();
    let mut table = Vec::with_capacity(free.len() * free.len());
    for &i in &free {
        for &j in &free {
            let prod = p.gen_product(i, j);
            table.push(free.iter().map(|&k| to_q(&prod[k])).collect());
        }
    }
    (RationalAlgebra::new(free.len(), table), free)
}

fn require_scalar(p: &FdzRing) -> Result<Vec<Int>> {
    if !p.is_commutative() {
        return Err(Error::ScalarAxioms("not commutative".into()));
    }
    if !p.is_associative() {
        return Err(Error::ScalarAxioms("not associative".into()));
    }
    p.unit().ok_or_else(|| Error::ScalarAxioms("no unit".into()))
}

/// Primitive idempotents of `P ⊗ Q` (in the coordinates of the free part).
fn rational_primitive_idempotents(p: &FdzRing, unit: &[Int], seed: u64) -> Result<(Vec<Vec<BigRational>>, Vec<usize>)> {
    let (alg, free) = rational_algebra(p);
    let unit_q: Vec<BigRational> = free.iter().map(|&i| to_q(&unit[i])).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((alg.primitive_idempotents(&unit_q, &mut rng)?, free))
}

/// Every idempotent of a commutative associative unital ring.
pub fn idempotents(p: &FdzRing, seed: u64) -> Result<Vec<Vec<Int>>> {
    let unit = require_scalar(p)?;
    let (prims, free) = rational_primitive_idempotents(p, &unit, seed)?;
    if prims.len() > crate::poly::DEGREE_BOUND {
        return Err(Error::FactorizationIncomplete(format!("{} rational blocks", prims.len())));
    }
    let torsion: Vec<usize> = (0..p.rank()).filter(|&i| !p.orders()[i].is_zero()).collect();
    let torsion_orders: Vec<Int> = torsion.iter().map(|&i| p.orders()[i].clone()).collect();
    let torsion_elems = enumerate_group(&torsion_orders, TORSION_LIMIT).ok_or_else(|| Error::CarrierTooLarge {
        size: torsion_orders.iter().product::<Int>().to_string(),
        limit: TORSION_LIMIT,
    })?;
    let mut found = BTreeSet::new();
    for mask in 0u32..(1u32 << prims.len()) {
        let mut sum = vec![BigRational::zero(); free.len()];
        for (b, e) in prims.iter().enumerate() {
            if mask & (1 << b) != 0 {
                for (s, x) in sum.iter_mut().zip(e) {
                    *s += x;
                }
            }
        }
        if !sum.iter().all(|x| x.is_integer()) {
            continue;
        }
        let mut base = p.zero();
        for (&i, x) in free.iter().zip(&sum) {
            base[i] = x.to_integer();
        }
        for t in &torsion_elems {
            let mut e = base.clone();
            for (&i, x) in torsion.iter().zip(t) {
                e[i] = x.clone();
            }
            if p.mul(&e, &e) == e {
                found.insert(e);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Decompose `P` along its primitive idempotents.
pub fn indecomposable_factors(p: &FdzRing, seed: u64) -> Result<SpectrumAnalysis> {
    let unit = require_scalar(p)?;
    let (rational, _) = rational_primitive_idempotents(p, &unit, seed)?;
    let all = idempotents(p, seed)?;
    let nonzero: Vec<&Vec<Int>> = all.iter().filter(|e| e.iter().any(|x| !x.is_zero())).collect();
    let primitive: Vec<Vec<Int>> = nonzero
        .iter()
        .filter(|e| !nonzero.iter().any(|f| f != *e && p.mul(e, f) == **f))
        .map(|e| (*e).clone())
        .collect();

    // Orthogonal, summing to the unit.
    let mut total = p.zero();
    for (a, e) in primitive.iter().enumerate() {
        total = p.add(&total, e);
        for f in &primitive[a + 1..] {
            if p.mul(e, f) != p.zero() {
                return Err(Error::Internal("primitive idempotents are not orthogonal".into()));
            }
        }
    }
    if total != unit {
        return Err(Error::Internal("primitive idempotents do not sum to the unit".into()));
    }

    let g = p.additive();
    let mut factors = Vec::with_capacity(primitive.len());
    for e in &primitive {
        let block = g.subgroup_from_vecs((0..p.rank()).map(|j| p.mul(e, &p.basis_vector(j))).collect());
        factors.push(p.subring(&block)?.0);
    }
    let infinite_factor_count = factors.iter().filter(|f| f.is_infinite()).count();
    Ok(SpectrumAnalysis {
        idempotents: all,
        primitive_idempotents: primitive,
        factors,
        infinite_factor_count,
        minimal_prime_count: rational.len(),
        spec0_connected: spec0_connected(rational.len()),
    })
}

/// `Spec⁰` of an FDZ scalar ring is its set of non-maximal primes: the
/// minimal primes over the free part, with no specialization among them.
/// It is connected exactly when there is at most one.
fn spec0_connected(minimal_primes: usize) -> TriState {
    TriState::from_bool(minimal_primes <= 1)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScalarRingChoice {
    #[default]
    Pf,
    Pa,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ClassifyOptions {
    pub scalar_ring: ScalarRingChoice,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub infinite: bool,
    pub tame: Verdict,
    pub regular: Verdict,
    pub qfa: Verdict,
    pub first_order_rigid_hint: Verdict,
    pub super_tame: Verdict,
    pub bi_interpretable: Verdict,
    /// Counts from the scalar ring's decomposition, when it was computed.
    pub scalar_ring_rank: Option<usize>,
    pub minimal_prime_count: Option<usize>,
    pub infinite_factor_count: Option<usize>,
}

impl ClassificationReport {
    pub fn verdicts(&self) -> [(&'static str, Verdict); 6] {
        [
            ("tame", self.tame),
            ("regular", self.regular),
            ("qfa", self.qfa),
            ("first_order_rigid_hint", self.first_order_rigid_hint),
            ("super_tame", self.super_tame),
            ("bi_interpretable", self.bi_interpretable),
        ]
    }
}

pub fn classify_ring(a: &FdzRing, opts: ClassifyOptions) -> ClassificationReport {
    use TriState::*;
    let chain = a.characteristic_ideals();
    let preds = chain.predicates();
    let infinite = a.is_infinite();
    let tame = Verdict::new(from_bool(preds.tame), Citation::DefTame);
    let regular = Verdict::new(from_bool(preds.regular), Citation::DefRegular);
    let first_order_rigid_hint = if preds.regular {
        Verdict::new(Yes, Citation::Cor18)
    } else {
        Verdict::new(Unknown, Citation::Cor18)
    };
    if !infinite {
        let na = Verdict::new(NotApplicable, Citation::FiniteRing);
        return ClassificationReport {
            infinite,
            tame,
            regular,
            qfa: na,
            first_order_rigid_hint,
            super_tame: na,
            bi_interpretable: na,
            scalar_ring_rank: None,
            minimal_prime_count: None,
            infinite_factor_count: None,
        };
    }
    let qfa = Verdict::new(from_bool(preds.tame), Citation::Main1);

    let scalar = match opts.scalar_ring {
        ScalarRingChoice::Pf => pf_ring(&induced_bilinear_map(a)),
        ScalarRingChoice::Pa => pa_ring(a),
    };
    let ann_finite = chain.ann.is_finite();
    let delta_whole = chain.delta_is_whole();
    let second_condition = ann_finite || delta_whole;
    let mut scalar_ring_rank = None;
    let mut minimal_prime_count = None;
    let mut infinite_factor_count = None;
    let super_tame = match scalar {
        Err(_) => Verdict::new(No, Citation::SuperTameUndefined),
        Ok(_) if !second_condition => Verdict::new(No, Citation::SuperTame),
        Ok(action) => {
            scalar_ring_rank = Some(action.ring.rank());
            match indecomposable_factors(&action.ring, opts.seed) {
                Ok(spec) => {
                    minimal_prime_count = Some(spec.minimal_prime_count);
                    infinite_factor_count = Some(spec.infinite_factor_count);
                    Verdict::new(spec.spec0_connected, Citation::SuperTameSpec0)
                }
                Err(_) => Verdict::new(Unknown, Citation::SuperTameIncomplete),
            }
        }
    };

    let null_ring = chain.sq.is_trivial();
    let bi_interpretable = if super_tame.value == Yes {
        Verdict::new(Yes, Citation::Main3Spec0)
    } else if null_ring && !preds.tame {
        Verdict::new(No, Citation::Main1Thm14)
    } else if !ann_finite && !delta_whole {
        Verdict::new(No, Citation::Main2)
    } else if qfa.value == No {
        Verdict::new(No, Citation::Main1Thm14)
    } else {
        Verdict::new(Unknown, Citation::NoCriterion)
    };

    ClassificationReport {
        infinite,
        tame,
        regular,
        qfa,
        first_order_rigid_hint,
        super_tame,
        bi_interpretable,
        scalar_ring_rank,
        minimal_prime_count,
        infinite_factor_count,
    }
}

fn from_bool(b: bool) -> TriState {
    TriState::from_bool(b)
}

/// Number of elements of a finite ring as `usize`, if small.
pub fn small_order(r: &FdzRing) -> Option<usize> {
    r.order().and_then(|o| o.to_usize())
}

/// Check `e ↦ 1 − e` and products preserve a set of idempotents.
pub fn idempotent_set_is_closed(p: &FdzRing, set: &[Vec<Int>]) -> bool {
    let Some(unit) = p.unit() else { return false };
    let contains = |x: &Vec<Int>| set.contains(x);
    set.iter().all(|e| {
        let comp = p.add(&unit, &p.neg(e));
        contains(&comp) && set.iter().all(|f| contains(&p.mul(e, f)))
    }) && set.iter().any(|e| e.iter().all(|x| x.is_zero()))
        && set.iter().any(|e| *e == unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, ints};
    use crate::ring::samples::*;
    use crate::ring::{integers, z0_ring};
    use TriState::*;

    fn opts() -> ClassifyOptions {
        ClassifyOptions::default()
    }

    #[test]
    fn idempotents_of_small_rings() {
        assert_eq!(idempotents(&integers(), 0).unwrap(), vec![ints(&[0]), ints(&[1])]);
        let zz = integers().direct_product(&integers());
        assert_eq!(
            idempotents(&zz, 0).unwrap(),
            vec![ints(&[0, 0]), ints(&[0, 1]), ints(&[1, 0]), ints(&[1, 1])]
        );
        assert_eq!(idempotents(&zx2(), 0).unwrap(), vec![ints(&[0, 0]), ints(&[1, 0])]);
        let set = idempotents(&zz, 0).unwrap();
        assert!(idempotent_set_is_closed(&zz, &set));
    }

    #[test]
    fn factors_and_spec0() {
        let s = indecomposable_factors(&integers(), 0).unwrap();
        assert_eq!((s.factors.len(), s.spec0_connected), (1, Yes));
        let zz = integers().direct_product(&integers());
        let s = indecomposable_factors(&zz, 0).unwrap();
        assert_eq!((s.infinite_factor_count, s.spec0_connected), (2, No));
        let z2 = integers().reduce_mod_n(&int(2));
        let zt = integers().direct_product(&z2);
        let s = indecomposable_factors(&zt, 0).unwrap();
        assert_eq!((s.factors.len(), s.infinite_factor_count, s.spec0_connected), (2, 1, Yes));
    }

    #[test]
    fn classification_table() {
        let r = classify_ring(&integers(), opts());
        assert_eq!((r.tame.value, r.qfa.value, r.bi_interpretable.value), (Yes, Yes, Yes));

        let r = classify_ring(&twoz(), opts());
        assert_eq!((r.tame.value, r.qfa.value, r.super_tame.value, r.bi_interpretable.value), (Yes, Yes, Yes, Yes));

        let r = classify_ring(&z0_ring(), opts());
        assert_eq!((r.tame.value, r.qfa.value, r.bi_interpretable.value), (No, No, No));
        assert_eq!(r.bi_interpretable.justification, Citation::Main1Thm14);

        let r = classify_ring(&integers().direct_product(&z0_ring()), opts());
        assert_eq!(r.bi_interpretable, Verdict::new(No, Citation::Main2));

        let r = classify_ring(&w(), opts());
        assert_eq!((r.tame.value, r.qfa.value, r.regular.value), (No, No, No));

        let r = classify_ring(&zx2(), opts());
        assert_eq!((r.tame.value, r.qfa.value), (Yes, Yes));
    }

    #[test]
    fn finite_rings_are_not_classified() {
        let r = classify_ring(&integers().reduce_mod_n(&int(4)), opts());
        assert_eq!(r.qfa.value, NotApplicable);
        assert_eq!(r.bi_interpretable.value, NotApplicable);
    }
}
