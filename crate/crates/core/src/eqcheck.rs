//! Invariant profiles, bounded isomorphism search, and the embedding and
//! `Z₀ × A ≅ Z₀ × B` criteria for elementary equivalence.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FgAbelianGroup;
use crate::linalg::{int, Int, IntMatrix, Lattice};
use crate::ring::{z0_ring, FdzRing, IdealChain};

pub const DEFAULT_COEFF_BOUND: u64 = 5;
pub const DEFAULT_NODE_BUDGET: u64 = 400_000;
const FINGERPRINT_RANGE: std::ops::RangeInclusive<u32> = 2..=16;

/// Invariant factors of the characteristic pieces of a ring and of its
/// reductions modulo small integers, in comparison order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantProfile {
    pub fields: Vec<(String, Vec<Int>)>,
}

impl InvariantProfile {
    pub fn get(&self, name: &str) -> Option<&[Int]> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    /// Name of the first field on which the two profiles differ.
    pub fn first_mismatch(&self, other: &InvariantProfile) -> Option<String> {
        self.fields.iter().zip(&other.fields).find(|(a, b)| a != b).map(|(a, _)| a.0.clone())
    }
}

pub fn invariant_profile(a: &FdzRing) -> InvariantProfile {
    let chain = a.characteristic_ideals();
    let whole = a.additive().whole();
    let mut fields = vec![
        ("A".to_string(), a.additive().invariant_factors()),
        ("Ann".to_string(), chain.ann.invariant_factors()),
        ("A²".to_string(), chain.sq.invariant_factors()),
        ("Δ".to_string(), chain.delta.invariant_factors()),
        ("K".to_string(), chain.k_ideal.invariant_factors()),
        ("L".to_string(), chain.l_ideal.invariant_factors()),
        ("M".to_string(), chain.m_quot.invariant_factors()),
        ("N".to_string(), chain.n_quot.invariant_factors()),
        ("A/A²".to_string(), whole.quotient_invariants(&chain.sq)),
    ];
    let relations = a.additive().relations().clone();
    for n in FINGERPRINT_RANGE {
        let n_int = Int::from(n);
        let na = Lattice::new(a.rank(), &scaled_identity(a.rank(), &n_int)).sum(&relations);
        fields.push((format!("A/{n}A"), Lattice::full(a.rank()).quotient_invariants(&na)));
        let upper = chain.sq.lattice().sum(&na);
        fields.push((format!("(A²+{n}A)/{n}A"), upper.quotient_invariants(&na)));
    }
    InvariantProfile { fields }
}

fn scaled_identity(r: usize, n: &Int) -> IntMatrix {
    IntMatrix::diagonal(&vec![n.clone(); r])
}

/// `rows[i]` is the image of the `i`-th generator of the source, in target
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub images: IntMatrix,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    Yes(IsoWitness),
    No(String),
    Unknown(String),
}

#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub coeff_bound: u64,
    pub node_budget: u64,
    pub seed: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { coeff_bound: DEFAULT_COEFF_BOUND, node_budget: DEFAULT_NODE_BUDGET, seed: 0 }
    }
}

impl SearchLimits {
    pub fn with_bound(coeff_bound: u64) -> Self {
        SearchLimits { coeff_bound, ..Default::default() }
    }
}

/// Is `h` (rows = images of generators) a well-defined additive map?
pub fn is_additive(a: &FdzRing, b: &FdzRing, h: &IntMatrix) -> bool {
    (0..a.rank()).all(|i| {
        let d = &a.orders()[i];
        d.is_zero() || b.scale(d, h.row(i)).iter().all(|x| x.is_zero())
    })
}

pub fn apply(b: &FdzRing, h: &IntMatrix, x: &[Int]) -> Vec<Int> {
    b.reduce(&h.vec_mul(x))
}

/// `h(e_i e_j) = h(e_i) h(e_j)` on all generator pairs.
pub fn is_multiplicative(a: &FdzRing, b: &FdzRing, h: &IntMatrix) -> bool {
    (0..a.rank()).all(|i| {
        (0..a.rank()).all(|j| apply(b, h, a.gen_product(i, j)) == b.mul(h.row(i), h.row(j)))
    })
}

pub fn is_injective(a: &FdzRing, b: &FdzRing, h: &IntMatrix) -> bool {
    Lattice::preimage(h, b.additive().relations()) == *a.additive().relations()
}

pub fn image_lattice(b: &FdzRing, h: &IntMatrix) -> Lattice {
    Lattice::new(b.rank(), h).sum(b.additive().relations())
}

pub fn is_ring_isomorphism(a: &FdzRing, b: &FdzRing, h: &IntMatrix) -> bool {
    h.rows() == a.rank()
        && h.cols() == b.rank()
        && is_additive(a, b, h)
        && is_multiplicative(a, b, h)
        && is_injective(a, b, h)
        && image_lattice(b, h) == Lattice::full(b.rank())
}

/// Orders of an element in `A` and in `A/I` for each characteristic ideal.
fn signature(ring: &FdzRing, quotients: &[FgAbelianGroup], x: &[Int]) -> Vec<Int> {
    let mut sig = vec![ring.additive().element_order(x)];
    sig.extend(quotients.iter().map(|q| q.element_order(x)));
    sig
}

fn characteristic_lattices(chain: &IdealChain) -> Vec<Lattice> {
    [&chain.ann, &chain.sq, &chain.delta, &chain.k_ideal, &chain.l_ideal, &chain.o_ideal]
        .iter()
        .map(|s| s.lattice().clone())
        .collect()
}

struct Search<'a> {
    a: &'a FdzRing,
    b: &'a FdzRing,
    candidates: Vec<Vec<Vec<Int>>>,
    /// Generator pairs whose product can first be checked at each depth.
    pair_checks: Vec<Vec<(usize, usize)>>,
    /// Ideal elements of the source supported on the first `i + 1`
    /// generators, paired with the target ideal they must map into.
    ideal_checks: Vec<Vec<(Vec<Int>, usize)>>,
    target_ideals: Vec<Lattice>,
    nodes: u64,
    budget: u64,
}

enum SearchEnd {
    Found(IntMatrix),
    Exhausted,
    Budget,
}

impl<'a> Search<'a> {
    fn run(&mut self, assigned: &mut Vec<Vec<Int>>) -> SearchEnd {
        let i = assigned.len();
        let r = self.a.rank();
        if i == r {
            let h = IntMatrix::from_rows(assigned.clone(), self.b.rank());
            if is_injective(self.a, self.b, &h) && image_lattice(self.b, &h) == Lattice::full(self.b.rank()) {
                return SearchEnd::Found(h);
            }
            return SearchEnd::Exhausted;
        }
        for c in 0..self.candidates[i].len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return SearchEnd::Budget;
            }
            assigned.push(self.candidates[i][c].clone());
            if self.consistent(assigned) {
                match self.run(assigned) {
                    SearchEnd::Exhausted => {}
                    other => return other,
                }
            }
            assigned.pop();
        }
        SearchEnd::Exhausted
    }

    fn consistent(&self, assigned: &[Vec<Int>]) -> bool {
        let i = assigned.len() - 1;
        let image = |x: &[Int]| -> Vec<Int> {
            let mut out = self.b.zero();
            for (xj, hj) in x.iter().zip(assigned) {
                if xj.is_zero() {
                    continue;
                }
                for (o, v) in out.iter_mut().zip(hj) {
                    *o += xj * v;
                }
            }
            self.b.reduce(&out)
        };
        for &(j, k) in &self.pair_checks[i] {
            let lhs = image(&self.a.gen_product(j, k)[..=i]);
            if lhs != self.b.mul(&assigned[j], &assigned[k]) {
                return false;
            }
        }
        self.ideal_checks[i].iter().all(|(x, t)| self.target_ideals[*t].contains(&image(&x[..=i])))
    }
}

fn candidate_key(b: &FdzRing, v: &[Int]) -> (Int, Int, Vec<Int>) {
    let mut max = Int::zero();
    let mut sum = Int::zero();
    for (x, d) in v.iter().zip(b.orders()) {
        // Torsion coordinates measured by distance to 0 modulo d.
        let size = if d.is_zero() { x.abs() } else { x.clone().min(d - x) };
        sum += &size;
        if size > max {
            max = size;
        }
    }
    (max, sum, v.to_vec())
}

fn enumerate_candidates(b: &FdzRing, bound: u64) -> Vec<Vec<Int>> {
    let bound = Int::from(bound);
    let mut out: Vec<Vec<Int>> = vec![Vec::new()];
    for d in b.orders() {
        let range: Vec<Int> = if d.is_zero() {
            let n = bound.to_i64().unwrap();
            (-n..=n).map(Int::from).collect()
        } else {
            let n = d.to_i64().unwrap();
            (0..n).map(Int::from).collect()
        };
        out = out
            .into_iter()
            .flat_map(|v| {
                range.iter().map(move |x| {
                    let mut w = v.clone();
                    w.push(x.clone());
                    w
                })
            })
            .collect();
    }
    out
}

/// Search for a ring isomorphism between rings already in canonical form.
fn search_canonical(a: &FdzRing, b: &FdzRing, limits: SearchLimits) -> IsoOutcome {
    if a.orders() != b.orders() {
        return IsoOutcome::No("A mismatch".into());
    }
    let r = a.rank();
    let chain_a = a.characteristic_ideals();
    let chain_b = b.characteristic_ideals();
    let ideals_a = characteristic_lattices(&chain_a);
    let ideals_b = characteristic_lattices(&chain_b);
    let quot = |ls: &[Lattice]| ls.iter().map(|l| FgAbelianGroup::from_lattice(l.clone())).collect::<Vec<_>>();
    let (qa, qb) = (quot(&ideals_a), quot(&ideals_b));

    let pool = enumerate_candidates(b, limits.coeff_bound);
    let pool_sigs: Vec<Vec<Int>> = pool.iter().map(|v| signature(b, &qb, v)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
    let mut candidates = Vec::with_capacity(r);
    for i in 0..r {
        let sig = signature(a, &qa, &a.basis_vector(i));
        let mut list: Vec<Vec<Int>> =
            pool.iter().zip(&pool_sigs).filter(|(_, s)| **s == sig).map(|(v, _)| v.clone()).collect();
        list.sort_by(|x, y| candidate_key(b, x).cmp(&candidate_key(b, y)));
        if limits.seed != 0 {
            shuffle_ties(b, &mut list, &mut rng);
        }
        candidates.push(list);
    }

    let mut pair_checks = vec![Vec::new(); r];
    for j in 0..r {
        for k in 0..r {
            let support = a.gen_product(j, k).iter().rposition(|x| !x.is_zero()).unwrap_or(0);
            pair_checks[j.max(k).max(support)].push((j, k));
        }
    }
    let mut ideal_checks = vec![Vec::new(); r];
    for (t, lat) in ideals_a.iter().enumerate() {
        for i in 0..r {
            let prefix = Lattice::from_vecs(r, (0..=i).map(|k| a.basis_vector(k)).collect());
            let inside = lat.intersect(&prefix);
            for row in inside.basis().row_vecs() {
                if !row[i].is_zero() {
                    ideal_checks[i].push((row, t));
                }
            }
        }
    }
    let finite = a.is_finite();
    let mut search = Search {
        a,
        b,
        candidates,
        pair_checks,
        ideal_checks,
        target_ideals: ideals_b,
        nodes: 0,
        budget: limits.node_budget,
    };
    match search.run(&mut Vec::with_capacity(r)) {
        SearchEnd::Found(h) => IsoOutcome::Yes(IsoWitness { images: h, verified: false }),
        SearchEnd::Exhausted if finite => IsoOutcome::No("no isomorphism exists (exhaustive search)".into()),
        SearchEnd::Exhausted => {
            IsoOutcome::Unknown(format!("bounded search exhausted at coefficient bound {}", limits.coeff_bound))
        }
        SearchEnd::Budget => IsoOutcome::Unknown(format!("search budget of {} nodes exceeded", limits.node_budget)),
    }
}

fn shuffle_ties(b: &FdzRing, list: &mut [Vec<Int>], rng: &mut ChaCha8Rng) {
    let mut start = 0;
    while start < list.len() {
        let key = |v: &Vec<Int>| {
            let (m, s, _) = candidate_key(b, v);
            (m, s)
        };
        let k0 = key(&list[start]);
        let mut end = start + 1;
        while end < list.len() && key(&list[end]) == k0 {
            end += 1;
        }
        list[start..end].shuffle(rng);
        start = end;
    }
}

/// Bounded search for a ring isomorphism `A → B`. Profiles are compared
/// first; any returned witness has been re-verified on the original
/// presentations.
pub fn iso_search(a: &FdzRing, b: &FdzRing, limits: SearchLimits) -> IsoOutcome {
    if let Some(field) = invariant_profile(a).first_mismatch(&invariant_profile(b)) {
        return IsoOutcome::No(format!("{field} mismatch"));
    }
    let ca = a.canonical_form();
    let cb = b.canonical_form();
    match search_canonical(&ca.ring, &cb.ring, limits) {
        IsoOutcome::Yes(w) => {
            // Back to original coordinates: e_i ↦ Σ_k coord_k(e_i) h(a'_k).
            let rows = (0..a.rank())
                .map(|i| {
                    let y = ca.to_canonical(&a.basis_vector(i));
                    let img = w.images.vec_mul(&y);
                    b.reduce(&cb.to_original(&img))
                })
                .collect();
            let images = IntMatrix::from_rows(rows, b.rank());
            let verified = is_ring_isomorphism(a, b, &images);
            if verified {
                IsoOutcome::Yes(IsoWitness { images, verified })
            } else {
                IsoOutcome::Unknown("internal: witness failed re-verification".into())
            }
        }
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub checks: Vec<CheckLine>,
    pub index: Option<Int>,
    pub k: Int,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Check the embedding criterion: `h: A → B` an injective ring
/// homomorphism of finite index coprime to `k = |L(B)/K(B)|`, restricting
/// to `Δ(A) ≅ Δ(B)` and inducing `A/Ann(A) ≅ B/Ann(B)`.
pub fn verify_embedding(a: &FdzRing, b: &FdzRing, h: &IntMatrix) -> Result<EmbeddingReport> {
    if h.rows() != a.rank() || h.cols() != b.rank() {
        return Err(Error::MalformedMap(format!(
            "expected a {}x{} matrix, got {}x{}",
            a.rank(),
            b.rank(),
            h.rows(),
            h.cols()
        )));
    }
    if !is_additive(a, b, h) {
        return Err(Error::MalformedMap("generator images do not respect additive orders".into()));
    }
    let ca = a.characteristic_ideals();
    let cb = b.characteristic_ideals();
    let mut checks = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| checks.push(CheckLine { name, passed, detail });

    push("homomorphism", is_multiplicative(a, b, h), String::new());
    push("injective", is_injective(a, b, h), String::new());
    let image = image_lattice(b, h);
    let index = Lattice::full(b.rank()).index_of(&image);
    push(
        "finite_index",
        index.is_some(),
        index.as_ref().map_or("infinite".into(), |i| i.to_string()),
    );
    let k = cb.n_quot.order().expect("L/K is finite");
    let coprime = index.as_ref().is_some_and(|i| i.gcd(&k).is_one());
    push("index_coprime_to_k", coprime, format!("k = {k}"));
    let delta_image = ca.delta.lattice().image(h).sum(b.additive().relations());
    push("delta_isomorphism", delta_image == *cb.delta.lattice(), String::new());
    let ann_into = cb.ann.lattice().contains_lattice(&ca.ann.lattice().image(h));
    let ann_injective = Lattice::preimage(h, cb.ann.lattice()) == *ca.ann.lattice();
    let ann_onto = image.sum(cb.ann.lattice()) == Lattice::full(b.rank());
    push("quotient_by_ann_isomorphism", ann_into && ann_injective && ann_onto, String::new());
    Ok(EmbeddingReport { checks, index, k })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    Equivalent(IsoWitness),
    NotEquivalent(String),
    Unknown(String),
}

/// Elementary equivalence through `Z₀ × A ≅ Z₀ × B`.
pub fn equivalence_verdict(a: &FdzRing, b: &FdzRing, limits: SearchLimits) -> EquivalenceVerdict {
    if let Some(field) = invariant_profile(a).first_mismatch(&invariant_profile(b)) {
        return EquivalenceVerdict::NotEquivalent(format!("{field} mismatch"));
    }
    let z0 = z0_ring();
    match iso_search(&z0.direct_product(a), &z0.direct_product(b), limits) {
        IsoOutcome::Yes(w) => EquivalenceVerdict::Equivalent(w),
        IsoOutcome::No(reason) => EquivalenceVerdict::NotEquivalent(reason),
        IsoOutcome::Unknown(reason) => EquivalenceVerdict::Unknown(reason),
    }
}

pub fn identity_map(r: usize) -> IntMatrix {
    IntMatrix::identity(r)
}

pub fn scalar_map(r: usize, n: i64) -> IntMatrix {
    IntMatrix::diagonal(&vec![int(n); r])
}
