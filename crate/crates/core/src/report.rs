//! JSON reports for the command-line tool and the C interface.
//!
//! Integers are JSON numbers when they fit in `i64` and decimal strings
//! otherwise. Every report carries `schema`, `kind` and `timing_ms`; the
//! timing field is the only nondeterministic part.

use std::time::Instant;

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::bilin::{induced_bilinear_map, pa_ring, pf_ring, ScalarRingAction};
use crate::classify::{classify_ring, ClassificationReport, ClassifyOptions, TriState, Verdict};
use crate::deform::{build_deformation, verify_sixterm, DeformationSpec, SixTermReport};
use crate::eqcheck::{equivalence_verdict, invariant_profile, iso_search, CheckLine, EquivalenceVerdict, IsoOutcome, SearchLimits};
use crate::error::Result;
use crate::fomc::{Formula, Model};
use crate::linalg::{Int, IntMatrix};
use crate::ring::FdzRing;
use crate::ringfile::serialize_ring;

pub const SCHEMA: &str = "fdz-report/1";

/// Integer rendered as a JSON number when it fits in `i64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub Int);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub fn json_ints(v: &[Int]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

fn json_matrix(m: &IntMatrix) -> Vec<Vec<JsonInt>> {
    (0..m.rows()).map(|i| json_ints(m.row(i))).collect()
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

#[derive(Clone, Debug, Serialize)]
pub struct RingSummary {
    pub rank: usize,
    pub orders: Vec<JsonInt>,
    pub finite: bool,
    pub order: Option<JsonInt>,
    pub invariant_factors: Vec<JsonInt>,
}

pub fn ring_summary(a: &FdzRing) -> RingSummary {
    RingSummary {
        rank: a.rank(),
        orders: json_ints(a.orders()),
        finite: a.is_finite(),
        order: a.order().map(JsonInt),
        invariant_factors: json_ints(&a.additive().invariant_factors()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealInvariants {
    #[serde(rename = "Ann")]
    pub ann: Vec<JsonInt>,
    #[serde(rename = "A2")]
    pub square: Vec<JsonInt>,
    #[serde(rename = "Delta")]
    pub delta: Vec<JsonInt>,
    #[serde(rename = "K")]
    pub k: Vec<JsonInt>,
    #[serde(rename = "L")]
    pub l: Vec<JsonInt>,
    #[serde(rename = "O")]
    pub o: Vec<JsonInt>,
    #[serde(rename = "M")]
    pub m: Vec<JsonInt>,
    #[serde(rename = "N")]
    pub n: Vec<JsonInt>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RingPredicates {
    pub tame: TriState,
    pub regular: TriState,
    pub null: TriState,
    pub commutative: TriState,
    pub associative: TriState,
    pub unital: TriState,
}

#[derive(Clone, Debug, Serialize)]
pub struct BilinearSummary {
    pub width_exact: Option<usize>,
    pub width_upper_bound: usize,
    /// Least size of a complete system; absent when the map is degenerate.
    pub complete_system_size: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub input: RingSummary,
    pub ideals: IdealInvariants,
    pub predicates: RingPredicates,
    pub bilinear: BilinearSummary,
    pub timing_ms: f64,
}

pub fn analyze_report(a: &FdzRing) -> AnalyzeReport {
    let start = Instant::now();
    let c = a.characteristic_ideals();
    let p = c.predicates();
    let f = induced_bilinear_map(a);
    let width = f.width();
    AnalyzeReport {
        schema: SCHEMA,
        kind: "analyze",
        input: ring_summary(a),
        ideals: IdealInvariants {
            ann: json_ints(&c.ann.invariant_factors()),
            square: json_ints(&c.sq.invariant_factors()),
            delta: json_ints(&c.delta.invariant_factors()),
            k: json_ints(&c.k_ideal.invariant_factors()),
            l: json_ints(&c.l_ideal.invariant_factors()),
            o: json_ints(&c.o_ideal.invariant_factors()),
            m: json_ints(&c.m_quot.invariant_factors()),
            n: json_ints(&c.n_quot.invariant_factors()),
        },
        predicates: RingPredicates {
            tame: TriState::from_bool(p.tame),
            regular: TriState::from_bool(p.regular),
            null: TriState::from_bool(a.is_null()),
            commutative: TriState::from_bool(a.is_commutative()),
            associative: TriState::from_bool(a.is_associative()),
            unital: TriState::from_bool(a.unit().is_some()),
        },
        bilinear: BilinearSummary {
            width_exact: width.exact,
            width_upper_bound: width.upper_bound,
            complete_system_size: f.complete_system().ok().map(|s| s.generators.len()),
        },
        timing_ms: elapsed_ms(start),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalarRingCounts {
    pub rank: Option<usize>,
    pub minimal_prime_count: Option<usize>,
    pub infinite_factor_count: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub input: RingSummary,
    pub verdicts: std::collections::BTreeMap<&'static str, Verdict>,
    pub scalar_ring: ScalarRingCounts,
    pub timing_ms: f64,
}

pub fn classify_report(a: &FdzRing, opts: ClassifyOptions) -> ClassifyReport {
    let start = Instant::now();
    let c: ClassificationReport = classify_ring(a, opts);
    ClassifyReport {
        schema: SCHEMA,
        kind: "classify",
        input: ring_summary(a),
        verdicts: c.verdicts().into_iter().collect(),
        scalar_ring: ScalarRingCounts {
            rank: c.scalar_ring_rank,
            minimal_prime_count: c.minimal_prime_count,
            infinite_factor_count: c.infinite_factor_count,
        },
        timing_ms: elapsed_ms(start),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalarRingSection {
    pub ring_file: String,
    pub identity: Vec<JsonInt>,
    pub commutative: bool,
    pub associative: bool,
    /// Per generator of the scalar ring, its matrix on the domain and on
    /// the codomain (row-vector convention).
    pub domain_action: Vec<Vec<Vec<JsonInt>>>,
    pub codomain_action: Vec<Vec<Vec<JsonInt>>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum ScalarRingOutcome {
    Ring(ScalarRingSection),
    Error { error: String },
}

fn scalar_section(action: Result<ScalarRingAction>) -> ScalarRingOutcome {
    match action {
        Ok(p) => ScalarRingOutcome::Ring(ScalarRingSection {
            ring_file: serialize_ring(&p.ring),
            identity: json_ints(&p.identity),
            commutative: p.ring.is_commutative(),
            associative: p.ring.is_associative(),
            domain_action: p.domain_action.iter().map(json_matrix).collect(),
            codomain_action: p.codomain_action.iter().map(json_matrix).collect(),
        }),
        Err(e) => ScalarRingOutcome::Error { error: e.to_string() },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PfReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub input: RingSummary,
    pub pf: ScalarRingOutcome,
    pub pa: ScalarRingOutcome,
    pub timing_ms: f64,
}

pub fn pf_report(a: &FdzRing) -> PfReport {
    let start = Instant::now();
    let f = induced_bilinear_map(a);
    PfReport {
        schema: SCHEMA,
        kind: "pf",
        input: ring_summary(a),
        pf: scalar_section(pf_ring(&f)),
        pa: scalar_section(pa_ring(a)),
        timing_ms: elapsed_ms(start),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EqcheckReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub inputs: [RingSummary; 2],
    pub coefficient_bound: u64,
    /// `equivalent`, `not_equivalent` or `unknown`.
    pub verdict: &'static str,
    pub elementarily_equivalent: TriState,
    pub reason: Option<String>,
    /// Images of the generators of `Z₀ × A` in `Z₀ × B`.
    pub witness: Option<Vec<Vec<JsonInt>>>,
    pub isomorphic: TriState,
    pub isomorphism_reason: Option<String>,
    pub timing_ms: f64,
}

pub fn eqcheck_report(a: &FdzRing, b: &FdzRing, limits: SearchLimits) -> EqcheckReport {
    let start = Instant::now();
    let (verdict, elementarily_equivalent, reason, witness) = match equivalence_verdict(a, b, limits) {
        EquivalenceVerdict::Equivalent(w) => ("equivalent", TriState::Yes, None, Some(json_matrix(&w.images))),
        EquivalenceVerdict::NotEquivalent(r) => ("not_equivalent", TriState::No, Some(r), None),
        EquivalenceVerdict::Unknown(r) => ("unknown", TriState::Unknown, Some(r), None),
    };
    let (isomorphic, isomorphism_reason) = match iso_search(a, b, limits) {
        IsoOutcome::Yes(_) => (TriState::Yes, None),
        IsoOutcome::No(r) => (TriState::No, Some(r)),
        IsoOutcome::Unknown(r) => (TriState::Unknown, Some(r)),
    };
    EqcheckReport {
        schema: SCHEMA,
        kind: "eqcheck",
        inputs: [ring_summary(a), ring_summary(b)],
        coefficient_bound: limits.coeff_bound,
        verdict,
        elementarily_equivalent,
        reason,
        witness,
        isomorphic,
        isomorphism_reason,
        timing_ms: elapsed_ms(start),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentJson {
    pub order: JsonInt,
    pub value: Vec<JsonInt>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SideConditionJson {
    pub bound: u32,
    pub holds: bool,
    pub failing_modulus: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SixTermJson {
    pub verdict: TriState,
    pub reason: Option<String>,
    pub checks: Vec<CheckLine>,
}

impl From<SixTermReport> for SixTermJson {
    fn from(r: SixTermReport) -> Self {
        SixTermJson { verdict: r.verdict, reason: r.reason, checks: r.checks }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DeformReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub input: RingSummary,
    pub g: Vec<ComponentJson>,
    pub ring_file: String,
    pub deformed: RingSummary,
    pub addition_rank: usize,
    pub invariant_profile_equal: TriState,
    pub side_condition: SideConditionJson,
    pub sixterm: Option<SixTermJson>,
    pub timing_ms: f64,
}

pub fn deform_report(spec: &DeformationSpec, check_sixterm: bool, limits: SearchLimits) -> Result<DeformReport> {
    let start = Instant::now();
    let d = build_deformation(spec)?;
    let sixterm = if check_sixterm { Some(verify_sixterm(&spec.base, &d.ring, limits)?.into()) } else { None };
    let same_profile = invariant_profile(&spec.base).first_mismatch(&invariant_profile(&d.ring)).is_none();
    Ok(DeformReport {
        schema: SCHEMA,
        kind: "deform",
        input: ring_summary(&spec.base),
        g: spec.g.iter().map(|c| ComponentJson { order: JsonInt(c.order.clone()), value: json_ints(&c.value) }).collect(),
        ring_file: serialize_ring(&d.ring),
        deformed: ring_summary(&d.ring),
        addition_rank: d.addition_rank,
        invariant_profile_equal: TriState::from_bool(same_profile),
        side_condition: SideConditionJson {
            bound: d.side_condition.bound,
            holds: d.side_condition.holds(),
            failing_modulus: d.side_condition.failing_modulus,
        },
        sixterm,
        timing_ms: elapsed_ms(start),
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelcheckResult {
    Truth(bool),
    DefinedSet(Vec<Vec<JsonInt>>),
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelcheckReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub input: RingSummary,
    pub modulus: JsonInt,
    pub quotient: RingSummary,
    pub formula: String,
    pub free_variables: Vec<String>,
    pub result: ModelcheckResult,
    pub timing_ms: f64,
}

/// Evaluate a sentence, or compute the set defined by a one-variable
/// formula, in `A/nA`.
pub fn modelcheck_report(a: &FdzRing, n: &Int, f: &Formula) -> Result<ModelcheckReport> {
    let start = Instant::now();
    let q = a.reduce_mod_n(n);
    let model = Model::new(&q)?;
    let free = f.free_vars();
    let result = if free.is_empty() {
        ModelcheckResult::Truth(model.evaluate(f, &[])?)
    } else {
        ModelcheckResult::DefinedSet(model.defined_set(f)?.iter().map(|x| json_ints(x)).collect())
    };
    Ok(ModelcheckReport {
        schema: SCHEMA,
        kind: "modelcheck",
        input: ring_summary(a),
        modulus: JsonInt(n.clone()),
        quotient: ring_summary(&q),
        formula: f.to_string(),
        free_variables: free,
        result,
        timing_ms: elapsed_ms(start),
    })
}

/// Drop every `timing_ms` field, recursively.
pub fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("timing_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}
