//! Lemma-keyed verification suites over exhaustive enumerations and seeded
//! fuzz batches, with JSON reports and replayable counterexamples.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::disk::Subsurface;
use crate::enumerate::{enumerate_combined, enumerate_subsurfaces};
use crate::fuzz::{
    glued_path_instance, glued_subsurface_instance, instance_rng, twisted_path_instance, twisted_pool, GluedSampler,
    TwistedConfig,
};
use crate::moves::{apply, certified_lower_bound, distance, successors, Caps, DistanceMode, ElementaryMove};
use crate::paths::{cyclic_obstruction_check, decompose_path, SplittingResult, Verdict};
use crate::seifert::{build_complex, glued_chi, GluedSubsurface};
use crate::Quarters;

pub const SCHEMA: u32 = 1;

/// Largest disk and chord cap for suites over single subsurfaces.
pub const UNARY_CAPS: (u32, usize) = (10, 4);
/// Largest disk and chord cap for suites over moves or pairs.
pub const PAIRWISE_CAPS: (u32, usize) = (8, 3);
pub const MAX_SAMPLES: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("unknown lemma id `{0}`")]
    UnknownLemma(String),
    #[error("{what} = {value} exceeds the cap {cap} for `{lemma}`")]
    CapExceeded { lemma: String, what: &'static str, value: u64, cap: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// How a lemma is checked.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SuiteKind {
    Unary,
    Pairwise,
    Fuzzed,
    Complexes,
}

/// A registered lemma: id, suite kind, perturbable constants with defaults.
#[derive(Clone, Copy, Debug)]
pub struct Lemma {
    pub id: &'static str,
    pub kind: SuiteKind,
    pub knobs: &'static [(&'static str, i64)],
    pub summary: &'static str,
}

pub const LEMMAS: &[Lemma] = &[
    Lemma { id: "chi-nonpositivity", kind: SuiteKind::Unary, knobs: &[("bound", 0)], summary: "adjusted chi <= 0" },
    Lemma {
        id: "chi-additivity",
        kind: SuiteKind::Unary,
        knobs: &[],
        summary: "chi(O) + chi(complement O) = 1 - N/4",
    },
    Lemma { id: "chi-constancy", kind: SuiteKind::Unary, knobs: &[], summary: "chi and M unchanged by hat" },
    Lemma {
        id: "chi-monotonicity",
        kind: SuiteKind::Pairwise,
        knobs: &[],
        summary: "|chi| grows along nested combined diagrams",
    },
    Lemma {
        id: "rotation-equivariance",
        kind: SuiteKind::Unary,
        knobs: &[("steps", 2)],
        summary: "M(rotate O) = M(O) shifted, chi invariant",
    },
    Lemma {
        id: "move-lipschitz",
        kind: SuiteKind::Pairwise,
        knobs: &[("bound", 1)],
        summary: "raw chi changes by at most 1 per move",
    },
    Lemma {
        id: "hat-distance-3",
        kind: SuiteKind::Pairwise,
        knobs: &[("bound", 3)],
        summary: "hats of adjacent states are within 3 moves",
    },
    Lemma {
        id: "m-erosion-6",
        kind: SuiteKind::Pairwise,
        knobs: &[("bound", 6)],
        summary: "a move removes at most 6 minimal connected pairs",
    },
    Lemma { id: "m-vs-chi", kind: SuiteKind::Unary, knobs: &[], summary: "|M| >= |chi|" },
    Lemma {
        id: "disjoint-rotation",
        kind: SuiteKind::Pairwise,
        knobs: &[("bound", 0)],
        summary: "M of a disjoint subsurface misses M of the rotated one",
    },
    Lemma {
        id: "glued-additivity",
        kind: SuiteKind::Fuzzed,
        knobs: &[],
        summary: "glued chi equals the direct glued formula",
    },
    Lemma {
        id: "decompose-6x",
        kind: SuiteKind::Fuzzed,
        knobs: &[("bound", 6), ("length", 5)],
        summary: "piece paths cost at most 6 counted moves per glued move",
    },
    Lemma {
        id: "cyclic-obstruction",
        kind: SuiteKind::Fuzzed,
        knobs: &[("bound", 36)],
        summary: "splitting twisted paths have max |chi| <= 36 eqLength",
    },
    Lemma {
        id: "hat-confluence",
        kind: SuiteKind::Unary,
        knobs: &[("shuffles", 20)],
        summary: "hat is independent of elimination order",
    },
    Lemma {
        id: "cw-invariants",
        kind: SuiteKind::Complexes,
        knobs: &[("maxQ", 12)],
        summary: "chi, boundary, genus and orbit lengths of the torus knot complex",
    },
];

pub fn lemma(id: &str) -> Result<&'static Lemma, VerifyError> {
    LEMMAS.iter().find(|l| l.id == id).ok_or_else(|| VerifyError::UnknownLemma(id.to_string()))
}

/// Parameters of one verification run. `threads` is not part of the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Parameters {
    #[serde(rename = "N")]
    pub n: u32,
    pub max_chords: usize,
    pub seed: u64,
    /// Chord cap for distance searches.
    pub cap: Option<usize>,
    pub samples: Option<usize>,
    pub p: u32,
    pub q: u32,
    pub perturb: BTreeMap<String, i64>,
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for Parameters {
    fn default() -> Self {
        Parameters {
            n: 8,
            max_chords: 3,
            seed: 0,
            cap: None,
            samples: None,
            p: 2,
            q: 3,
            perturb: BTreeMap::new(),
            threads: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum Outcome {
    Pass,
    Fail { counterexample: Value },
    Inexact { capped: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub schema: u32,
    pub lemma_id: String,
    pub parameters: Parameters,
    pub instances_checked: usize,
    pub outcome: Outcome,
    /// Seconds.
    pub wall_time: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// The report with `wallTime` zeroed, for byte comparisons.
    pub fn without_time(&self) -> Self {
        VerificationReport { wall_time: 0.0, ..self.clone() }
    }
}

enum Check {
    Ok,
    Capped,
    Fail(Value),
}

fn knob(lemma: &Lemma, params: &Parameters, key: &str) -> i64 {
    params
        .perturb
        .get(key)
        .copied()
        .or_else(|| lemma.knobs.iter().find(|k| k.0 == key).map(|k| k.1))
        .expect("knob is registered")
}

fn validate(lemma: &Lemma, params: &Parameters) -> Result<(), VerifyError> {
    for key in params.perturb.keys() {
        if !lemma.knobs.iter().any(|k| k.0 == key) {
            return Err(VerifyError::InvalidParameters(format!("`{}` has no constant `{key}`", lemma.id)));
        }
    }
    let exceeded = |what, value: u64, cap: u64| {
        (value > cap).then(|| VerifyError::CapExceeded { lemma: lemma.id.to_string(), what, value, cap })
    };
    let disk_caps = match lemma.kind {
        SuiteKind::Unary => Some(UNARY_CAPS),
        SuiteKind::Pairwise => Some(PAIRWISE_CAPS),
        SuiteKind::Fuzzed if lemma.id == "cyclic-obstruction" => Some(PAIRWISE_CAPS),
        _ => None,
    };
    if let Some((n_cap, chord_cap)) = disk_caps {
        if params.n < 2 || params.n % 2 == 1 {
            return Err(VerifyError::InvalidParameters(format!("N = {} must be even and at least 2", params.n)));
        }
        if let Some(e) = exceeded("N", params.n.into(), n_cap.into())
            .or_else(|| exceeded("maxChords", params.max_chords as u64, chord_cap as u64))
        {
            return Err(e);
        }
    }
    if lemma.kind == SuiteKind::Fuzzed && lemma.id != "cyclic-obstruction" {
        build_complex(params.p, params.q).map_err(|e| VerifyError::InvalidParameters(e.to_string()))?;
        if let Some(e) = exceeded("maxChords", params.max_chords as u64, PAIRWISE_CAPS.1 as u64)
            .or_else(|| exceeded("q", params.q.into(), 5))
        {
            return Err(e);
        }
    }
    if let Some(e) = exceeded("samples", params.samples.unwrap_or(0) as u64, MAX_SAMPLES as u64) {
        return Err(e);
    }
    if lemma.id == "decompose-6x" && knob(lemma, params, "length") < 1 {
        return Err(VerifyError::InvalidParameters("length must be positive".into()));
    }
    if lemma.id == "cw-invariants" {
        if let Some(e) = exceeded("maxQ", knob(lemma, params, "maxQ").max(0) as u64, 30) {
            return Err(e);
        }
    }
    Ok(())
}

/// Run the suite for `lemma_id`.
pub fn run_verification(lemma_id: &str, params: &Parameters) -> Result<VerificationReport, VerifyError> {
    let lemma = lemma(lemma_id)?;
    validate(lemma, params)?;
    let start = Instant::now();
    let (instances, checks) = match params.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| VerifyError::InvalidParameters(e.to_string()))?
            .install(|| run_suite(lemma, params)),
        None => run_suite(lemma, params),
    };
    let mut capped = 0;
    let mut outcome = None;
    for c in checks {
        match c {
            Check::Ok => {}
            Check::Capped => capped += 1,
            Check::Fail(v) => {
                outcome = Some(Outcome::Fail { counterexample: v });
                break;
            }
        }
    }
    let outcome = outcome.unwrap_or(if capped > 0 || instances == 0 { Outcome::Inexact { capped } } else { Outcome::Pass });
    Ok(VerificationReport {
        schema: SCHEMA,
        lemma_id: lemma.id.to_string(),
        parameters: params.clone(),
        instances_checked: instances,
        outcome,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn scan<T: Sync>(items: &[T], check: impl Fn(usize, &T) -> Check + Sync) -> (usize, Vec<Check>) {
    let checks: Vec<Check> = items.par_iter().enumerate().map(|(i, t)| check(i, t)).collect();
    (items.len(), checks)
}

fn states(params: &Parameters) -> Vec<Subsurface> {
    enumerate_subsurfaces(params.n, params.max_chords, false)
}

fn run_suite(lemma: &Lemma, params: &Parameters) -> (usize, Vec<Check>) {
    let ctx = Context { lemma, params };
    match lemma.kind {
        SuiteKind::Unary => scan(&states(params), |_, s| ctx.state(s)),
        SuiteKind::Pairwise if lemma.id == "chi-monotonicity" || lemma.id == "disjoint-rotation" => {
            let essential = lemma.id == "disjoint-rotation";
            let total = if essential { 2 * params.max_chords } else { params.max_chords };
            let diagrams = enumerate_combined(params.n, total, essential, Some(params.max_chords));
            scan(&diagrams, |_, d| ctx.pair(&d.first(), &d.second(), &d.outer()))
        }
        SuiteKind::Pairwise => scan(&states(params), |_, s| ctx.moves_from(s)),
        SuiteKind::Fuzzed => {
            let indices: Vec<usize> = (0..ctx.samples()).collect();
            match lemma.id {
                "cyclic-obstruction" => {
                    let cfg = ctx.twisted_config();
                    let pool = twisted_pool(&cfg);
                    scan(&indices, |_, &i| ctx.twisted(&cfg, &pool, i))
                }
                _ => {
                    let cx = build_complex(params.p, params.q).expect("validated");
                    let sampler = GluedSampler::new(&cx, params.max_chords);
                    scan(&indices, |_, &i| ctx.glued(&sampler, i))
                }
            }
        }
        SuiteKind::Complexes => {
            let max_q = knob(lemma, params, "maxQ") as u32;
            let pairs: Vec<(u32, u32)> = (2..=max_q)
                .flat_map(|q| (2..q).map(move |p| (p, q)))
                .filter(|&(p, q)| gcd(p, q) == 1)
                .collect();
            scan(&pairs, |_, &(p, q)| complex_check(p, q))
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn complex_check(p: u32, q: u32) -> Check {
    let Ok(cx) = build_complex(p, q) else {
        return Check::Fail(json!({ "p": p, "q": q, "reason": "complex construction failed" }));
    };
    let s = cx.summary();
    let (p64, q64) = (i64::from(p), i64::from(q));
    let lengths_ok = s.orbit_lengths.iter().all(|&l| [p, q, p * q].contains(&(l as u32)))
        && [p, q, p * q].iter().all(|&l| s.orbit_lengths.contains(&(l as usize)));
    if s.euler_characteristic == p64 + q64 - p64 * q64
        && s.boundary_components == 1
        && s.genus == (p64 - 1) * (q64 - 1) / 2
        && lengths_ok
    {
        Check::Ok
    } else {
        Check::Fail(json!({ "p": p, "q": q, "summary": s }))
    }
}

struct Context<'a> {
    lemma: &'a Lemma,
    params: &'a Parameters,
}

fn state_json(s: &Subsurface) -> Value {
    serde_json::to_value(s).expect("subsurfaces serialize")
}

fn move_fail(s: &Subsurface, mv: &ElementaryMove, t: &Subsurface, detail: Value) -> Check {
    Check::Fail(json!({ "state": state_json(s), "move": mv, "result": state_json(t), "detail": detail }))
}

fn pairs_json(set: &std::collections::BTreeSet<(u32, u32)>) -> Value {
    json!(set.iter().collect::<Vec<_>>())
}

impl Context<'_> {
    fn knob(&self, key: &str) -> i64 {
        knob(self.lemma, self.params, key)
    }

    fn samples(&self) -> usize {
        self.params.samples.unwrap_or(match self.lemma.id {
            "glued-additivity" => 200,
            _ => 1000,
        })
    }

    fn twisted_config(&self) -> TwistedConfig {
        let base = TwistedConfig::default();
        TwistedConfig {
            n: self.params.n,
            max_chords: self.params.max_chords,
            start_chords: self.params.max_chords.min(base.start_chords),
            ..base
        }
    }

    fn state(&self, s: &Subsurface) -> Check {
        let n = i64::from(s.point_count());
        let chi = s.adjusted_chi();
        let fail = |detail: Value| Check::Fail(json!({ "state": state_json(s), "detail": detail }));
        match self.lemma.id {
            "chi-nonpositivity" => {
                if chi <= Quarters::from_int(self.knob("bound")) {
                    Check::Ok
                } else {
                    fail(json!({ "chi": chi }))
                }
            }
            "chi-additivity" => {
                let other = s.complement().adjusted_chi();
                if chi + other == Quarters(4 - n) {
                    Check::Ok
                } else {
                    fail(json!({ "chi": chi, "complementChi": other }))
                }
            }
            "chi-constancy" => {
                let hat = s.hat();
                if hat.adjusted_chi() == chi && s.essential_part().m_set() == s.m_set() {
                    Check::Ok
                } else {
                    fail(json!({ "chi": chi, "hat": state_json(&hat), "hatChi": hat.adjusted_chi() }))
                }
            }
            "rotation-equivariance" => {
                let steps = self.knob("steps");
                let Ok(r) = s.rotate(steps) else {
                    return fail(json!({ "reason": "rotation rejected", "steps": steps }));
                };
                let shifted: std::collections::BTreeSet<(u32, u32)> = s
                    .m_set()
                    .into_iter()
                    .map(|(i, j)| {
                        let shift = |e: u32| ((i64::from(e) - 1 + steps).rem_euclid(n) + 1) as u32;
                        let (a, b) = (shift(i), shift(j));
                        (a.min(b), a.max(b))
                    })
                    .collect();
                let commutes = s.complement().rotate(steps).ok() == Some(r.complement())
                    && s.essential_part().rotate(steps).ok() == Some(r.essential_part())
                    && s.hat().rotate(steps).ok() == Some(r.hat());
                if r.adjusted_chi() == chi && r.m_set() == shifted && commutes {
                    Check::Ok
                } else {
                    fail(json!({ "rotated": state_json(&r), "expectedM": pairs_json(&shifted), "rotatedM": pairs_json(&r.m_set()) }))
                }
            }
            "m-vs-chi" => {
                let m = s.m_set().len() as i64;
                if Quarters::from_int(m) >= chi.abs() {
                    Check::Ok
                } else {
                    fail(json!({ "chi": chi, "m": pairs_json(&s.m_set()) }))
                }
            }
            "hat-confluence" => {
                let hat = s.hat();
                let mut rng = instance_rng(self.params.seed, fingerprint(s));
                for shuffle in 0..self.knob("shuffles") {
                    let other = s.hat_with_order(|k| rng.gen_range(0..k));
                    if other != hat {
                        return fail(json!({ "shuffle": shuffle, "hat": state_json(&hat), "other": state_json(&other) }));
                    }
                }
                Check::Ok
            }
            _ => unreachable!("unary lemma {}", self.lemma.id),
        }
    }

    fn pair(&self, first: &Subsurface, second: &Subsurface, outer: &Subsurface) -> Check {
        let fail = |detail: Value| {
            Check::Fail(json!({
                "first": state_json(first),
                "second": state_json(second),
                "outer": state_json(outer),
                "detail": detail,
            }))
        };
        match self.lemma.id {
            "chi-monotonicity" => {
                let (a, b) = (first.adjusted_chi().abs(), outer.adjusted_chi().abs());
                let (c, d) = (second.adjusted_chi().abs(), first.complement().adjusted_chi().abs());
                if a <= b && c <= d {
                    Check::Ok
                } else {
                    fail(json!({ "inner": [a, c], "outer": [b, d] }))
                }
            }
            "disjoint-rotation" => {
                if !first.is_essential() || !second.is_essential() {
                    return Check::Ok;
                }
                let Ok(rotated) = first.rotate(2) else {
                    return fail(json!({ "reason": "rotation rejected" }));
                };
                let shared: Vec<_> = second.m_set().intersection(&rotated.m_set()).copied().collect();
                let lower = certified_lower_bound(second, &rotated);
                let needed = first.adjusted_chi().abs().ceil_div(6);
                if shared.len() as i64 <= self.knob("bound") && i64::from(lower) >= needed {
                    Check::Ok
                } else {
                    fail(json!({ "shared": shared, "lowerBound": lower, "needed": needed }))
                }
            }
            _ => unreachable!("pair lemma {}", self.lemma.id),
        }
    }

    fn moves_from(&self, s: &Subsurface) -> Check {
        let mut capped = false;
        let mut hats = HashSet::new();
        for (mv, t) in successors(s, usize::MAX).moves {
            if self.lemma.id == "hat-distance-3" && !hats.insert(t.hat()) {
                continue;
            }
            match self.single_move(s, &mv, &t) {
                Check::Ok => {}
                Check::Capped => capped = true,
                fail => return fail,
            }
        }
        if capped {
            Check::Capped
        } else {
            Check::Ok
        }
    }

    fn single_move(&self, s: &Subsurface, mv: &ElementaryMove, t: &Subsurface) -> Check {
        let bound = self.knob("bound");
        match self.lemma.id {
            "move-lipschitz" => {
                let delta = (s.raw_chi() - t.raw_chi()).abs();
                if delta <= Quarters::from_int(bound) {
                    Check::Ok
                } else {
                    move_fail(s, mv, t, json!({ "rawChiChange": delta }))
                }
            }
            "m-erosion-6" => {
                let (a, b) = (s.m_set(), t.m_set());
                let lost = a.difference(&b).count();
                let gained = b.difference(&a).count();
                if lost.max(gained) as i64 <= bound {
                    Check::Ok
                } else {
                    move_fail(s, mv, t, json!({ "lost": lost, "gained": gained }))
                }
            }
            "hat-distance-3" => {
                let (a, b) = (s.hat(), t.hat());
                let bound = bound.max(0) as u32;
                let needed = (a.chord_count() + b.chord_count()).div_ceil(2) + bound as usize;
                let cap = self.params.cap.unwrap_or(needed).max(a.chord_count()).max(b.chord_count());
                let caps = Caps { max_chords: cap, max_depth: Some(bound) };
                let r = distance(&a, &b, DistanceMode::Plain, caps).expect("cap covers both inputs");
                match r.value {
                    Some(v) if v <= bound => Check::Ok,
                    _ if cap < needed => Check::Capped,
                    _ => move_fail(s, mv, t, json!({ "hats": [state_json(&a), state_json(&b)], "exceeds": bound })),
                }
            }
            _ => unreachable!("move lemma {}", self.lemma.id),
        }
    }

    fn glued(&self, sampler: &GluedSampler, index: usize) -> Check {
        let seed = self.params.seed;
        match self.lemma.id {
            "glued-additivity" => {
                let g = glued_subsurface_instance(sampler, seed, index);
                let chi = glued_chi(&g);
                let full = GluedSubsurface::full(sampler.complex());
                let sigma = Quarters::from_int(sampler.complex().euler_characteristic());
                if chi.total == g.direct_chi() && glued_chi(&full).total == sigma {
                    Check::Ok
                } else {
                    Check::Fail(json!({
                        "index": index,
                        "subsurface": g.to_json(),
                        "gluedChi": chi.total,
                        "directChi": g.direct_chi(),
                    }))
                }
            }
            "decompose-6x" => {
                let path = glued_path_instance(sampler, seed, index, self.knob("length") as usize);
                let fail = |detail: Value| Check::Fail(json!({ "index": index, "path": path, "detail": detail }));
                match decompose_path(&path) {
                    Err(e) => fail(json!({ "error": e.to_string() })),
                    Ok(d) if d.eq_length_sum as i64 <= self.knob("bound") * path.len() as i64 => Check::Ok,
                    Ok(d) => fail(json!({ "eqLengthSum": d.eq_length_sum, "perStep": d.per_step })),
                }
            }
            _ => unreachable!("glued lemma {}", self.lemma.id),
        }
    }

    fn twisted(&self, cfg: &TwistedConfig, pool: &[Subsurface], index: usize) -> Check {
        let (path, _) = twisted_path_instance(cfg, pool, self.params.seed, index);
        let fail = |detail: Value| {
            Check::Fail(json!({ "index": index, "path": path.to_json(cfg.twist), "detail": detail }))
        };
        let r = match cyclic_obstruction_check(&path, cfg.twist) {
            Ok(r) => r,
            Err(e) => return fail(json!({ "error": e.to_string() })),
        };
        let bound = Quarters::from_int(self.knob("bound") * r.eq_length as i64);
        let ok = match (&r.splitting, r.verdict) {
            (SplittingResult::Splits(_), Verdict::Pass | Verdict::Fail) => r.certificate_checked && r.max_abs_chi <= bound,
            (SplittingResult::NoSplitting(_), verdict) => verdict == Verdict::NoSplitting && r.certificate_checked,
            (SplittingResult::Splits(_), Verdict::NoSplitting) => false,
        };
        if ok {
            Check::Ok
        } else {
            fail(serde_json::to_value(&r).expect("reports serialize"))
        }
    }
}

/// Stable per-state index for seeding the confluence shuffles.
fn fingerprint(s: &Subsurface) -> usize {
    let text = serde_json::to_string(s).expect("subsurfaces serialize");
    text.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3)) as usize
}

/// Re-run the instance recorded in a failing report. Returns `true` when it
/// still fails.
pub fn replay(report: &VerificationReport) -> Result<bool, VerifyError> {
    let Outcome::Fail { counterexample } = &report.outcome else {
        return Ok(false);
    };
    let lemma = lemma(&report.lemma_id)?;
    let params = &report.parameters;
    validate(lemma, params)?;
    let ctx = Context { lemma, params };
    let bad = |what: &str| VerifyError::InvalidParameters(format!("counterexample lacks {what}"));
    let sub = |key: &str| -> Result<Subsurface, VerifyError> {
        serde_json::from_value(counterexample.get(key).cloned().ok_or_else(|| bad(key))?).map_err(|_| bad(key))
    };
    let index = || counterexample.get("index").and_then(Value::as_u64).map(|i| i as usize).ok_or_else(|| bad("index"));
    let check = match lemma.kind {
        SuiteKind::Unary => ctx.state(&sub("state")?),
        SuiteKind::Pairwise if lemma.id == "chi-monotonicity" || lemma.id == "disjoint-rotation" => {
            ctx.pair(&sub("first")?, &sub("second")?, &sub("outer")?)
        }
        SuiteKind::Pairwise => {
            let s = sub("state")?;
            let mv: ElementaryMove = serde_json::from_value(counterexample.get("move").cloned().ok_or_else(|| bad("move"))?)
                .map_err(|_| bad("move"))?;
            let t = apply(&s, &mv).map_err(|e| VerifyError::InvalidParameters(e.to_string()))?.result;
            ctx.single_move(&s, &mv, &t)
        }
        SuiteKind::Fuzzed if lemma.id == "cyclic-obstruction" => {
            let cfg = ctx.twisted_config();
            ctx.twisted(&cfg, &twisted_pool(&cfg), index()?)
        }
        SuiteKind::Fuzzed => {
            let cx = build_complex(params.p, params.q).map_err(|e| VerifyError::InvalidParameters(e.to_string()))?;
            ctx.glued(&GluedSampler::new(&cx, params.max_chords), index()?)
        }
        SuiteKind::Complexes => {
            let get = |k: &str| counterexample.get(k).and_then(Value::as_u64).ok_or_else(|| bad(k));
            complex_check(get("p")? as u32, get("q")? as u32)
        }
    };
    Ok(matches!(check, Check::Fail(_)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, max_chords: usize) -> Parameters {
        Parameters { n, max_chords, ..Parameters::default() }
    }

    #[test]
    fn additivity_counts_the_enumeration() {
        let r = run_verification("chi-additivity", &params(6, 3)).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
        assert_eq!(r.instances_checked, enumerate_subsurfaces(6, 3, false).len());
    }

    #[test]
    fn perturbed_erosion_fails_and_replays() {
        let mut p = params(6, 2);
        p.perturb.insert("bound".into(), 1);
        let r = run_verification("m-erosion-6", &p).unwrap();
        assert!(matches!(r.outcome, Outcome::Fail { .. }));
        assert!(replay(&r).unwrap());
    }

    #[test]
    fn single_thread_matches() {
        let a = run_verification("hat-confluence", &params(6, 2)).unwrap();
        let b = run_verification("hat-confluence", &Parameters { threads: Some(1), ..params(6, 2) }).unwrap();
        assert!(a.passed());
        let text = |r: &VerificationReport| serde_json::to_string(&r.without_time()).unwrap();
        assert_eq!(text(&a), text(&b));
    }

    #[test]
    fn errors() {
        assert_eq!(
            run_verification("nope", &Parameters::default()).unwrap_err(),
            VerifyError::UnknownLemma("nope".into())
        );
        assert!(matches!(
            run_verification("m-erosion-6", &params(10, 3)),
            Err(VerifyError::CapExceeded { what: "N", .. })
        ));
        let mut p = params(6, 2);
        p.perturb.insert("wobble".into(), 1);
        assert!(matches!(run_verification("m-erosion-6", &p), Err(VerifyError::InvalidParameters(_))));
        assert!(matches!(run_verification("chi-additivity", &params(5, 2)), Err(VerifyError::InvalidParameters(_))));
    }

    #[test]
    fn every_lemma_is_reachable() {
        assert_eq!(LEMMAS.len(), 15);
        let r = run_verification("cw-invariants", &Parameters::default()).unwrap();
        assert!(r.passed());
        let r = run_verification("glued-additivity", &Parameters { samples: Some(10), max_chords: 2, ..Parameters::default() }).unwrap();
        assert!(r.passed());
    }
}
