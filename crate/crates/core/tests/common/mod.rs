//! Shared fixtures, random instances, and brute-force oracles.
//!
//! The oracles are written from the metric and matching rules directly and
//! share no code with the library beyond the model types they read.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use e2ecov::extract_dynamic::{read_calls, FieldConfig, TraceFormat};
use e2ecov::matching::{match_call, MatchRule};
use e2ecov::model::{
    CallOutcome, CoverageReport, Endpoint, EndpointCall, EndpointInventory, EndpointRef,
    HttpMethod, ParamType, PathTemplate, Segment, TestManifest, TestWindow, Timestamp,
    UnmatchedReason,
};
use e2ecov::pipeline;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use regex::Regex;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

/// Loads a fixture directory holding inventory.json, tests.json and a trace
/// file, and runs the library pipeline on it.
pub fn load_case(
    dir: &str,
    traces: &str,
    format: TraceFormat,
) -> (EndpointInventory, pipeline::Analysis) {
    let inv = EndpointInventory::from_json(&read_fixture(&format!("{dir}/inventory.json"))).unwrap();
    let manifest = TestManifest::from_json(&read_fixture(&format!("{dir}/tests.json"))).unwrap();
    let ingested = read_calls(
        &read_fixture(&format!("{dir}/{traces}")),
        format,
        &FieldConfig::default(),
    );
    assert!(ingested.errors.is_empty(), "{:?}", ingested.errors);
    let analysis = pipeline::analyze(&inv, &ingested.calls, &manifest, 0).unwrap();
    (inv, analysis)
}

pub fn worked_example() -> (EndpointInventory, pipeline::Analysis) {
    load_case("worked_example", "calls.jsonl", TraceFormat::Jsonl)
}

pub fn case_study() -> (EndpointInventory, pipeline::Analysis) {
    load_case("case_study", "traces.es.jsonl", TraceFormat::SkywalkingEs)
}

// ---------------------------------------------------------------------------
// Coverage instances

const TYPES: [ParamType; 5] = [
    ParamType::Integer,
    ParamType::Number,
    ParamType::Boolean,
    ParamType::String,
    ParamType::Opaque,
];

fn type_name(t: ParamType) -> &'static str {
    match t {
        ParamType::Integer => "integer",
        ParamType::Number => "number",
        ParamType::Boolean => "boolean",
        ParamType::String => "string",
        ParamType::Opaque => "opaque",
    }
}

fn sample_value(t: ParamType) -> &'static str {
    match t {
        ParamType::Integer => "42",
        ParamType::Number => "2.5",
        ParamType::Boolean => "true",
        ParamType::String => "abc",
        ParamType::Opaque => "zz-9",
    }
}

#[derive(Debug, Clone)]
pub struct SvcSpec {
    pub gateway: bool,
    /// Per endpoint: an optional trailing parameter type.
    pub endpoints: Vec<Option<ParamType>>,
}

#[derive(Debug, Clone, Copy)]
pub enum CallSpec {
    /// Call endpoint `ep` of service `svc`, optionally from service `from`.
    Hit { svc: usize, ep: usize, from: Option<usize> },
    /// A URL on service `svc` that fits none of its endpoints.
    Miss { svc: usize },
    /// A call to a service that is not in the inventory.
    Ghost,
    /// A call routed to the first gateway service, if any.
    Gateway { n: usize },
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub services: Vec<SvcSpec>,
    pub tests: Vec<Vec<CallSpec>>,
}

fn svc_strategy() -> impl Strategy<Value = SvcSpec> {
    (
        prop::bool::weighted(0.15),
        prop::collection::vec(prop::option::of(0usize..5), 0..=5),
    )
        .prop_map(|(gateway, eps)| SvcSpec {
            gateway,
            endpoints: eps.into_iter().map(|o| o.map(|i| TYPES[i])).collect(),
        })
}

fn call_strategy() -> impl Strategy<Value = CallSpec> {
    prop_oneof![
        6 => (0usize..8, 0usize..5, prop::option::of(0usize..8))
            .prop_map(|(svc, ep, from)| CallSpec::Hit { svc, ep, from }),
        1 => (0usize..8).prop_map(|svc| CallSpec::Miss { svc }),
        1 => Just(CallSpec::Ghost),
        1 => (0usize..4).prop_map(|n| CallSpec::Gateway { n }),
    ]
}

/// At most 8 services with at most 5 endpoints each, at most 6 tests.
pub fn instance_strategy() -> impl Strategy<Value = Instance> {
    (
        prop::collection::vec(svc_strategy(), 1..=8),
        prop::collection::vec(prop::collection::vec(call_strategy(), 0..10), 0..=6),
    )
        .prop_map(|(services, tests)| Instance { services, tests })
}

fn method_of(ep: usize) -> HttpMethod {
    if ep.is_multiple_of(2) {
        HttpMethod::Get
    } else {
        HttpMethod::Post
    }
}

impl Instance {
    pub fn service_name(i: usize) -> String {
        format!("s{i}")
    }

    pub fn inventory(&self) -> EndpointInventory {
        let mut inv = EndpointInventory::new();
        for (i, s) in self.services.iter().enumerate() {
            let name = Self::service_name(i);
            inv.set_gateway(&name, s.gateway).unwrap();
            for (j, p) in s.endpoints.iter().enumerate() {
                let mut segs = vec![Segment::literal(name.clone()), Segment::literal(format!("e{j}"))];
                if let Some(t) = p {
                    segs.push(Segment::param("p", *t));
                }
                let e = Endpoint::new(&name, method_of(j), PathTemplate::new(segs).unwrap());
                assert!(inv.insert(e).unwrap());
            }
        }
        inv
    }

    pub fn test_id(t: usize) -> String {
        format!("t{t}")
    }

    pub fn windows(&self) -> Vec<TestWindow> {
        (0..self.tests.len())
            .map(|t| {
                let start = t as i64 * 1000;
                TestWindow::new(
                    Self::test_id(t),
                    Timestamp::from_micros(start),
                    Timestamp::from_micros(start + 999),
                )
                .unwrap()
            })
            .collect()
    }

    fn gateway_index(&self) -> Option<usize> {
        self.services.iter().position(|s| s.gateway)
    }

    /// Resolves a call spec to a concrete call at `micros`.
    pub fn call(&self, spec: CallSpec, micros: i64) -> EndpointCall {
        let ts = Timestamp::from_micros(micros);
        let n = self.services.len();
        match spec {
            CallSpec::Hit { svc, ep, from } => {
                let i = svc % n;
                let name = Self::service_name(i);
                let eps = &self.services[i].endpoints;
                let src = from.map(|f| EndpointRef::new(Self::service_name(f % n), HttpMethod::Get, "/caller"));
                if eps.is_empty() {
                    return EndpointCall::new(ts, src, EndpointRef::new(name.clone(), HttpMethod::Get, format!("/{name}/none")));
                }
                let j = ep % eps.len();
                let mut url = format!("/{name}/e{j}");
                if let Some(t) = eps[j] {
                    url.push('/');
                    url.push_str(sample_value(t));
                }
                EndpointCall::new(ts, src, EndpointRef::new(name, method_of(j), url))
            }
            CallSpec::Miss { svc } => {
                let name = Self::service_name(svc % n);
                EndpointCall::new(ts, None, EndpointRef::new(name, HttpMethod::Put, "/nowhere/x/y/z"))
            }
            CallSpec::Ghost => {
                EndpointCall::new(ts, None, EndpointRef::new("ghost", HttpMethod::Get, "/boo"))
            }
            CallSpec::Gateway { n: k } => match self.gateway_index() {
                Some(g) => EndpointCall::new(
                    ts,
                    None,
                    EndpointRef::new(Self::service_name(g), HttpMethod::Get, format!("/route/{k}")),
                ),
                None => EndpointCall::new(ts, None, EndpointRef::new("ghost", HttpMethod::Get, "/boo")),
            },
        }
    }

    pub fn calls(&self) -> Vec<EndpointCall> {
        let mut out = Vec::new();
        for (t, specs) in self.tests.iter().enumerate() {
            for (k, spec) in specs.iter().enumerate() {
                out.push(self.call(*spec, t as i64 * 1000 + k as i64));
            }
        }
        out
    }

    pub fn report(&self) -> Option<CoverageReport> {
        let manifest = TestManifest {
            tests: self.windows(),
        };
        if manifest.tests.is_empty() {
            // no windows: the report is built straight from empty traces
            return e2ecov::metrics::build_report(&self.inventory(), &[]).ok();
        }
        pipeline::analyze(&self.inventory(), &self.calls(), &manifest, 0)
            .ok()
            .map(|a| a.report)
    }
}

/// Coverage numbers computed by plain set arithmetic over the call specs.
#[derive(Debug, Clone, PartialEq)]
pub struct Oracle {
    pub universe: usize,
    pub suite: BTreeSet<String>,
    pub per_service: BTreeMap<String, (BTreeSet<String>, usize)>,
    pub per_test: BTreeMap<String, BTreeSet<String>>,
    pub matched_calls: usize,
    pub gateway_calls: usize,
    pub unmatched_calls: usize,
}

pub fn oracle(inst: &Instance) -> Oracle {
    let n = inst.services.len();
    let mut universe = 0;
    let mut per_service = BTreeMap::new();
    for (i, s) in inst.services.iter().enumerate() {
        if !s.gateway {
            universe += s.endpoints.len();
            per_service.insert(format!("s{i}"), (BTreeSet::new(), s.endpoints.len()));
        }
    }
    let gateway = inst.services.iter().position(|s| s.gateway);
    let mut o = Oracle {
        universe,
        suite: BTreeSet::new(),
        per_service,
        per_test: BTreeMap::new(),
        matched_calls: 0,
        gateway_calls: 0,
        unmatched_calls: 0,
    };
    for (t, specs) in inst.tests.iter().enumerate() {
        let mut tested = BTreeSet::new();
        for spec in specs {
            match *spec {
                CallSpec::Hit { svc, ep, .. } => {
                    let i = svc % n;
                    let s = &inst.services[i];
                    if s.gateway {
                        o.gateway_calls += 1;
                    } else if s.endpoints.is_empty() {
                        o.unmatched_calls += 1;
                    } else {
                        let j = ep % s.endpoints.len();
                        let m = if j.is_multiple_of(2) { "GET" } else { "POST" };
                        let key = match s.endpoints[j] {
                            Some(t) => format!("s{i}|{m}|s{i}/e{j}/{{{}}}", type_name(t)),
                            None => format!("s{i}|{m}|s{i}/e{j}"),
                        };
                        o.matched_calls += 1;
                        tested.insert(key.clone());
                        o.suite.insert(key.clone());
                        o.per_service.get_mut(&format!("s{i}")).unwrap().0.insert(key);
                    }
                }
                CallSpec::Miss { svc } => {
                    if inst.services[svc % n].gateway {
                        o.gateway_calls += 1;
                    } else {
                        o.unmatched_calls += 1;
                    }
                }
                CallSpec::Ghost => o.unmatched_calls += 1,
                CallSpec::Gateway { .. } => {
                    if gateway.is_some() {
                        o.gateway_calls += 1;
                    } else {
                        o.unmatched_calls += 1;
                    }
                }
            }
        }
        o.per_test.insert(format!("t{t}"), tested);
    }
    o
}

fn hundredths(num: usize, den: usize) -> i64 {
    // exact rounding of num/den*10000 using integers, half away from zero
    if den == 0 {
        return 0;
    }
    let scaled = num as u128 * 10000;
    ((scaled * 2 + den as u128) / (2 * den as u128)) as i64
}

/// min, max, mode (largest value among the most frequent) in hundredths of a
/// percent, by counting.
fn oracle_summary(pairs: &[(usize, usize)]) -> Option<(i64, i64, i64)> {
    if pairs.is_empty() {
        return None;
    }
    let vals: Vec<i64> = pairs.iter().map(|&(n, d)| hundredths(n, d)).collect();
    let best = vals
        .iter()
        .map(|v| (vals.iter().filter(|w| *w == v).count(), *v))
        .max()
        .unwrap();
    Some((*vals.iter().min().unwrap(), *vals.iter().max().unwrap(), best.1))
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), TestCaseError> {
    if got == want {
        Ok(())
    } else {
        Err(TestCaseError::fail(format!("{what}: got {got:?}, want {want:?}")))
    }
}

/// The library's report agrees with the oracle on every number.
pub fn check_report(inst: &Instance) -> Result<(), TestCaseError> {
    let o = oracle(inst);
    let report = inst.report();
    if o.universe == 0 {
        return eq("report for empty universe", report.is_none(), true);
    }
    let r = report.ok_or_else(|| TestCaseError::fail("report missing"))?;
    eq("universe", r.universe_count, o.universe)?;
    eq("suite tested", r.suite_tested_count, o.suite.len())?;
    eq("suite ratio", r.suite_coverage, o.suite.len() as f64 / o.universe as f64)?;
    eq("m_total", r.m_total, o.per_service.len())?;
    eq("t_total", r.t_total, o.per_test.len())?;
    eq(
        "services",
        r.per_service.keys().cloned().collect::<Vec<_>>(),
        o.per_service.keys().cloned().collect::<Vec<_>>(),
    )?;
    for (name, (tested, total)) in &o.per_service {
        let c = &r.per_service[name];
        eq("service tested", c.tested_count, tested.len())?;
        eq("service total", c.total_count, *total)?;
        let want = if *total == 0 { 0.0 } else { tested.len() as f64 / *total as f64 };
        eq("service ratio", c.ratio, want)?;
        let keys: BTreeSet<String> = c.tested_endpoints.iter().map(|k| k.to_string()).collect();
        eq("service endpoints", &keys, tested)?;
    }
    eq(
        "tests",
        r.per_test.keys().cloned().collect::<Vec<_>>(),
        o.per_test.keys().cloned().collect::<Vec<_>>(),
    )?;
    for (id, tested) in &o.per_test {
        let c = &r.per_test[id];
        eq("test tested", c.tested_count, tested.len())?;
        eq("test ratio", c.ratio, tested.len() as f64 / o.universe as f64)?;
        let keys: BTreeSet<String> = c.endpoints.iter().map(|k| k.to_string()).collect();
        eq("test endpoints", &keys, tested)?;
    }
    let svc_pairs: Vec<(usize, usize)> = o.per_service.values().map(|(t, n)| (t.len(), *n)).collect();
    let test_pairs: Vec<(usize, usize)> = o.per_test.values().map(|t| (t.len(), o.universe)).collect();
    let as_h = |s: Option<e2ecov::model::Summary>| {
        s.map(|s| {
            let h = |x: f64| (x * 100.0).round() as i64;
            (h(s.min), h(s.max), h(s.mode))
        })
    };
    eq("service stats", as_h(r.stats.per_service), oracle_summary(&svc_pairs))?;
    eq("test stats", as_h(r.stats.per_test), oracle_summary(&test_pairs))?;
    eq("matched calls", r.calls.matched, o.matched_calls)?;
    eq("gateway calls", r.calls.gateway, o.gateway_calls)?;
    eq("unmatched calls", r.calls.unmatched, o.unmatched_calls)?;
    Ok(())
}

/// Only the coverage numbers, for invariance comparisons.
pub fn metrics_view(r: &CoverageReport) -> String {
    serde_json::to_string(&(
        r.suite_coverage,
        r.suite_tested_count,
        &r.per_service,
        &r.per_test,
        &r.stats,
    ))
    .unwrap()
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what()))
    }
}

/// Range, monotonicity, aggregation, union bounds, duplicate-call and gateway
/// invariance.
pub fn check_invariants(inst: &Instance, dup_pick: usize) -> Result<(), TestCaseError> {
    let Some(r) = inst.report() else {
        return Ok(());
    };
    let in_range = |x: f64| (0.0..=1.0).contains(&x);
    ensure(in_range(r.suite_coverage), || "suite out of range".into())?;
    ensure(r.per_service.values().all(|c| in_range(c.ratio)), || "C_ms out of range".into())?;
    ensure(r.per_test.values().all(|c| in_range(c.ratio)), || "C_test out of range".into())?;

    // aggregation identity
    let tested: usize = r.per_service.values().map(|c| c.tested_count).sum();
    let total: usize = r.per_service.values().map(|c| c.total_count).sum();
    ensure(tested == r.suite_tested_count && total == r.universe_count, || {
        format!("aggregation: {tested}/{total} vs {}/{}", r.suite_tested_count, r.universe_count)
    })?;
    ensure(r.suite_coverage == tested as f64 / total as f64, || "aggregation ratio".into())?;

    // union bounds
    let eps = 1e-12;
    let max_test = r.per_test.values().map(|c| c.ratio).fold(0.0, f64::max);
    let sum_test: f64 = r.per_test.values().map(|c| c.ratio).sum();
    ensure(max_test <= r.suite_coverage + eps, || "max C_test > C_suite".into())?;
    ensure(r.suite_coverage <= sum_test + eps, || "C_suite > sum C_test".into())?;

    // monotonicity: dropping the last test never raises anything
    if !inst.tests.is_empty() {
        let mut fewer = inst.clone();
        fewer.tests.pop();
        if let Some(rf) = fewer.report() {
            ensure(rf.suite_coverage <= r.suite_coverage, || "suite not monotone".into())?;
            for (name, c) in &rf.per_service {
                ensure(c.ratio <= r.per_service[name].ratio, || format!("{name} not monotone"))?;
            }
        }
    }

    // duplicate-call invariance
    let nonempty: Vec<usize> = (0..inst.tests.len()).filter(|&t| !inst.tests[t].is_empty()).collect();
    if !nonempty.is_empty() {
        let t = nonempty[dup_pick % nonempty.len()];
        let mut dup = inst.clone();
        let k = dup_pick % dup.tests[t].len();
        let spec = dup.tests[t][k];
        dup.tests[t].insert(k, spec);
        let rd = dup.report().unwrap();
        ensure(metrics_view(&rd) == metrics_view(&r), || "duplicate call changed metrics".into())?;
    }

    // gateway invariance
    if inst.services.iter().any(|s| s.gateway) && !inst.tests.is_empty() {
        let mut more = inst.clone();
        let t = dup_pick % more.tests.len();
        more.tests[t].push(CallSpec::Gateway { n: dup_pick });
        let rg = more.report().unwrap();
        ensure(metrics_view(&rg) == metrics_view(&r), || "gateway call changed metrics".into())?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Matching instances

/// 0, 1: literals `a`, `b`; 2..=6: parameter of type `TYPES[n - 2]`.
pub type SegCode = usize;

#[derive(Debug, Clone)]
pub struct MatchInstance {
    /// (method is POST, segments)
    pub endpoints: Vec<(bool, Vec<SegCode>)>,
    pub post: bool,
    pub url: Vec<usize>,
}

pub const URL_VALUES: [&str; 10] = ["a", "b", "7", "-3", "2.5", "1e3", "true", "false", "x", ".5"];

pub fn match_instance_strategy() -> impl Strategy<Value = MatchInstance> {
    (
        prop::collection::vec(
            (prop::bool::weighted(0.2), prop::collection::vec(0usize..7, 1..=4)),
            1..=20,
        ),
        prop::bool::weighted(0.2),
        prop::collection::vec(0usize..URL_VALUES.len(), 1..=4),
    )
        .prop_map(|(endpoints, post, url)| MatchInstance { endpoints, post, url })
}

fn seg_text(code: SegCode) -> String {
    match code {
        0 => "a".into(),
        1 => "b".into(),
        n => format!("{{{}}}", type_name(TYPES[n - 2])),
    }
}

fn oracle_key(post: bool, segs: &[SegCode]) -> String {
    let m = if post { "POST" } else { "GET" };
    let path: Vec<String> = segs.iter().map(|&c| seg_text(c)).collect();
    format!("svc|{m}|{}", path.join("/"))
}

impl MatchInstance {
    pub fn inventory(&self) -> EndpointInventory {
        let mut inv = EndpointInventory::new();
        inv.add_service("svc").unwrap();
        for (post, segs) in &self.endpoints {
            let segments = segs
                .iter()
                .enumerate()
                .map(|(i, &c)| match c {
                    0 => Segment::literal("a"),
                    1 => Segment::literal("b"),
                    n => Segment::param(format!("p{i}"), TYPES[n - 2]),
                })
                .collect();
            let method = if *post { HttpMethod::Post } else { HttpMethod::Get };
            let e = Endpoint::new("svc", method, PathTemplate::new(segments).unwrap());
            let _ = inv.insert(e).unwrap();
        }
        inv
    }

    pub fn call(&self) -> EndpointCall {
        let url: Vec<&str> = self.url.iter().map(|&i| URL_VALUES[i]).collect();
        let method = if self.post { HttpMethod::Post } else { HttpMethod::Get };
        EndpointCall::new(
            Timestamp::from_micros(0),
            None,
            EndpointRef::new("svc", method, format!("/{}", url.join("/"))),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchOracle {
    pub winner: Option<String>,
    pub survivors: BTreeSet<String>,
    pub candidates: usize,
    pub rule: Option<MatchRule>,
}

fn fits(code: SegCode, value: &str) -> bool {
    let int = Regex::new(r"^[+-]?[0-9]+$").unwrap();
    let num = Regex::new(r"^[+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)([eE][+-]?[0-9]+)?$").unwrap();
    match code {
        0 => value == "a",
        1 => value == "b",
        2 => int.is_match(value),
        3 => num.is_match(value),
        4 => value == "true" || value == "false",
        _ => true,
    }
}

fn specificity(code: SegCode) -> i32 {
    // integer > number > boolean > string > opaque
    6 - code as i32
}

/// True when `s` ranks ahead of `t`.
fn beats(s: &(bool, Vec<SegCode>), t: &(bool, Vec<SegCode>)) -> bool {
    let lits = |e: &(bool, Vec<SegCode>)| e.1.iter().filter(|&&c| c < 2).count();
    if lits(s) != lits(t) {
        return lits(s) > lits(t);
    }
    for (a, b) in s.1.iter().zip(&t.1) {
        if (*a < 2) != (*b < 2) {
            return *a < 2;
        }
    }
    for (a, b) in s.1.iter().zip(&t.1) {
        if *a >= 2 && *b >= 2 && specificity(*a) != specificity(*b) {
            return specificity(*a) > specificity(*b);
        }
    }
    oracle_key(s.0, &s.1) < oracle_key(t.0, &t.1)
}

pub fn match_oracle(inst: &MatchInstance) -> MatchOracle {
    // identical declarations collapse, as in the inventory
    let mut unique: BTreeMap<String, (bool, Vec<SegCode>)> = BTreeMap::new();
    for e in &inst.endpoints {
        unique.entry(oracle_key(e.0, &e.1)).or_insert_with(|| e.clone());
    }
    let url: Vec<&str> = inst.url.iter().map(|&i| URL_VALUES[i]).collect();
    let candidates: Vec<&(bool, Vec<SegCode>)> = unique
        .values()
        .filter(|e| e.0 == inst.post && e.1.len() == url.len())
        .collect();
    let survivors: Vec<&(bool, Vec<SegCode>)> = candidates
        .iter()
        .copied()
        .filter(|e| e.1.iter().zip(&url).all(|(&c, v)| fits(c, v)))
        .collect();
    let winner = survivors
        .iter()
        .find(|s| survivors.iter().all(|t| std::ptr::eq(**s, *t) || beats(s, t)));
    let rule = winner.map(|w| {
        if survivors.len() > 1 {
            MatchRule::TieBreak
        } else if w.1.iter().all(|&c| c < 2) {
            MatchRule::ExactLiteral
        } else if w.1.contains(&6) {
            MatchRule::OpaqueParam
        } else {
            MatchRule::TypedParam
        }
    });
    MatchOracle {
        winner: winner.map(|w| oracle_key(w.0, &w.1)),
        survivors: survivors.iter().map(|e| oracle_key(e.0, &e.1)).collect(),
        candidates: candidates.len(),
        rule,
    }
}

pub fn check_match(inst: &MatchInstance) -> Result<(), TestCaseError> {
    let want = match_oracle(inst);
    let got = match_call(&inst.call(), &inst.inventory());
    let got_winner = got.outcome.matched_key().map(|k| k.to_string());
    eq("winner", got_winner, want.winner.clone())?;
    eq(
        "survivors",
        got.survivors.iter().map(|k| k.to_string()).collect::<BTreeSet<_>>(),
        want.survivors.clone(),
    )?;
    eq("candidates", got.candidates_considered, want.candidates)?;
    eq("rule", got.rule_applied, want.rule)?;
    if want.winner.is_none() {
        eq(
            "unmatched reason",
            got.outcome,
            CallOutcome::Unmatched {
                reason: UnmatchedReason::NoCandidate,
            },
        )?;
    }
    // an exact-literal full match always wins
    if let Some(lit) = want.survivors.iter().find(|k| !k.contains('{')) {
        eq("literal wins", want.winner.as_ref(), Some(lit))?;
    }
    Ok(())
}
