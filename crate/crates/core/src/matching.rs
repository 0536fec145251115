//! Stage 3a: resolving concrete calls to inventory endpoints.

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{
    concrete_segments, CallOutcome, Endpoint, EndpointCall, EndpointInventory, EndpointKey,
    ParamType, Segment, TestTrace, UnmatchedReason,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchRule {
    /// The only survivor has no parameters.
    ExactLiteral,
    /// The only survivor has parameters, none of them opaque.
    TypedParam,
    /// The only survivor has at least one opaque parameter.
    OpaqueParam,
    /// Several survivors; the ranking picked one.
    TieBreak,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResult {
    pub call: EndpointCall,
    #[serde(flatten)]
    pub outcome: CallOutcome,
    /// Endpoints with the right service, method, and segment count.
    pub candidates_considered: usize,
    /// Candidates whose every segment fits, best first.
    pub survivors: Vec<EndpointKey>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_applied: Option<MatchRule>,
    /// Set when survivors could only be told apart by identity key.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl MatchResult {
    pub fn is_risky(&self) -> bool {
        self.survivors.len() > 1
    }
}

pub fn integer_text(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

/// Decimal notation with optional fraction and exponent. `NaN`, `inf`, and
/// hex forms are not numbers here.
pub fn number_text(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let (int, frac) = match mantissa.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (mantissa, None),
    };
    let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    let mantissa_ok = all_digits(int)
        && frac.is_none_or(all_digits)
        && (!int.is_empty() || frac.is_some_and(|f| !f.is_empty()));
    mantissa_ok && exponent.is_none_or(integer_text)
}

pub fn segment_matches(segment: &Segment, value: &str) -> bool {
    match segment {
        Segment::Literal(text) => text == value,
        Segment::Param { ty, .. } => match ty {
            ParamType::Integer => integer_text(value),
            ParamType::Number => number_text(value),
            ParamType::Boolean => value == "true" || value == "false",
            ParamType::String | ParamType::Opaque => true,
        },
    }
}

/// Ranking key; smaller sorts first. Identity key is the final tie-breaker
/// and is applied separately so we can tell when it was needed.
fn rank(e: &Endpoint) -> (Reverse<usize>, Vec<bool>, Reverse<Vec<u8>>) {
    let segs = e.path.segments();
    // `false` (literal) sorts before `true` (param)
    let mask = segs.iter().map(|s| !s.is_literal()).collect();
    let spec = e.path.params().map(|(_, t)| t.specificity()).collect();
    (Reverse(e.path.literal_count()), mask, Reverse(spec))
}

fn single_rule(e: &Endpoint) -> MatchRule {
    let mut params = e.path.params().peekable();
    if params.peek().is_none() {
        MatchRule::ExactLiteral
    } else if params.any(|(_, t)| t == ParamType::Opaque) {
        MatchRule::OpaqueParam
    } else {
        MatchRule::TypedParam
    }
}

/// Resolves one call against the inventory.
pub fn match_call(call: &EndpointCall, inv: &EndpointInventory) -> MatchResult {
    let dst = &call.destination;
    let done = |outcome, considered, survivors, rule_applied, warning| MatchResult {
        call: call.clone(),
        outcome,
        candidates_considered: considered,
        survivors,
        rule_applied,
        warning,
    };
    let unmatched = |reason| CallOutcome::Unmatched { reason };

    let Some(service) = inv.service(&dst.service) else {
        return done(unmatched(UnmatchedReason::UnknownService), 0, vec![], None, None);
    };
    if service.gateway {
        return done(CallOutcome::Gateway, 0, vec![], None, None);
    }
    let Ok(values) = concrete_segments(&dst.url) else {
        return done(unmatched(UnmatchedReason::InvalidUrl), 0, vec![], None, None);
    };

    let candidates: Vec<&Endpoint> = service
        .endpoints
        .values()
        .filter(|e| e.method == dst.method && e.path.len() == values.len())
        .collect();
    let mut survivors: Vec<&Endpoint> = candidates
        .iter()
        .copied()
        .filter(|e| {
            e.path
                .segments()
                .iter()
                .zip(&values)
                .all(|(s, v)| segment_matches(s, v))
        })
        .collect();
    if survivors.is_empty() {
        return done(
            unmatched(UnmatchedReason::NoCandidate),
            candidates.len(),
            vec![],
            None,
            None,
        );
    }
    // endpoints iterate in key order, so a stable sort leaves key order as the
    // last criterion
    survivors.sort_by_key(|e| rank(e));
    let (rule, warning) = if survivors.len() == 1 {
        (single_rule(survivors[0]), None)
    } else {
        let tied = rank(survivors[0]).cmp(&rank(survivors[1])) == Ordering::Equal;
        let warning = tied.then(|| {
            format!(
                "{dst}: {} and {} are equally specific; picked the smaller identity",
                survivors[0].key(),
                survivors[1].key()
            )
        });
        (MatchRule::TieBreak, warning)
    };
    let keys: Vec<EndpointKey> = survivors.iter().map(|e| e.key()).collect();
    done(
        CallOutcome::Matched {
            endpoint: keys[0].clone(),
        },
        candidates.len(),
        keys,
        Some(rule),
        warning,
    )
}

/// Matches every window. Output follows test id order.
pub fn match_test_traces(
    windows: &BTreeMap<String, Vec<EndpointCall>>,
    inv: &EndpointInventory,
) -> Vec<TestTrace> {
    windows
        .iter()
        .map(|(id, calls)| {
            TestTrace::from_outcomes(
                id.clone(),
                calls.iter().map(|c| (c.clone(), match_call(c, inv).outcome)),
            )
        })
        .collect()
}

/// One JSON line per call: the match result tagged with its test.
pub fn audit_jsonl(windows: &BTreeMap<String, Vec<EndpointCall>>, inv: &EndpointInventory) -> String {
    #[derive(Serialize)]
    struct Line<'a> {
        test: &'a str,
        #[serde(flatten)]
        result: MatchResult,
    }
    let mut out = String::new();
    for (id, calls) in windows {
        for call in calls {
            let line = Line {
                test: id,
                result: match_call(call, inv),
            };
            out.push_str(&serde_json::to_string(&line).expect("audit lines serialize"));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{endpoint_from_spec, EndpointRef, HttpMethod, Timestamp};

    fn inventory(specs: &[&str]) -> EndpointInventory {
        let mut inv = EndpointInventory::new();
        inv.add_service("ts-order").unwrap();
        for s in specs {
            inv.insert(endpoint_from_spec("ts-order", s).unwrap()).unwrap();
        }
        inv.set_gateway("gateway-svc", true).unwrap();
        inv
    }

    fn get(service: &str, url: &str) -> EndpointCall {
        EndpointCall::new(
            Timestamp::from_micros(0),
            None,
            EndpointRef::new(service, HttpMethod::Get, url),
        )
    }

    #[test]
    fn typed_param_single_survivor() {
        let inv = inventory(&["GET /order/{id:integer}", "GET /order/detail"]);
        let r = match_call(&get("ts-order", "/order/42"), &inv);
        assert_eq!(r.outcome.matched_key().unwrap().as_str(), "ts-order|GET|order/{integer}");
        assert_eq!(r.rule_applied, Some(MatchRule::TypedParam));
        assert_eq!(r.candidates_considered, 2);
    }

    #[test]
    fn literal_beats_param() {
        let inv = inventory(&["GET /order/{id:string}", "GET /order/detail"]);
        let r = match_call(&get("ts-order", "/order/detail"), &inv);
        assert_eq!(r.outcome.matched_key().unwrap().as_str(), "ts-order|GET|order/detail");
        assert_eq!(r.rule_applied, Some(MatchRule::TieBreak));
        assert!(r.is_risky());
        assert!(r.warning.is_none());
    }

    #[test]
    fn specificity_ladder() {
        let inv = inventory(&["GET /o/{a:string}", "GET /o/{a:integer}", "GET /o/{a:number}"]);
        let r = match_call(&get("ts-order", "/o/7"), &inv);
        let keys: Vec<&str> = r.survivors.iter().map(|k| k.as_str()).collect();
        assert_eq!(
            keys,
            ["ts-order|GET|o/{integer}", "ts-order|GET|o/{number}", "ts-order|GET|o/{string}"]
        );
        let r = match_call(&get("ts-order", "/o/7.5"), &inv);
        assert_eq!(r.outcome.matched_key().unwrap().as_str(), "ts-order|GET|o/{number}");
    }

    #[test]
    fn leftmost_literal_wins() {
        let inv = inventory(&["GET /a/{x}/c", "GET /{x}/b/c"]);
        let r = match_call(&get("ts-order", "/a/b/c"), &inv);
        assert_eq!(r.outcome.matched_key().unwrap().as_str(), "ts-order|GET|a/{string}/c");
    }

    #[test]
    fn gateway_and_unknown() {
        let inv = inventory(&["GET /order"]);
        assert_eq!(match_call(&get("gateway-svc", "/api/route"), &inv).outcome, CallOutcome::Gateway);
        assert_eq!(
            match_call(&get("nope", "/order"), &inv).outcome,
            CallOutcome::Unmatched { reason: UnmatchedReason::UnknownService }
        );
    }

    #[test]
    fn integer_rejects_text() {
        let inv = inventory(&["GET /order/{id:integer}"]);
        let r = match_call(&get("ts-order", "/order/abc"), &inv);
        assert_eq!(r.outcome, CallOutcome::Unmatched { reason: UnmatchedReason::NoCandidate });
        assert_eq!(r.candidates_considered, 1);
    }

    #[test]
    fn method_must_agree() {
        let inv = inventory(&["POST /order"]);
        let r = match_call(&get("ts-order", "/order"), &inv);
        assert_eq!(r.candidates_considered, 0);
        assert!(r.outcome.matched_key().is_none());
    }

    #[test]
    fn query_string_ignored_and_encoded_literal() {
        let inv = inventory(&["GET /a b/{id:boolean}"]);
        let r = match_call(&get("ts-order", "/a%20b/true?x=1"), &inv);
        assert!(r.outcome.matched_key().is_some());
        assert_eq!(match_call(&get("ts-order", "/a%2"), &inv).outcome,
            CallOutcome::Unmatched { reason: UnmatchedReason::InvalidUrl });
    }

    #[test]
    fn numeric_text() {
        for ok in ["1", "-1", "+0", "1.", ".5", "1e9", "2.5E-3"] {
            assert!(number_text(ok), "{ok}");
        }
        for bad in ["", ".", "e5", "1e", "NaN", "inf", "0x10", "1.2.3", "--1"] {
            assert!(!number_text(bad), "{bad}");
        }
        assert!(integer_text("-42") && !integer_text("4.2") && !integer_text("-"));
    }

    #[test]
    fn duplicates_collapse_in_traces() {
        let inv = inventory(&["GET /e1", "GET /e2"]);
        let mut w = BTreeMap::new();
        w.insert(
            "t".to_string(),
            vec![get("ts-order", "/e1"), get("ts-order", "/e1"), get("ts-order", "/e2")],
        );
        let traces = match_test_traces(&w, &inv);
        assert_eq!(traces[0].matched_endpoints.len(), 2);
        assert_eq!(traces[0].calls.len(), 3);
        let audit = audit_jsonl(&w, &inv);
        assert_eq!(audit.lines().count(), 3);
        assert!(audit.contains(r#""rule_applied":"exact-literal""#), "{audit}");
    }
}
