//! Stage 3b: coverage ratios and their summary statistics.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::diag::{Warning, WarningKind};
use crate::matching::match_call;
use crate::model::{
    CallOutcome, CallSummary, CoverageReport, CoverageStats, DependencyEdge, EndpointInventory,
    EndpointKey, RiskyMatch, ServiceCoverage, Summary, TestCoverage, TestTrace,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("the endpoint inventory is empty; coverage is undefined")]
    EmptyInventory,
    #[error("cannot summarize an empty population")]
    EmptyPopulation,
}

/// Ratio as a percentage rounded to two decimals.
pub fn percent(ratio: f64) -> f64 {
    (ratio * 10000.0).round() / 100.0
}

fn hundredths(ratio: f64) -> i64 {
    (ratio * 10000.0).round() as i64
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Matched endpoints across all traces that still exist in the universe.
fn tested_union<'a>(inv: &EndpointInventory, traces: &'a [TestTrace]) -> BTreeSet<&'a EndpointKey> {
    traces
        .iter()
        .flat_map(|t| &t.matched_endpoints)
        .filter(|k| in_universe(inv, k))
        .collect()
}

fn in_universe(inv: &EndpointInventory, key: &EndpointKey) -> bool {
    inv.contains(key) && !inv.is_gateway(key.service())
}

/// `C_ms(i)` for every non-gateway service. A service without endpoints gets
/// ratio 0.
pub fn service_coverage(
    inv: &EndpointInventory,
    traces: &[TestTrace],
) -> BTreeMap<String, ServiceCoverage> {
    let tested = tested_union(inv, traces);
    inv.covered_services()
        .map(|(name, service)| {
            let tested_endpoints: Vec<EndpointKey> = service
                .endpoints
                .keys()
                .filter(|k| tested.contains(k))
                .cloned()
                .collect();
            let total = service.endpoints.len();
            let cov = ServiceCoverage {
                tested_count: tested_endpoints.len(),
                total_count: total,
                ratio: ratio(tested_endpoints.len(), total),
                tested_endpoints,
            };
            (name.to_string(), cov)
        })
        .collect()
}

/// `C_test(i)` for every trace.
pub fn test_coverage(
    inv: &EndpointInventory,
    traces: &[TestTrace],
) -> Result<BTreeMap<String, TestCoverage>, MetricsError> {
    let universe = inv.universe_size();
    if universe == 0 {
        return Err(MetricsError::EmptyInventory);
    }
    Ok(traces
        .iter()
        .map(|t| {
            let endpoints: Vec<EndpointKey> = t
                .matched_endpoints
                .iter()
                .filter(|k| in_universe(inv, k))
                .cloned()
                .collect();
            let cov = TestCoverage {
                tested_count: endpoints.len(),
                universe_count: universe,
                ratio: ratio(endpoints.len(), universe),
                endpoints,
            };
            (t.test_id.clone(), cov)
        })
        .collect())
}

/// `C_suite`: distinct endpoints hit by any test over the universe.
pub fn suite_coverage(inv: &EndpointInventory, traces: &[TestTrace]) -> Result<f64, MetricsError> {
    let universe = inv.universe_size();
    if universe == 0 {
        return Err(MetricsError::EmptyInventory);
    }
    Ok(ratio(tested_union(inv, traces).len(), universe))
}

/// Min, mean, max, and mode of a ratio population, in percent rounded to two
/// decimals. The mode is taken over the rounded values; on a frequency tie the
/// largest value wins.
pub fn summarize(ratios: &[f64]) -> Result<Summary, MetricsError> {
    if ratios.is_empty() {
        return Err(MetricsError::EmptyPopulation);
    }
    let rounded: Vec<i64> = ratios.iter().map(|&r| hundredths(r)).collect();
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for &r in &rounded {
        *counts.entry(r).or_default() += 1;
    }
    // max_by_key returns the last maximum, and the map iterates ascending
    let mode = counts
        .iter()
        .max_by_key(|(_, &n)| n)
        .map(|(&v, _)| v)
        .expect("non-empty");
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(Summary {
        min: *rounded.iter().min().expect("non-empty") as f64 / 100.0,
        avg: percent(mean),
        max: *rounded.iter().max().expect("non-empty") as f64 / 100.0,
        mode: mode as f64 / 100.0,
    })
}

/// Service-to-service edges seen in calls whose source is an endpoint.
pub fn dependency_edges(traces: &[TestTrace]) -> Vec<DependencyEdge> {
    let mut edges: BTreeMap<(&str, &str), (bool, usize)> = BTreeMap::new();
    for (call, outcome) in traces.iter().flat_map(|t| t.results()) {
        let Some(src) = &call.source else { continue };
        if src.service == call.destination.service {
            continue;
        }
        let e = edges
            .entry((&src.service, &call.destination.service))
            .or_default();
        e.0 |= outcome.matched_key().is_some();
        e.1 += 1;
    }
    edges
        .into_iter()
        .map(|((s, d), (covered, calls))| DependencyEdge {
            source: s.to_string(),
            destination: d.to_string(),
            covered,
            calls,
        })
        .collect()
}

pub fn call_summary(traces: &[TestTrace]) -> CallSummary {
    let mut s = CallSummary::default();
    let mut matched = BTreeSet::new();
    let mut gateway = BTreeSet::new();
    let mut unmatched = BTreeSet::new();
    for (call, outcome) in traces.iter().flat_map(|t| t.results()) {
        s.total += 1;
        let d = &call.destination;
        match outcome {
            CallOutcome::Matched { endpoint } => {
                s.matched += 1;
                matched.insert(endpoint);
            }
            CallOutcome::Gateway => {
                s.gateway += 1;
                gateway.insert(d);
            }
            CallOutcome::Unmatched { .. } => {
                s.unmatched += 1;
                unmatched.insert(d);
            }
        }
    }
    s.distinct_matched_endpoints = matched.len();
    s.distinct_gateway_targets = gateway.len();
    s.distinct_unmatched_targets = unmatched.len();
    s
}

/// Assembles the full report. `traces` must come from matching against `inv`.
pub fn build_report(
    inv: &EndpointInventory,
    traces: &[TestTrace],
) -> Result<CoverageReport, MetricsError> {
    let universe = inv.universe_size();
    if universe == 0 {
        return Err(MetricsError::EmptyInventory);
    }
    let per_service = service_coverage(inv, traces);
    let per_test = test_coverage(inv, traces)?;
    let tested = tested_union(inv, traces).len();

    let mut warnings = Vec::new();
    for (name, cov) in &per_service {
        if cov.total_count == 0 {
            warnings.push(Warning::new(
                WarningKind::EmptyServiceCoverage,
                format!("{name} has no endpoints; its coverage is reported as 0"),
            ));
        }
    }

    let mut risky = BTreeMap::new();
    for t in traces {
        for call in &t.calls {
            let r = match_call(call, inv);
            if let Some(w) = &r.warning {
                warnings.push(Warning::new(WarningKind::TieBreak, w.clone()));
            }
            if !r.is_risky() {
                continue;
            }
            let d = &call.destination;
            risky
                .entry((t.test_id.clone(), d.service.clone(), d.method, d.url.clone()))
                .or_insert_with(|| RiskyMatch {
                    test_id: t.test_id.clone(),
                    service: d.service.clone(),
                    method: d.method.to_string(),
                    url: d.url.clone(),
                    chosen: r.survivors[0].clone(),
                    alternatives: r.survivors[1..].to_vec(),
                });
        }
    }
    warnings.sort_by(|a, b| a.message.cmp(&b.message));
    warnings.dedup();

    let service_ratios: Vec<f64> = per_service.values().map(|c| c.ratio).collect();
    let test_ratios: Vec<f64> = per_test.values().map(|c| c.ratio).collect();
    Ok(CoverageReport {
        suite_coverage: ratio(tested, universe),
        suite_tested_count: tested,
        universe_count: universe,
        m_total: per_service.len(),
        t_total: per_test.len(),
        stats: CoverageStats {
            per_service: summarize(&service_ratios).ok(),
            per_test: summarize(&test_ratios).ok(),
        },
        per_service,
        per_test,
        dependency_edges: dependency_edges(traces),
        gateway_services: inv.gateway_services().into_iter().map(str::to_string).collect(),
        calls: call_summary(traces),
        risky_matches: risky.into_values().collect(),
        warnings: warnings.into_iter().map(|w| w.message).collect(),
    })
}
