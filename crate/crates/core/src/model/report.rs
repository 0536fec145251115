use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::endpoint::EndpointKey;

/// Everything computed for one analysis run. Field names are part of the
/// `coverage.json` schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    /// `C_suite` in `[0, 1]`.
    pub suite_coverage: f64,
    pub suite_tested_count: usize,
    pub universe_count: usize,
    /// `C_ms(i)` for every non-gateway service.
    pub per_service: BTreeMap<String, ServiceCoverage>,
    /// `C_test(i)` for every test in the manifest.
    pub per_test: BTreeMap<String, TestCoverage>,
    pub stats: CoverageStats,
    pub m_total: usize,
    pub t_total: usize,
    pub dependency_edges: Vec<DependencyEdge>,
    pub gateway_services: Vec<String>,
    pub calls: CallSummary,
    pub risky_matches: Vec<RiskyMatch>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServiceCoverage {
    pub tested_count: usize,
    pub total_count: usize,
    pub ratio: f64,
    pub tested_endpoints: Vec<EndpointKey>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestCoverage {
    pub tested_count: usize,
    pub universe_count: usize,
    pub ratio: f64,
    pub endpoints: Vec<EndpointKey>,
}

/// Table-style summary of a ratio population, in percent rounded to two
/// decimals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub min: f64,
    pub avg: f64,
    pub max: f64,
    pub mode: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageStats {
    pub per_service: Option<Summary>,
    pub per_test: Option<Summary>,
}

/// An observed service-to-service dependency. `covered` is true when at
/// least one call along it matched an inventory endpoint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DependencyEdge {
    pub source: String,
    pub destination: String,
    pub covered: bool,
    pub calls: usize,
}

/// Call counts across all tests. The `distinct_*` fields count unique
/// destinations: matched endpoint identities and gateway `(method, url)`
/// targets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallSummary {
    pub total: usize,
    pub matched: usize,
    pub gateway: usize,
    pub unmatched: usize,
    pub distinct_matched_endpoints: usize,
    pub distinct_gateway_targets: usize,
    pub distinct_unmatched_targets: usize,
}

impl CallSummary {
    /// Distinct endpoints seen in traces before gateway exclusion.
    pub fn distinct_called(&self) -> usize {
        self.distinct_matched_endpoints + self.distinct_gateway_targets
    }
}

/// A call for which more than one endpoint signature fit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiskyMatch {
    pub test_id: String,
    pub service: String,
    pub method: String,
    pub url: String,
    pub chosen: EndpointKey,
    pub alternatives: Vec<EndpointKey>,
}
