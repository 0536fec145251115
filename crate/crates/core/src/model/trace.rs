use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::call::{CallOutcome, EndpointCall};
use super::endpoint::EndpointKey;

/// The calls attributed to one test, each with its match outcome.
///
/// `matched_endpoints` is `E_test(i)^tested`. The matched, gateway, and
/// unmatched partitions are disjoint because every call carries exactly one
/// outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestTrace {
    pub test_id: String,
    pub calls: Vec<EndpointCall>,
    pub outcomes: Vec<CallOutcome>,
    pub matched_endpoints: BTreeSet<EndpointKey>,
}

impl TestTrace {
    /// Builds a trace from chronological `(call, outcome)` pairs.
    pub fn from_outcomes(
        test_id: impl Into<String>,
        results: impl IntoIterator<Item = (EndpointCall, CallOutcome)>,
    ) -> TestTrace {
        let (calls, outcomes): (Vec<_>, Vec<_>) = results.into_iter().unzip();
        let matched_endpoints = outcomes
            .iter()
            .filter_map(|o| o.matched_key().cloned())
            .collect();
        TestTrace {
            test_id: test_id.into(),
            calls,
            outcomes,
            matched_endpoints,
        }
    }

    pub fn results(&self) -> impl Iterator<Item = (&EndpointCall, &CallOutcome)> {
        self.calls.iter().zip(&self.outcomes)
    }

    pub fn matched_calls(&self) -> impl Iterator<Item = (&EndpointCall, &EndpointKey)> {
        self.results()
            .filter_map(|(c, o)| o.matched_key().map(|k| (c, k)))
    }

    pub fn gateway_calls(&self) -> impl Iterator<Item = &EndpointCall> {
        self.results()
            .filter(|(_, o)| matches!(o, CallOutcome::Gateway))
            .map(|(c, _)| c)
    }

    pub fn unmatched_calls(&self) -> impl Iterator<Item = &EndpointCall> {
        self.results()
            .filter(|(_, o)| matches!(o, CallOutcome::Unmatched { .. }))
            .map(|(c, _)| c)
    }
}
