//! In-memory composition of windowing, matching, and metrics.

use thiserror::Error;

use crate::diag::Warning;
use crate::extract_dynamic::{window_calls, DynamicError, Windowed};
use crate::matching::match_test_traces;
use crate::metrics::{build_report, MetricsError};
use crate::model::{CoverageReport, EndpointCall, EndpointInventory, TestManifest, TestTrace};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Dynamic(#[from] DynamicError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: CoverageReport,
    pub traces: Vec<TestTrace>,
    pub windowed: Windowed,
    pub warnings: Vec<Warning>,
}

/// Windows `calls` by `manifest`, matches them against `inv`, and builds the
/// report.
pub fn analyze(
    inv: &EndpointInventory,
    calls: &[EndpointCall],
    manifest: &TestManifest,
    skew_micros: i64,
) -> Result<Analysis, PipelineError> {
    let windowed = window_calls(calls, &manifest.tests, skew_micros)?;
    let traces = match_test_traces(&windowed.per_test, inv);
    let report = build_report(inv, &traces)?;
    let warnings = windowed.warnings.clone();
    Ok(Analysis {
        report,
        traces,
        windowed,
        warnings,
    })
}
