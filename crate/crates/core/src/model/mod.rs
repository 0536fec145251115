//! Shared domain types and their interchange formats.

mod call;
mod endpoint;
mod inventory;
mod manifest;
mod path;
mod report;
mod trace;

use thiserror::Error;

pub use call::{CallOutcome, EndpointCall, EndpointRef, Timestamp, UnmatchedReason};
pub use endpoint::{endpoint_identity, Endpoint, EndpointKey, HttpMethod};
pub use inventory::{
    endpoint_from_spec, EndpointDoc, EndpointInventory, InventoryDoc, ParamDoc, Service,
    ServiceDoc,
};
pub(crate) use inventory::validate_service_name;
pub use manifest::{TestManifest, TestWindow};
pub use path::{concrete_segments, normalize_path, ParamType, PathTemplate, Segment};
pub use report::{
    CallSummary, CoverageReport, CoverageStats, DependencyEdge, RiskyMatch, ServiceCoverage,
    Summary, TestCoverage,
};
pub use trace::TestTrace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("empty path template: {0:?}")]
    EmptyPath(String),
    #[error("empty segment in path: {0:?}")]
    EmptySegment(String),
    #[error("parameter {1:?} appears twice in {0:?}")]
    DuplicateParam(String, String),
    #[error("malformed percent-encoding in {0:?}")]
    BadPercentEncoding(String),
    #[error("unknown HTTP method {0:?}")]
    UnknownMethod(String),
    #[error("invalid service name {0:?}")]
    BadServiceName(String),
    #[error("service {0:?} listed twice")]
    DuplicateService(String),
    #[error("duplicate endpoint identity {0}")]
    DuplicateEndpoint(String),
    #[error("invalid timestamp {0:?}")]
    BadTimestamp(String),
    #[error("test {0:?} ends before it starts")]
    InvertedWindow(String),
    #[error("test {0:?} listed twice")]
    DuplicateTest(String),
    #[error("test id must not be empty")]
    EmptyTestId,
    #[error("malformed JSON: {0}")]
    Json(String),
}
