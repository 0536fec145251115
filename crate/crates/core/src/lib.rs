//! Endpoint-level end-to-end test coverage for microservice systems.
//!
//! The pipeline has four stages:
//!
//! 1. [`extract_static`] builds an [`EndpointInventory`](model::EndpointInventory)
//!    from controller sources or OpenAPI documents.
//! 2. [`extract_dynamic`] decodes trace exports and slices the calls into
//!    per-test windows.
//! 3. [`matching`] resolves each concrete call to an inventory endpoint, and
//!    [`metrics`] computes per-service, per-test, and suite coverage.
//! 4. [`report`] renders JSON, text, DOT, and HTML.
//!
//! [`cli`] wires the stages together behind the `e2ecov` binary.

pub mod cli;
pub mod diag;
pub mod extract_dynamic;
pub mod extract_static;
pub mod matching;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod report;

pub use diag::{Warning, WarningKind};
