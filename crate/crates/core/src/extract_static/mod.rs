//! Stage 1: the endpoint inventory, from controller sources or OpenAPI
//! documents.

mod lexer;
mod merge;
mod openapi;
mod scanner;

use std::path::PathBuf;

use thiserror::Error;

use crate::model::ModelError;

pub use merge::{exclude_paths, merge_inventories, MergeOutput};
pub use openapi::{parse_openapi, OpenApiOutput};
pub use scanner::{
    map_declared_type, scan_annotations, scan_source, AnnotationMatch, FileEndpoint, FileScan,
    MappingKind, ParamDecl, ScanOutput, ServiceEntry, ServiceLayout, ServicesManifest,
    SourceTree, DEFAULT_EXCLUDE, DEFAULT_INCLUDE,
};

#[derive(Debug, Error)]
pub enum StaticError {
    #[error("source root {0} is not a readable directory")]
    MissingRoot(PathBuf),
    #[error("invalid glob {0:?}: {1}")]
    Glob(String, String),
    #[error("invalid services manifest: {0}")]
    Manifest(String),
    #[error("invalid OpenAPI document: {0}")]
    OpenApi(String),
    #[error("OpenAPI document has no paths")]
    MissingPaths,
    #[error("service {0:?} is a gateway in one inventory fragment but not in another")]
    GatewayConflict(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
