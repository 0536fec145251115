use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::extract_dynamic::TraceFormat;

#[derive(Debug, Parser)]
#[command(
    name = "e2ecov",
    version,
    about = "Endpoint coverage of end-to-end test suites, from source or OpenAPI inventories and trace exports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the endpoint inventory and write <out>/inventory.json
    Extract(CommonArgs),
    /// Decode traces, split them by test window, write <out>/ingest/
    Ingest(CommonArgs),
    /// Match calls, compute coverage, write the coverage.* reports
    Analyze {
        #[command(flatten)]
        common: CommonArgs,
        /// Use existing inventory.json and ingest/ without checking inputs
        #[arg(long)]
        from_cache: bool,
    },
    /// Fail (exit 1) when suite coverage is below a threshold
    Check {
        #[command(flatten)]
        common: CommonArgs,
        /// Minimum suite coverage, in percent
        #[arg(long, value_name = "PCT")]
        min_suite_coverage: f64,
        /// Read an existing coverage.json instead of analysing
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML run configuration
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Source tree to scan for controller mappings (repeatable)
    #[arg(long, value_name = "DIR")]
    pub source_root: Vec<PathBuf>,
    /// JSON map of service names to directories and gateway flags
    #[arg(long, value_name = "FILE")]
    pub services_manifest: Option<PathBuf>,
    /// OpenAPI document, as SERVICE=PATH or PATH named after the service
    #[arg(long, value_name = "SERVICE=PATH")]
    pub openapi: Vec<String>,
    /// Ready-made inventory JSON to merge in (repeatable)
    #[arg(long, value_name = "FILE")]
    pub inventory: Vec<PathBuf>,
    /// Treat this service as an API gateway (repeatable)
    #[arg(long, value_name = "NAME")]
    pub gateway_service: Vec<String>,
    /// Drop inventory endpoints whose path matches (repeatable)
    #[arg(long, value_name = "RE")]
    pub exclude_path_regex: Vec<String>,

    /// Trace export file (repeatable)
    #[arg(long, value_name = "FILE")]
    pub traces: Vec<PathBuf>,
    /// Trace file format
    #[arg(long, value_name = "FORMAT", value_parser = parse_format)]
    pub format: Option<TraceFormat>,
    /// Test manifest JSON with test ids and time windows
    #[arg(long, value_name = "FILE")]
    pub tests: Option<PathBuf>,
    /// Shift test windows by this much, e.g. 250ms or -1.5s
    #[arg(long, value_name = "DUR", allow_hyphen_values = true)]
    pub clock_skew: Option<String>,
    /// Elasticsearch index holding endpoint relations
    #[arg(long, value_name = "NAME")]
    pub index_name: Option<String>,
    /// Record field holding the calling endpoint
    #[arg(long, value_name = "FIELD")]
    pub source_field: Option<String>,
    /// Record field holding the called endpoint
    #[arg(long, value_name = "FIELD")]
    pub dest_field: Option<String>,
    /// Record field holding the call time
    #[arg(long, value_name = "FIELD")]
    pub timestamp_field: Option<String>,
}

fn parse_format(s: &str) -> Result<TraceFormat, String> {
    s.parse()
}
