//! Stage 2: endpoint calls from trace exports, split into per-test windows.

mod skywalking;
mod window;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diag::{Warning, WarningKind};
use crate::model::EndpointCall;

pub use skywalking::{
    decode_record, encode_descriptor, encode_record, filter_endpoint_records, parse_descriptor,
    parse_record_line, parse_timestamp_field, FieldConfig, Filtered, RawTraceRecord,
    DEFAULT_RELATION_INDEX, ENTRY_MARKER,
};
pub use window::{parse_clock_skew, window_calls, Windowed};

#[derive(Debug, Error)]
pub enum DynamicError {
    #[error("test manifest lists no tests")]
    EmptyManifest,
}

/// A record that could not be turned into a call. Kept verbatim for triage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordError {
    pub line: usize,
    pub reason: String,
    pub raw: String,
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceFormat {
    /// One [`EndpointCall`] JSON object per line.
    Jsonl,
    /// Elasticsearch export of SkyWalking indices.
    SkywalkingEs,
}

impl std::str::FromStr for TraceFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(TraceFormat::Jsonl),
            "skywalking-es" => Ok(TraceFormat::SkywalkingEs),
            other => Err(format!("unknown trace format {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub records: usize,
    pub dropped: usize,
    pub decoded: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Ingested {
    pub calls: Vec<EndpointCall>,
    pub errors: Vec<RecordError>,
    pub stats: IngestStats,
    pub warnings: Vec<Warning>,
}

/// Reads calls from trace text. Blank lines are skipped; bad lines become
/// [`RecordError`]s rather than aborting the read.
pub fn read_calls(text: &str, format: TraceFormat, cfg: &FieldConfig) -> Ingested {
    let mut out = Ingested::default();
    let lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    match format {
        TraceFormat::Jsonl => {
            for (n, line) in lines {
                out.stats.records += 1;
                match EndpointCall::from_jsonl_line(line) {
                    Ok(mut call) => {
                        call.raw = Some(line.to_string());
                        out.calls.push(call);
                    }
                    Err(e) => out.errors.push(RecordError {
                        line: n,
                        reason: e.to_string(),
                        raw: line.to_string(),
                    }),
                }
            }
        }
        TraceFormat::SkywalkingEs => {
            let mut records = Vec::new();
            for (n, line) in lines {
                out.stats.records += 1;
                match parse_record_line(line, n) {
                    Ok(r) => records.push(r),
                    Err(e) => out.errors.push(e),
                }
            }
            let filtered = filter_endpoint_records(records, cfg);
            out.stats.dropped = filtered.dropped;
            if filtered.dropped > 0 {
                let detail: Vec<String> = filtered
                    .dropped_by_index
                    .iter()
                    .map(|(i, n)| format!("{}={n}", if i.is_empty() { "<none>" } else { i }))
                    .collect();
                out.warnings.push(Warning::new(
                    WarningKind::DroppedRecords,
                    format!(
                        "dropped {} records outside {}: {}",
                        filtered.dropped,
                        cfg.index,
                        detail.join(", ")
                    ),
                ));
            }
            for r in &filtered.kept {
                match decode_record(r, cfg) {
                    Ok(call) => out.calls.push(call),
                    Err(e) => out.errors.push(e),
                }
            }
        }
    }
    out.errors.sort_by_key(|e| e.line);
    out.stats.decoded = out.calls.len();
    out.stats.errors = out.errors.len();
    if !out.errors.is_empty() {
        out.warnings.push(Warning::new(
            WarningKind::DecodeError,
            format!(
                "{} records could not be decoded (first: {})",
                out.errors.len(),
                out.errors[0]
            ),
        ));
    }
    out
}
