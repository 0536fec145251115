//! SkyWalking-style endpoint-relation records exported from Elasticsearch.
//!
//! Each line is `{"_index": .., "_source": {..}}`. The source and destination
//! endpoints are Base64-encoded descriptors of the form
//! `service/METHOD:/path` (or SkyWalking's own `service/{METHOD}/path`).

use std::collections::BTreeMap;

use base64::alphabet;
use base64::engine::{DecodePaddingMode, GeneralPurpose, GeneralPurposeConfig};
use base64::Engine;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::RecordError;
use crate::model::{EndpointCall, EndpointRef, HttpMethod, Timestamp};

pub const DEFAULT_RELATION_INDEX: &str = "sw_endpoint_relation_server_side";

/// The name SkyWalking gives the virtual service behind user-initiated calls.
pub const ENTRY_MARKER: &str = "User";

const B64: GeneralPurpose = GeneralPurpose::new(
    &alphabet::STANDARD,
    GeneralPurposeConfig::new().with_decode_padding_mode(DecodePaddingMode::Indifferent),
);

/// Field names inside `_source`; deployments differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FieldConfig {
    pub index: String,
    pub source_field: String,
    pub dest_field: String,
    /// Tried in order; the first present field wins.
    pub timestamp_fields: Vec<String>,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig {
            index: DEFAULT_RELATION_INDEX.to_string(),
            source_field: "source_endpoint".to_string(),
            dest_field: "dest_endpoint".to_string(),
            timestamp_fields: vec!["timestamp".to_string(), "time_bucket".to_string()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTraceRecord {
    pub index_name: Option<String>,
    pub payload: BTreeMap<String, String>,
    /// 1-based line in the export, for error reporting.
    pub line: usize,
    pub raw: String,
}

fn flatten(value: &Value) -> Option<String> {
    match value {
        Value::Null => None,
        Value::String(s) => Some(s.clone()),
        Value::Bool(_) | Value::Number(_) => Some(value.to_string()),
        other => Some(other.to_string()),
    }
}

/// Parses one export line.
pub fn parse_record_line(line: &str, line_no: usize) -> Result<RawTraceRecord, RecordError> {
    let err = |reason: String| RecordError {
        line: line_no,
        reason,
        raw: line.to_string(),
    };
    let value: Value = serde_json::from_str(line).map_err(|e| err(format!("malformed JSON: {e}")))?;
    let index_name = value.get("_index").and_then(Value::as_str).map(str::to_string);
    let source = value
        .get("_source")
        .and_then(Value::as_object)
        .ok_or_else(|| err("missing _source object".to_string()))?;
    let payload: BTreeMap<String, String> = source
        .iter()
        .filter_map(|(k, v)| flatten(v).map(|s| (k.clone(), s)))
        .collect();
    if payload.is_empty() {
        return Err(err("empty _source".to_string()));
    }
    Ok(RawTraceRecord {
        index_name,
        payload,
        line: line_no,
        raw: line.to_string(),
    })
}

/// Result of filtering a record stream down to endpoint relations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Filtered {
    pub kept: Vec<RawTraceRecord>,
    pub dropped: usize,
    /// Dropped record counts per index name (`""` for records without one).
    pub dropped_by_index: BTreeMap<String, usize>,
}

fn index_matches(index: &str, wanted: &str) -> bool {
    // rolled-over indices carry a date suffix: `name-20230615`
    index == wanted
        || index
            .strip_prefix(wanted)
            .is_some_and(|rest| rest.starts_with('-'))
}

/// Keeps only records from the endpoint-relation index.
pub fn filter_endpoint_records(
    records: impl IntoIterator<Item = RawTraceRecord>,
    cfg: &FieldConfig,
) -> Filtered {
    let mut out = Filtered::default();
    for record in records {
        let keep = record
            .index_name
            .as_deref()
            .is_some_and(|i| index_matches(i, &cfg.index));
        if keep {
            out.kept.push(record);
        } else {
            out.dropped += 1;
            *out
                .dropped_by_index
                .entry(record.index_name.unwrap_or_default())
                .or_default() += 1;
        }
    }
    out
}

/// Parses `service/METHOD:/path` or `service/{METHOD}/path`.
pub fn parse_descriptor(text: &str) -> Option<EndpointRef> {
    let (service, rest) = text.trim().split_once('/')?;
    if service.is_empty() {
        return None;
    }
    let (method, path) = if let Some(braced) = rest.strip_prefix('{') {
        let (m, p) = braced.split_once('}')?;
        (m, p)
    } else {
        rest.split_once(':')?
    };
    let method: HttpMethod = method.parse().ok()?;
    let path = if path.starts_with('/') {
        path.to_string()
    } else {
        format!("/{path}")
    };
    Some(EndpointRef::new(service, method, path))
}

pub fn encode_descriptor(r: &EndpointRef) -> String {
    B64.encode(format!("{}/{}:{}", r.service, r.method, r.url))
}

fn decode_b64(field: &str, value: &str) -> Result<String, String> {
    let bytes = B64
        .decode(value.trim())
        .map_err(|e| format!("{field}: invalid Base64: {e}"))?;
    String::from_utf8(bytes).map_err(|_| format!("{field}: decoded bytes are not UTF-8"))
}

/// Parses a timestamp field value. `time_bucket` values are minute or second
/// buckets; other digit strings are epoch seconds, milliseconds, or
/// microseconds by magnitude; anything else is RFC 3339.
pub fn parse_timestamp_field(field: &str, value: &str) -> Option<Timestamp> {
    let value = value.trim();
    if field == "time_bucket" {
        return Timestamp::parse_time_bucket(value).ok();
    }
    if !value.is_empty() && value.bytes().all(|b| b.is_ascii_digit()) {
        let n: i64 = value.parse().ok()?;
        return match value.len() {
            0..=11 => n.checked_mul(1_000_000).map(Timestamp::from_micros),
            12..=14 => Timestamp::from_millis(n),
            15..=17 => Some(Timestamp::from_micros(n)),
            _ => None,
        };
    }
    Timestamp::parse_rfc3339(value).ok()
}

/// Decodes a filtered relation record into a call.
pub fn decode_record(r: &RawTraceRecord, cfg: &FieldConfig) -> Result<EndpointCall, RecordError> {
    let err = |reason: String| RecordError {
        line: r.line,
        reason,
        raw: r.raw.clone(),
    };
    let dest_b64 = r
        .payload
        .get(&cfg.dest_field)
        .ok_or_else(|| err(format!("missing field {}", cfg.dest_field)))?;
    let dest_text = decode_b64(&cfg.dest_field, dest_b64).map_err(&err)?;
    let destination = parse_descriptor(&dest_text)
        .ok_or_else(|| err(format!("undecodable destination descriptor {dest_text:?}")))?;

    let source = match r.payload.get(&cfg.source_field).map(|s| s.trim()) {
        None | Some("") => None,
        Some(b64) => {
            let text = decode_b64(&cfg.source_field, b64).map_err(&err)?;
            if text.trim().is_empty() || text.trim() == ENTRY_MARKER {
                None
            } else {
                Some(parse_descriptor(&text).ok_or_else(|| {
                    err(format!("undecodable source descriptor {text:?}"))
                })?)
            }
        }
    };

    let timestamp = cfg
        .timestamp_fields
        .iter()
        .find_map(|f| r.payload.get(f).map(|v| (f, v)))
        .ok_or_else(|| err("no timestamp field".to_string()))
        .and_then(|(f, v)| {
            parse_timestamp_field(f, v).ok_or_else(|| err(format!("invalid {f} {v:?}")))
        })?;

    Ok(EndpointCall {
        timestamp,
        source,
        destination,
        raw: Some(r.raw.clone()),
    })
}

/// Renders `call` as an export line that [`decode_record`] reads back.
///
/// The timestamp is written in epoch microseconds under the first configured
/// timestamp field, so it survives at full resolution.
pub fn encode_record(call: &EndpointCall, cfg: &FieldConfig) -> String {
    let mut source = serde_json::Map::new();
    source.insert(
        cfg.source_field.clone(),
        Value::String(match &call.source {
            Some(r) => encode_descriptor(r),
            None => B64.encode(ENTRY_MARKER),
        }),
    );
    source.insert(
        cfg.dest_field.clone(),
        Value::String(encode_descriptor(&call.destination)),
    );
    let ts_field = cfg
        .timestamp_fields
        .first()
        .cloned()
        .unwrap_or_else(|| "timestamp".to_string());
    let ts_value = if ts_field == "time_bucket" {
        Value::String(call.timestamp.to_datetime().format("%Y%m%d%H%M%S").to_string())
    } else {
        Value::String(format!("{:016}", call.timestamp.as_micros()))
    };
    source.insert(ts_field, ts_value);
    let mut doc = serde_json::Map::new();
    doc.insert("_index".to_string(), Value::String(cfg.index.clone()));
    doc.insert("_source".to_string(), Value::Object(source));
    Value::Object(doc).to_string()
}
