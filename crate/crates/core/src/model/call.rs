use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, NaiveDateTime, SecondsFormat, TimeZone, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::endpoint::{EndpointKey, HttpMethod};
use super::ModelError;

/// UTC instant with microsecond resolution, stored as microseconds since the
/// Unix epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Timestamp(i64);

impl Timestamp {
    pub const fn from_micros(micros: i64) -> Timestamp {
        Timestamp(micros)
    }

    /// Millisecond sources are padded with zeros.
    pub fn from_millis(millis: i64) -> Option<Timestamp> {
        millis.checked_mul(1000).map(Timestamp)
    }

    pub fn as_micros(self) -> i64 {
        self.0
    }

    pub fn offset_by(self, micros: i64) -> Timestamp {
        Timestamp(self.0.saturating_add(micros))
    }

    pub fn to_datetime(self) -> DateTime<Utc> {
        Utc.timestamp_micros(self.0)
            .single()
            .expect("timestamps are constructed within chrono's range")
    }

    pub fn to_rfc3339(self) -> String {
        self.to_datetime().to_rfc3339_opts(SecondsFormat::Micros, true)
    }

    /// Parses RFC 3339; sub-microsecond digits are truncated.
    pub fn parse_rfc3339(text: &str) -> Result<Timestamp, ModelError> {
        let dt = DateTime::parse_from_rfc3339(text.trim())
            .map_err(|_| ModelError::BadTimestamp(text.to_string()))?;
        Ok(Timestamp(dt.with_timezone(&Utc).timestamp_micros()))
    }

    /// Parses a minute/second bucket such as `202306151402` or
    /// `20230615140212`, interpreted as UTC.
    pub fn parse_time_bucket(text: &str) -> Result<Timestamp, ModelError> {
        let text = text.trim();
        let value = match text.len() {
            12 => format!("{text}00"),
            14 => text.to_string(),
            _ => return Err(ModelError::BadTimestamp(text.to_string())),
        };
        let naive = NaiveDateTime::parse_from_str(&value, "%Y%m%d%H%M%S")
            .map_err(|_| ModelError::BadTimestamp(text.to_string()))?;
        Ok(Timestamp(naive.and_utc().timestamp_micros()))
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_rfc3339())
    }
}

impl FromStr for Timestamp {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Timestamp::parse_rfc3339(s)
    }
}

impl Serialize for Timestamp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_rfc3339())
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Timestamp::parse_rfc3339(&text).map_err(serde::de::Error::custom)
    }
}

/// A reference to an endpoint as seen on the wire: the owning service, the
/// concrete URL that was invoked, and the HTTP method.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EndpointRef {
    pub service: String,
    pub url: String,
    pub method: HttpMethod,
}

impl EndpointRef {
    pub fn new(service: impl Into<String>, method: HttpMethod, url: impl Into<String>) -> Self {
        EndpointRef {
            service: service.into(),
            url: url.into(),
            method,
        }
    }
}

impl fmt::Display for EndpointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}:{}", self.service, self.method, self.url)
    }
}

/// One observed invocation. `source == None` marks a call entering the system
/// from the user interface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndpointCall {
    #[serde(rename = "ts")]
    pub timestamp: Timestamp,
    #[serde(rename = "src", default, skip_serializing_if = "Option::is_none")]
    pub source: Option<EndpointRef>,
    #[serde(rename = "dst")]
    pub destination: EndpointRef,
    #[serde(skip)]
    pub raw: Option<String>,
}

impl EndpointCall {
    pub fn new(timestamp: Timestamp, source: Option<EndpointRef>, destination: EndpointRef) -> Self {
        EndpointCall {
            timestamp,
            source,
            destination,
            raw: None,
        }
    }

    pub fn to_jsonl_line(&self) -> String {
        serde_json::to_string(self).expect("calls are always serializable")
    }

    pub fn from_jsonl_line(line: &str) -> Result<EndpointCall, ModelError> {
        serde_json::from_str(line).map_err(|e| ModelError::Json(e.to_string()))
    }
}

/// Provenance (`raw`) does not take part in equality.
impl PartialEq for EndpointCall {
    fn eq(&self, other: &Self) -> bool {
        self.timestamp == other.timestamp
            && self.source == other.source
            && self.destination == other.destination
    }
}

impl Eq for EndpointCall {}

/// Why a call could not be attributed to an inventory endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnmatchedReason {
    /// The destination service is not in the inventory.
    UnknownService,
    /// The service exists but no endpoint signature fits.
    NoCandidate,
    /// The invoked URL could not be split into segments.
    InvalidUrl,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum CallOutcome {
    Matched { endpoint: EndpointKey },
    Gateway,
    Unmatched { reason: UnmatchedReason },
}

impl CallOutcome {
    pub fn matched_key(&self) -> Option<&EndpointKey> {
        match self {
            CallOutcome::Matched { endpoint } => Some(endpoint),
            _ => None,
        }
    }
}
