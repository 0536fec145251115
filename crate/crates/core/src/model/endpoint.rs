use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::path::{ParamType, PathTemplate};
use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum HttpMethod {
    Get,
    Post,
    Put,
    Delete,
    Patch,
    Head,
    Options,
}

impl HttpMethod {
    pub const ALL: [HttpMethod; 7] = [
        HttpMethod::Get,
        HttpMethod::Post,
        HttpMethod::Put,
        HttpMethod::Delete,
        HttpMethod::Patch,
        HttpMethod::Head,
        HttpMethod::Options,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            HttpMethod::Get => "GET",
            HttpMethod::Post => "POST",
            HttpMethod::Put => "PUT",
            HttpMethod::Delete => "DELETE",
            HttpMethod::Patch => "PATCH",
            HttpMethod::Head => "HEAD",
            HttpMethod::Options => "OPTIONS",
        }
    }
}

impl fmt::Display for HttpMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HttpMethod {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        HttpMethod::ALL
            .into_iter()
            .find(|m| m.as_str() == upper)
            .ok_or_else(|| ModelError::UnknownMethod(s.to_string()))
    }
}

/// Canonical identity of an endpoint: `service|METHOD|seg/seg/{type}`.
///
/// Parameter names do not take part; parameter types do.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EndpointKey(String);

impl EndpointKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Owning service, i.e. everything before the first `|`.
    pub fn service(&self) -> &str {
        self.0.split('|').next().unwrap_or("")
    }
}

impl fmt::Display for EndpointKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One REST route signature owned by a service.
#[derive(Debug, Clone)]
pub struct Endpoint {
    pub service: String,
    pub method: HttpMethod,
    pub path: PathTemplate,
    /// `file:line` of the declaration, provenance only.
    pub source: Option<String>,
    /// Declared return type text, provenance only.
    pub return_type: Option<String>,
}

impl Endpoint {
    pub fn new(service: impl Into<String>, method: HttpMethod, path: PathTemplate) -> Endpoint {
        Endpoint {
            service: service.into(),
            method,
            path,
            source: None,
            return_type: None,
        }
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Endpoint {
        self.source = Some(source.into());
        self
    }

    pub fn key(&self) -> EndpointKey {
        endpoint_identity(self)
    }

    pub fn param_types(&self) -> impl Iterator<Item = ParamType> + '_ {
        self.path.params().map(|(_, ty)| ty)
    }
}

/// Builds the canonical identity key of `e`.
pub fn endpoint_identity(e: &Endpoint) -> EndpointKey {
    EndpointKey(format!("{}|{}|{}", e.service, e.method, e.path.shape()))
}

/// Equality is identity equality; provenance fields are ignored.
impl PartialEq for Endpoint {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Endpoint {}
