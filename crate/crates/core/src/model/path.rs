//! Route templates and concrete URL paths.
//!
//! A template is an ordered list of [`Segment`]s. Concrete URLs observed in
//! traces are split the same way but never produce parameter segments.

use std::fmt;

use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, CONTROLS};
use serde::{Deserialize, Serialize};

use super::ModelError;

/// Declared type of a path parameter.
///
/// Ordering follows matching specificity: `Integer` is the most specific,
/// `Opaque` the least.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamType {
    Integer,
    Number,
    Boolean,
    String,
    Opaque,
}

impl ParamType {
    pub const ALL: [ParamType; 5] = [
        ParamType::Integer,
        ParamType::Number,
        ParamType::Boolean,
        ParamType::String,
        ParamType::Opaque,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParamType::Integer => "integer",
            ParamType::Number => "number",
            ParamType::Boolean => "boolean",
            ParamType::String => "string",
            ParamType::Opaque => "opaque",
        }
    }

    /// Higher is more specific.
    pub fn specificity(self) -> u8 {
        match self {
            ParamType::Integer => 4,
            ParamType::Number => 3,
            ParamType::Boolean => 2,
            ParamType::String => 1,
            ParamType::Opaque => 0,
        }
    }

    /// Parses a type name as written in inventory JSON. Unknown names collapse
    /// to `Opaque`.
    pub fn from_name(name: &str) -> ParamType {
        match name.trim().to_ascii_lowercase().as_str() {
            "integer" => ParamType::Integer,
            "number" => ParamType::Number,
            "boolean" => ParamType::Boolean,
            "string" => ParamType::String,
            _ => ParamType::Opaque,
        }
    }
}

impl fmt::Display for ParamType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Segment {
    Literal(String),
    Param { name: String, ty: ParamType },
}

impl Segment {
    pub fn literal(text: impl Into<String>) -> Segment {
        Segment::Literal(text.into())
    }

    pub fn param(name: impl Into<String>, ty: ParamType) -> Segment {
        Segment::Param {
            name: name.into(),
            ty,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Segment::Literal(_))
    }
}

/// Characters escaped when a literal segment is rendered back to text.
const LITERAL_ESCAPES: &AsciiSet = &CONTROLS
    .add(b' ')
    .add(b'%')
    .add(b'/')
    .add(b'?')
    .add(b'#')
    .add(b'{')
    .add(b'}');

fn encode_literal(text: &str) -> String {
    let encoded = utf8_percent_encode(text, LITERAL_ESCAPES).to_string();
    // a leading ':' would read back as a placeholder
    match encoded.strip_prefix(':') {
        Some(rest) => format!("%3A{rest}"),
        None => encoded,
    }
}

/// A normalized, non-empty route template.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathTemplate(Vec<Segment>);

impl PathTemplate {
    pub fn new(segments: Vec<Segment>) -> Result<PathTemplate, ModelError> {
        if segments.is_empty() {
            return Err(ModelError::EmptyPath(String::new()));
        }
        for seg in &segments {
            let empty = match seg {
                Segment::Literal(t) => t.is_empty(),
                Segment::Param { name, .. } => name.is_empty(),
            };
            if empty {
                return Err(ModelError::EmptySegment(render_segments(&segments)));
            }
        }
        Ok(PathTemplate(segments))
    }

    pub fn parse(raw: &str) -> Result<PathTemplate, ModelError> {
        normalize_path(raw)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn literal_count(&self) -> usize {
        self.0.iter().filter(|s| s.is_literal()).count()
    }

    pub fn params(&self) -> impl Iterator<Item = (&str, ParamType)> {
        self.0.iter().filter_map(|s| match s {
            Segment::Param { name, ty } => Some((name.as_str(), *ty)),
            Segment::Literal(_) => None,
        })
    }

    /// Retypes every parameter through `f(name, current_type)`.
    pub fn with_param_types(mut self, mut f: impl FnMut(&str, ParamType) -> ParamType) -> Self {
        for seg in &mut self.0 {
            if let Segment::Param { name, ty } = seg {
                *ty = f(name, *ty);
            }
        }
        self
    }

    /// Template shape used in identity keys: literals verbatim (escaped),
    /// parameters as `{type}`, no leading slash.
    pub fn shape(&self) -> String {
        self.0
            .iter()
            .map(|s| match s {
                Segment::Literal(t) => encode_literal(t),
                Segment::Param { ty, .. } => format!("{{{ty}}}"),
            })
            .collect::<Vec<_>>()
            .join("/")
    }

    /// Shape with parameter types erased; endpoints sharing it differ only in
    /// parameter typing.
    pub fn untyped_shape(&self) -> String {
        self.0
            .iter()
            .map(|s| match s {
                Segment::Literal(t) => encode_literal(t),
                Segment::Param { .. } => "{}".to_string(),
            })
            .collect::<Vec<_>>()
            .join("/")
    }
}

fn render_segments(segments: &[Segment]) -> String {
    let mut out = String::new();
    for seg in segments {
        out.push('/');
        match seg {
            Segment::Literal(t) => out.push_str(&encode_literal(t)),
            Segment::Param { name, .. } => {
                out.push('{');
                out.push_str(name);
                out.push('}');
            }
        }
    }
    out
}

impl fmt::Display for PathTemplate {
    /// Renders `/a/b/{name}`; parsing the output yields the same template
    /// up to parameter types.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_segments(&self.0))
    }
}

/// Splits a raw path into its non-empty, still-encoded segments.
///
/// Scheme and authority (`http://host:port`), query string, and fragment are
/// dropped.
fn raw_segments(raw: &str) -> impl Iterator<Item = &str> {
    let mut path = raw.trim();
    if let Some(idx) = path.find("://").filter(|&i| !path[..i].contains('/')) {
        let after = &path[idx + 3..];
        path = after.find('/').map_or("", |i| &after[i..]);
    }
    let end = path.find(['?', '#']).unwrap_or(path.len());
    path[..end].split('/').filter(|s| !s.is_empty())
}

fn decode(segment: &str, raw: &str) -> Result<String, ModelError> {
    let bytes = segment.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'%' {
            let valid = bytes.len() > i + 2
                && bytes[i + 1].is_ascii_hexdigit()
                && bytes[i + 2].is_ascii_hexdigit();
            if !valid {
                return Err(ModelError::BadPercentEncoding(raw.to_string()));
            }
        }
    }
    percent_decode_str(segment)
        .decode_utf8()
        .map(|s| s.into_owned())
        .map_err(|_| ModelError::BadPercentEncoding(raw.to_string()))
}

fn placeholder_name(segment: &str) -> Option<&str> {
    if let Some(inner) = segment.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        // `{id:[0-9]+}` carries a regex constraint after the colon
        let name = inner.split(':').next().unwrap_or("");
        return Some(name.trim());
    }
    segment
        .strip_prefix(':')
        .map(|rest| rest.split(':').next().unwrap_or(""))
}

/// Normalizes a URL path or route template into segments.
///
/// `{name}` and `:name` become parameters typed `string`; literals are
/// percent-decoded; empty segments collapse.
pub fn normalize_path(raw: &str) -> Result<PathTemplate, ModelError> {
    let mut segments = Vec::new();
    for seg in raw_segments(raw) {
        match placeholder_name(seg) {
            Some("") => return Err(ModelError::EmptySegment(raw.to_string())),
            Some(name) => {
                if segments.iter().any(|s| matches!(s, Segment::Param { name: n, .. } if n == name)) {
                    return Err(ModelError::DuplicateParam(raw.to_string(), name.to_string()));
                }
                segments.push(Segment::param(name, ParamType::String))
            }
            None => segments.push(Segment::Literal(decode(seg, raw)?)),
        }
    }
    if segments.is_empty() {
        return Err(ModelError::EmptyPath(raw.to_string()));
    }
    Ok(PathTemplate(segments))
}

/// Splits a concrete invoked URL into decoded segments. Braces and colons are
/// ordinary characters here.
///
/// An empty result is allowed: a request to `/` is a valid call, it just
/// cannot match any template.
pub fn concrete_segments(raw: &str) -> Result<Vec<String>, ModelError> {
    raw_segments(raw).map(|s| decode(s, raw)).collect()
}
