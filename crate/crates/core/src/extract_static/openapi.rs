//! OpenAPI 3.x documents (JSON or YAML) as an inventory source.

use std::collections::BTreeMap;

use serde_json::Value;

use super::StaticError;
use crate::diag::{Warning, WarningKind};
use crate::model::{normalize_path, Endpoint, EndpointInventory, HttpMethod, ParamType};

#[derive(Debug, Clone, Default)]
pub struct OpenApiOutput {
    pub inventory: EndpointInventory,
    pub warnings: Vec<Warning>,
}

const OPERATIONS: &[(&str, HttpMethod)] = &[
    ("get", HttpMethod::Get),
    ("put", HttpMethod::Put),
    ("post", HttpMethod::Post),
    ("delete", HttpMethod::Delete),
    ("options", HttpMethod::Options),
    ("head", HttpMethod::Head),
    ("patch", HttpMethod::Patch),
];

fn schema_type(param: &Value) -> ParamType {
    match param.pointer("/schema/type").and_then(Value::as_str) {
        Some("integer") => ParamType::Integer,
        Some("number") => ParamType::Number,
        Some("boolean") => ParamType::Boolean,
        Some("string") => ParamType::String,
        _ => ParamType::Opaque,
    }
}

/// Follows a local `#/...` reference; other values are returned as-is.
fn resolve<'a>(root: &'a Value, value: &'a Value) -> &'a Value {
    let mut current = value;
    for _ in 0..16 {
        match current.get("$ref").and_then(Value::as_str) {
            Some(r) if r.starts_with("#/") => match root.pointer(&r[1..]) {
                Some(target) => current = target,
                None => return current,
            },
            _ => return current,
        }
    }
    current
}

/// Collects `in: path` parameter types by name; later lists override earlier.
fn path_param_types<'a>(
    root: &'a Value,
    lists: impl IntoIterator<Item = Option<&'a Value>>,
) -> BTreeMap<String, ParamType> {
    let mut types = BTreeMap::new();
    for list in lists.into_iter().flatten() {
        for p in list.as_array().into_iter().flatten() {
            let p = resolve(root, p);
            if p.get("in").and_then(Value::as_str) != Some("path") {
                continue;
            }
            if let Some(name) = p.get("name").and_then(Value::as_str) {
                types.insert(name.to_string(), schema_type(p));
            }
        }
    }
    types
}

/// Parses an OpenAPI document into an inventory fragment for `service_id`.
pub fn parse_openapi(doc: &[u8], service_id: &str) -> Result<OpenApiOutput, StaticError> {
    // YAML is a superset of JSON, so one parser covers both encodings.
    let root: Value =
        serde_yaml::from_slice(doc).map_err(|e| StaticError::OpenApi(e.to_string()))?;
    let paths = root
        .get("paths")
        .and_then(Value::as_object)
        .ok_or(StaticError::MissingPaths)?;
    if paths.is_empty() {
        return Err(StaticError::MissingPaths);
    }

    let mut out = OpenApiOutput::default();
    out.inventory.add_service(service_id)?;
    for (raw_path, item) in paths {
        let item = resolve(&root, item);
        let template = match normalize_path(raw_path) {
            Ok(t) => t,
            Err(err) => {
                out.warnings.push(Warning::new(
                    WarningKind::InvalidRoute,
                    format!("{service_id}: {raw_path}: {err}"),
                ));
                continue;
            }
        };
        for (op_name, method) in OPERATIONS {
            let Some(op) = item.get(*op_name) else {
                continue;
            };
            let types = path_param_types(&root, [item.get("parameters"), op.get("parameters")]);
            let path = template.clone().with_param_types(|name, _| {
                types.get(name).copied().unwrap_or_else(|| {
                    out.warnings.push(Warning::new(
                        WarningKind::UntypedParam,
                        format!(
                            "{service_id}: {} {raw_path}: parameter {{{name}}} not declared, typed opaque",
                            method
                        ),
                    ));
                    ParamType::Opaque
                })
            });
            let mut endpoint = Endpoint::new(service_id, *method, path)
                .with_source(format!("openapi:{} {raw_path}", method));
            endpoint.return_type = op
                .get("operationId")
                .and_then(Value::as_str)
                .map(|s| format!("operationId={s}"));
            let key = endpoint.key();
            if !out.inventory.insert(endpoint)? {
                out.warnings.push(Warning::new(
                    WarningKind::InvalidRoute,
                    format!("{service_id}: duplicate operation {key} ignored"),
                ));
            }
        }
    }
    Ok(out)
}
