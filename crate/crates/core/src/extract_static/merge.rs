use std::collections::BTreeMap;

use regex::Regex;

use super::StaticError;
use crate::diag::{Warning, WarningKind};
use crate::model::EndpointInventory;

#[derive(Debug, Clone, Default)]
pub struct MergeOutput {
    pub inventory: EndpointInventory,
    pub warnings: Vec<Warning>,
}

/// Unions inventory fragments by endpoint identity.
///
/// Endpoints that differ only in parameter types are both kept and reported.
/// A service flagged as gateway in one fragment but not in another is an
/// error.
pub fn merge_inventories<'a>(
    parts: impl IntoIterator<Item = &'a EndpointInventory>,
) -> Result<MergeOutput, StaticError> {
    let mut inventory = EndpointInventory::new();
    let mut gateway_flags: BTreeMap<String, bool> = BTreeMap::new();
    for part in parts {
        for (name, service) in part.services() {
            match gateway_flags.get(name) {
                Some(&flag) if flag != service.gateway => {
                    return Err(StaticError::GatewayConflict(name.clone()));
                }
                _ => {
                    gateway_flags.insert(name.clone(), service.gateway);
                }
            }
            inventory.set_gateway(name, service.gateway)?;
            for endpoint in service.endpoints.values() {
                inventory.insert(endpoint.clone())?;
            }
        }
    }

    let mut warnings = Vec::new();
    for (name, service) in inventory.services() {
        let mut by_shape: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
        for (key, e) in &service.endpoints {
            by_shape
                .entry((e.method.to_string(), e.path.untyped_shape()))
                .or_default()
                .push(key.to_string());
        }
        for ((method, shape), keys) in by_shape.into_iter().filter(|(_, k)| k.len() > 1) {
            warnings.push(Warning::new(
                WarningKind::TypeConflict,
                format!(
                    "{name}: {method} {shape} declared with conflicting parameter types: {}",
                    keys.join(", ")
                ),
            ));
        }
    }
    Ok(MergeOutput {
        inventory,
        warnings,
    })
}

/// Removes endpoints whose rendered path (`/a/{id}`) matches any pattern.
pub fn exclude_paths(inventory: &mut EndpointInventory, patterns: &[Regex]) -> usize {
    if patterns.is_empty() {
        return 0;
    }
    inventory.retain(|e| {
        let rendered = e.path.to_string();
        !patterns.iter().any(|re| re.is_match(&rendered))
    })
}
