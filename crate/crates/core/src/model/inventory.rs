//! The endpoint universe, partitioned by owning service.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::endpoint::{Endpoint, EndpointKey, HttpMethod};
use super::path::{normalize_path, ParamType};
use super::ModelError;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Service {
    pub gateway: bool,
    pub endpoints: BTreeMap<EndpointKey, Endpoint>,
}

/// `E_ms(i)` for every service, plus the set of gateway services.
///
/// Endpoints owned by gateway services are kept for reference but never
/// count towards coverage.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EndpointInventory {
    services: BTreeMap<String, Service>,
}

pub(crate) fn validate_service_name(name: &str) -> Result<(), ModelError> {
    if name.trim().is_empty() || name.contains('|') || name.chars().any(char::is_control) {
        return Err(ModelError::BadServiceName(name.to_string()));
    }
    Ok(())
}

impl EndpointInventory {
    pub fn new() -> EndpointInventory {
        EndpointInventory::default()
    }

    /// Declares a service; an existing entry keeps its endpoints and gateway
    /// flag.
    pub fn add_service(&mut self, name: &str) -> Result<&mut Service, ModelError> {
        validate_service_name(name)?;
        Ok(self.services.entry(name.to_string()).or_default())
    }

    pub fn set_gateway(&mut self, name: &str, gateway: bool) -> Result<(), ModelError> {
        self.add_service(name)?.gateway = gateway;
        Ok(())
    }

    /// Inserts `endpoint` under its service. Returns `false` if an endpoint
    /// with the same identity was already present (the existing one is kept).
    pub fn insert(&mut self, endpoint: Endpoint) -> Result<bool, ModelError> {
        let service = self.add_service(&endpoint.service.clone())?;
        let key = endpoint.key();
        if service.endpoints.contains_key(&key) {
            return Ok(false);
        }
        service.endpoints.insert(key, endpoint);
        Ok(true)
    }

    pub fn services(&self) -> &BTreeMap<String, Service> {
        &self.services
    }

    pub fn service(&self, name: &str) -> Option<&Service> {
        self.services.get(name)
    }

    pub fn is_gateway(&self, name: &str) -> bool {
        self.services.get(name).is_some_and(|s| s.gateway)
    }

    pub fn gateway_services(&self) -> BTreeSet<&str> {
        self.services
            .iter()
            .filter(|(_, s)| s.gateway)
            .map(|(n, _)| n.as_str())
            .collect()
    }

    /// Non-gateway services, in name order. `m_total` is their count.
    pub fn covered_services(&self) -> impl Iterator<Item = (&str, &Service)> {
        self.services
            .iter()
            .filter(|(_, s)| !s.gateway)
            .map(|(n, s)| (n.as_str(), s))
    }

    /// The system endpoint universe: union of `E_ms(j)` over non-gateway
    /// services.
    pub fn universe(&self) -> impl Iterator<Item = &Endpoint> {
        self.covered_services()
            .flat_map(|(_, s)| s.endpoints.values())
    }

    pub fn universe_size(&self) -> usize {
        self.covered_services().map(|(_, s)| s.endpoints.len()).sum()
    }

    pub fn endpoint(&self, key: &EndpointKey) -> Option<&Endpoint> {
        self.services
            .get(key.service())
            .and_then(|s| s.endpoints.get(key))
    }

    pub fn contains(&self, key: &EndpointKey) -> bool {
        self.endpoint(key).is_some()
    }

    /// Total number of endpoints, gateway-owned ones included.
    pub fn len(&self) -> usize {
        self.services.values().map(|s| s.endpoints.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops endpoints for which `keep` returns false. Services stay.
    pub fn retain(&mut self, mut keep: impl FnMut(&Endpoint) -> bool) -> usize {
        let mut removed = 0;
        for service in self.services.values_mut() {
            let before = service.endpoints.len();
            service.endpoints.retain(|_, e| keep(e));
            removed += before - service.endpoints.len();
        }
        removed
    }

    pub fn to_doc(&self) -> InventoryDoc {
        InventoryDoc {
            services: self
                .services
                .iter()
                .map(|(name, svc)| ServiceDoc {
                    name: name.clone(),
                    gateway: svc.gateway,
                    endpoints: svc.endpoints.values().map(EndpointDoc::from).collect(),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: InventoryDoc) -> Result<EndpointInventory, ModelError> {
        let mut inv = EndpointInventory::new();
        for svc in doc.services {
            if inv.services.contains_key(&svc.name) {
                return Err(ModelError::DuplicateService(svc.name));
            }
            inv.set_gateway(&svc.name, svc.gateway)?;
            for ep in svc.endpoints {
                let endpoint = ep.into_endpoint(&svc.name)?;
                let key = endpoint.key();
                if !inv.insert(endpoint)? {
                    return Err(ModelError::DuplicateEndpoint(key.to_string()));
                }
            }
        }
        Ok(inv)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.to_doc())
            .expect("inventory document is always serializable");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<EndpointInventory, ModelError> {
        let doc: InventoryDoc =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        EndpointInventory::from_doc(doc)
    }
}

/// On-disk inventory document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InventoryDoc {
    pub services: Vec<ServiceDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServiceDoc {
    pub name: String,
    #[serde(default)]
    pub gateway: bool,
    #[serde(default)]
    pub endpoints: Vec<EndpointDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointDoc {
    pub method: String,
    pub path: String,
    #[serde(default)]
    pub params: Vec<ParamDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub return_type: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamDoc {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

impl From<&Endpoint> for EndpointDoc {
    fn from(e: &Endpoint) -> Self {
        EndpointDoc {
            method: e.method.to_string(),
            path: e.path.to_string(),
            params: e
                .path
                .params()
                .map(|(name, ty)| ParamDoc {
                    name: name.to_string(),
                    ty: ty.to_string(),
                })
                .collect(),
            source: e.source.clone(),
            return_type: e.return_type.clone(),
        }
    }
}

impl EndpointDoc {
    /// Parameters missing from `params` default to `string`.
    pub fn into_endpoint(self, service: &str) -> Result<Endpoint, ModelError> {
        let method: HttpMethod = self.method.parse()?;
        let declared: BTreeMap<&str, ParamType> = self
            .params
            .iter()
            .map(|p| (p.name.as_str(), ParamType::from_name(&p.ty)))
            .collect();
        let path = normalize_path(&self.path)?
            .with_param_types(|name, ty| declared.get(name).copied().unwrap_or(ty));
        Ok(Endpoint {
            service: service.to_string(),
            method,
            path,
            source: self.source,
            return_type: self.return_type,
        })
    }
}

/// Convenience for tests and fixtures: `"GET /orders/{id:integer}"`.
///
/// Inline `{name:type}` is only understood here; route templates elsewhere
/// treat the text after `:` as a regex constraint.
pub fn endpoint_from_spec(service: &str, spec: &str) -> Result<Endpoint, ModelError> {
    let (method, path) = spec
        .trim()
        .split_once(' ')
        .ok_or_else(|| ModelError::EmptyPath(spec.to_string()))?;
    let method: HttpMethod = method.parse()?;
    let mut types = Vec::new();
    let template = normalize_path(path)?;
    for seg in path.split('/') {
        if let Some(inner) = seg.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
            let ty = inner
                .split_once(':')
                .map_or(ParamType::String, |(_, t)| ParamType::from_name(t));
            types.push(ty);
        }
    }
    let mut idx = 0;
    let template = template.with_param_types(|_, ty| {
        let t = types.get(idx).copied().unwrap_or(ty);
        idx += 1;
        t
    });
    Ok(Endpoint::new(service, method, template))
}
