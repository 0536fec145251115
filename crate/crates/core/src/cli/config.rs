//! The TOML run configuration and its merge with command-line flags.
//!
//! ```toml
//! out = "coverage-out"
//! tests = "tests.json"
//!
//! [inventory]
//! source_roots = ["src"]
//! services_manifest = "services.json"
//! openapi = { "ts-order-service" = "order.yaml" }
//! files = ["extra-inventory.json"]
//! gateway_services = ["ts-gateway-service"]
//! exclude_path_regex = ["/actuator/"]
//!
//! [traces]
//! format = "skywalking-es"
//! files = ["export.jsonl"]
//! clock_skew = "250ms"
//! index_name = "sw_endpoint_relation_server_side"
//!
//! [report]
//! color_scale = [{ upper = 0, color = "red" }, { upper = 100, color = "green" }]
//! ```
//!
//! Relative paths are resolved against the config file's directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::args::CommonArgs;
use super::CliError;
use crate::extract_dynamic::{parse_clock_skew, FieldConfig, TraceFormat};
use crate::extract_static::{DEFAULT_EXCLUDE, DEFAULT_INCLUDE};
use crate::report::ColorScale;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub out: Option<PathBuf>,
    pub tests: Option<PathBuf>,
    pub inventory: InventorySection,
    pub traces: TraceSection,
    pub report: ReportSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InventorySection {
    pub source_roots: Vec<PathBuf>,
    pub services_manifest: Option<PathBuf>,
    pub include_globs: Option<Vec<String>>,
    pub exclude_globs: Option<Vec<String>>,
    pub openapi: BTreeMap<String, PathBuf>,
    pub files: Vec<PathBuf>,
    pub gateway_services: Vec<String>,
    pub exclude_path_regex: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TraceSection {
    pub format: Option<TraceFormat>,
    pub files: Vec<PathBuf>,
    pub clock_skew: Option<String>,
    pub index_name: Option<String>,
    pub source_field: Option<String>,
    pub dest_field: Option<String>,
    pub timestamp_field: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportSection {
    pub color_scale: Option<ColorScale>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: ConfigFile = toml::from_str(&text)
            .map_err(|e| CliError::Input(format!("invalid config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.rebase(base);
        Ok(cfg)
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        self.out.iter_mut().for_each(fix);
        self.tests.iter_mut().for_each(fix);
        self.inventory.source_roots.iter_mut().for_each(fix);
        self.inventory.services_manifest.iter_mut().for_each(fix);
        self.inventory.openapi.values_mut().for_each(fix);
        self.inventory.files.iter_mut().for_each(fix);
        self.traces.files.iter_mut().for_each(fix);
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub out: PathBuf,
    pub source_roots: Vec<PathBuf>,
    pub services_manifest: Option<PathBuf>,
    pub include_globs: Vec<String>,
    pub exclude_globs: Vec<String>,
    pub openapi: Vec<(String, PathBuf)>,
    pub inventory_files: Vec<PathBuf>,
    pub gateway_services: Vec<String>,
    pub exclude_path_regex: Vec<String>,
    pub trace_files: Vec<PathBuf>,
    pub trace_format: TraceFormat,
    pub fields: FieldConfig,
    pub clock_skew_micros: i64,
    pub tests_manifest: Option<PathBuf>,
    pub color_scale: ColorScale,
}

pub const DEFAULT_OUT: &str = "e2ecov-out";

fn parse_openapi_arg(arg: &str) -> Result<(String, PathBuf), CliError> {
    match arg.split_once('=') {
        Some((svc, path)) if !svc.is_empty() && !path.is_empty() => {
            Ok((svc.to_string(), PathBuf::from(path)))
        }
        Some(_) => Err(CliError::Input(format!("--openapi expects SERVICE=PATH, got {arg:?}"))),
        None => {
            let path = PathBuf::from(arg);
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .filter(|s| !s.is_empty())
                .ok_or_else(|| CliError::Input(format!("cannot derive a service name from {arg:?}")))?
                .to_string();
            Ok((stem, path))
        }
    }
}

/// Flags win over the config file; list flags replace the file's list,
/// except gateway services, which are merged.
fn pick<T>(flag: Vec<T>, file: Vec<T>) -> Vec<T> {
    if flag.is_empty() {
        file
    } else {
        flag
    }
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<RunConfig, CliError> {
        let file = match &args.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let inv = file.inventory;
        let tr = file.traces;

        let mut openapi: Vec<(String, PathBuf)> = if args.openapi.is_empty() {
            inv.openapi.into_iter().collect()
        } else {
            args.openapi
                .iter()
                .map(|a| parse_openapi_arg(a))
                .collect::<Result<_, _>>()?
        };
        openapi.sort();

        let mut gateway_services = inv.gateway_services;
        gateway_services.extend(args.gateway_service.iter().cloned());
        gateway_services.sort();
        gateway_services.dedup();

        let mut fields = FieldConfig::default();
        if let Some(v) = args.index_name.clone().or(tr.index_name) {
            fields.index = v;
        }
        if let Some(v) = args.source_field.clone().or(tr.source_field) {
            fields.source_field = v;
        }
        if let Some(v) = args.dest_field.clone().or(tr.dest_field) {
            fields.dest_field = v;
        }
        if let Some(v) = args.timestamp_field.clone().or(tr.timestamp_field) {
            fields.timestamp_fields = vec![v];
        }

        let clock_skew_micros = match args.clock_skew.clone().or(tr.clock_skew) {
            Some(text) => parse_clock_skew(&text).ok_or_else(|| {
                CliError::Input(format!(
                    "invalid clock skew {text:?}; expected e.g. 250ms, -1.5s, 2m (units us, ms, s, m, h)"
                ))
            })?,
            None => 0,
        };

        Ok(RunConfig {
            out: args
                .out
                .clone()
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
            source_roots: pick(args.source_root.clone(), inv.source_roots),
            services_manifest: args.services_manifest.clone().or(inv.services_manifest),
            include_globs: inv
                .include_globs
                .unwrap_or_else(|| DEFAULT_INCLUDE.iter().map(|s| s.to_string()).collect()),
            exclude_globs: inv
                .exclude_globs
                .unwrap_or_else(|| DEFAULT_EXCLUDE.iter().map(|s| s.to_string()).collect()),
            openapi,
            inventory_files: pick(args.inventory.clone(), inv.files),
            gateway_services,
            exclude_path_regex: pick(args.exclude_path_regex.clone(), inv.exclude_path_regex),
            trace_files: pick(args.traces.clone(), tr.files),
            trace_format: args.format.or(tr.format).unwrap_or(TraceFormat::Jsonl),
            fields,
            clock_skew_micros,
            tests_manifest: args.tests.clone().or(file.tests),
            color_scale: file.report.color_scale.unwrap_or_default(),
        })
    }

    pub fn has_inventory_input(&self) -> bool {
        !(self.source_roots.is_empty() && self.openapi.is_empty() && self.inventory_files.is_empty())
    }
}
