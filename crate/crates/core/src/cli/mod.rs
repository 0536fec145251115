//! The `e2ecov` command line: stage commands over a shared output directory.
//!
//! Artifacts under `--out`:
//!
//! - `inventory.json` from `extract`
//! - `ingest/index.json`, `ingest/tests/*.jsonl`, `ingest/orphans.jsonl`,
//!   `ingest/rejected.jsonl` from `ingest`
//! - `coverage.json`, `coverage.txt`, `coverage.dot`, `coverage.html`,
//!   `match_audit.jsonl` from `analyze`
//!
//! Exit codes: 0 success, 1 coverage gate failed, 2 input or configuration
//! error, 3 internal error.

mod args;
mod cache;
mod config;

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diag::Warning;
use crate::extract_dynamic::{read_calls, window_calls, IngestStats};
use crate::extract_static::{
    exclude_paths, merge_inventories, parse_openapi, scan_annotations, ServicesManifest,
    SourceTree, StaticError,
};
use crate::matching::{audit_jsonl, match_test_traces};
use crate::metrics::{build_report, percent, MetricsError};
use crate::model::{
    CoverageReport, EndpointCall, EndpointInventory, ModelError, TestManifest, Timestamp,
};
use crate::report::{render_dot, render_endpoint_list_html, render_json, render_text};

pub use args::{Cli, Command, CommonArgs};
pub use cache::{Fingerprint, OutputLock};
pub use config::{ConfigFile, RunConfig, DEFAULT_OUT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_GATE_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<StaticError> for CliError {
    fn from(e: StaticError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// What a command wants printed. Warnings go to stderr, `lines` to stdout.
#[derive(Debug, Default)]
pub struct Output {
    pub lines: Vec<String>,
    pub warnings: Vec<String>,
}

impl Output {
    fn warn(&mut self, w: impl std::fmt::Display) {
        self.warnings.push(w.to_string());
    }

    fn warn_all(&mut self, ws: impl IntoIterator<Item = Warning>) {
        self.warnings.extend(ws.into_iter().map(|w| w.to_string()));
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, contents)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn inventory_path(out: &Path) -> PathBuf {
    out.join("inventory.json")
}

fn ingest_dir(out: &Path) -> PathBuf {
    out.join("ingest")
}

// ---- extract ----

fn extract_fingerprint(cfg: &RunConfig) -> Result<String, CliError> {
    let mut f = Fingerprint::new("extract");
    for root in &cfg.source_roots {
        f.tree(root)?;
    }
    if let Some(m) = &cfg.services_manifest {
        f.file(m)?;
    }
    f.field("include", cfg.include_globs.join("\n").as_bytes());
    f.field("exclude", cfg.exclude_globs.join("\n").as_bytes());
    for (svc, path) in &cfg.openapi {
        f.field("openapi", svc.as_bytes());
        f.file(path)?;
    }
    for p in &cfg.inventory_files {
        f.file(p)?;
    }
    f.field("gateways", cfg.gateway_services.join("\n").as_bytes());
    f.field("exclude-path", cfg.exclude_path_regex.join("\n").as_bytes());
    Ok(f.hex())
}

/// Builds the merged inventory from every configured source.
pub fn build_inventory(cfg: &RunConfig, out: &mut Output) -> Result<EndpointInventory, CliError> {
    if !cfg.has_inventory_input() {
        return Err(CliError::Input(
            "no inventory input: pass --source-root, --openapi, or --inventory".to_string(),
        ));
    }
    let manifest = match &cfg.services_manifest {
        Some(p) => Some(ServicesManifest::from_json(&read_text(p)?)?),
        None => None,
    };
    let patterns: Vec<Regex> = cfg
        .exclude_path_regex
        .iter()
        .map(|r| Regex::new(r).map_err(|e| CliError::Input(format!("invalid --exclude-path-regex {r:?}: {e}"))))
        .collect::<Result<_, _>>()?;

    let mut parts = Vec::new();
    for root in &cfg.source_roots {
        let mut tree = SourceTree::new(root);
        tree.include_globs = cfg.include_globs.clone();
        tree.exclude_globs = cfg.exclude_globs.clone();
        if let Some(m) = &manifest {
            tree = tree.with_manifest(m.clone());
        }
        let scan = scan_annotations(&tree)?;
        out.warn_all(scan.warnings);
        parts.push(scan.inventory);
    }
    for (svc, path) in &cfg.openapi {
        let bytes = fs::read(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let parsed = parse_openapi(&bytes, svc)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        out.warn_all(parsed.warnings);
        parts.push(parsed.inventory);
    }
    for path in &cfg.inventory_files {
        let inv = EndpointInventory::from_json(&read_text(path)?)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        parts.push(inv);
    }
    let merged = merge_inventories(parts.iter())?;
    out.warn_all(merged.warnings);
    let mut inventory = merged.inventory;
    for g in &cfg.gateway_services {
        inventory.set_gateway(g, true)?;
    }
    let removed = exclude_paths(&mut inventory, &patterns);
    if removed > 0 {
        out.lines.push(format!("excluded {removed} endpoints by path pattern"));
    }
    Ok(inventory)
}

fn run_extract_stage(cfg: &RunConfig, out: &mut Output, force: bool) -> Result<(), CliError> {
    let fingerprint = extract_fingerprint(cfg)?;
    let target = inventory_path(&cfg.out);
    if !force && cache::is_fresh(&cfg.out, "extract", &fingerprint, std::slice::from_ref(&target)) {
        out.warn("note: inventory.json is up to date; reusing it");
        return Ok(());
    }
    cache::forget(&cfg.out, "extract");
    let inventory = build_inventory(cfg, out)?;
    write_file(&target, &inventory.to_json())?;
    cache::record(&cfg.out, "extract", &fingerprint)?;
    out.lines.push(format!(
        "inventory: {} endpoints in {} services ({} gateway) -> {}",
        inventory.universe_size(),
        inventory.covered_services().count(),
        inventory.gateway_services().len(),
        target.display()
    ));
    Ok(())
}

pub fn cmd_extract(cfg: &RunConfig) -> Result<Output, CliError> {
    let _lock = OutputLock::acquire(&cfg.out)?;
    let mut out = Output::default();
    run_extract_stage(cfg, &mut out, true)?;
    Ok(out)
}

// ---- ingest ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub id: String,
    pub start: Timestamp,
    pub end: Timestamp,
    pub calls: usize,
    /// Relative to the ingest directory.
    pub file: String,
}

/// `ingest/index.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestIndex {
    pub tests: Vec<IndexEntry>,
    pub orphans: usize,
    pub rejected: usize,
    pub clock_skew_us: i64,
    pub stats: IngestStats,
}

/// Maps test ids to distinct, filesystem-safe file stems.
pub fn sanitized_names<'a>(ids: impl IntoIterator<Item = &'a str>) -> BTreeMap<String, String> {
    let mut taken = BTreeSet::new();
    let mut names = BTreeMap::new();
    for id in ids {
        let mut base: String = id
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect();
        if base.is_empty() {
            base = "test".to_string();
        }
        let mut name = base.clone();
        let mut n = 2;
        // compare case-insensitively for case-folding filesystems
        while !taken.insert(name.to_ascii_lowercase()) {
            name = format!("{base}-{n}");
            n += 1;
        }
        names.insert(id.to_string(), name);
    }
    names
}

fn jsonl(calls: &[EndpointCall]) -> String {
    let mut s = String::new();
    for c in calls {
        s.push_str(&c.to_jsonl_line());
        s.push('\n');
    }
    s
}

fn ingest_fingerprint(cfg: &RunConfig) -> Result<String, CliError> {
    let mut f = Fingerprint::new("ingest");
    for p in &cfg.trace_files {
        f.file(p)?;
    }
    if let Some(m) = &cfg.tests_manifest {
        f.file(m)?;
    }
    f.field(
        "format",
        serde_json::to_string(&cfg.trace_format).unwrap_or_default().as_bytes(),
    );
    f.field("fields", serde_json::to_string(&cfg.fields).unwrap_or_default().as_bytes());
    f.field("skew", cfg.clock_skew_micros.to_string().as_bytes());
    Ok(f.hex())
}

fn run_ingest_stage(cfg: &RunConfig, out: &mut Output, force: bool) -> Result<(), CliError> {
    if cfg.trace_files.is_empty() {
        return Err(CliError::Input("no trace input: pass --traces".to_string()));
    }
    let manifest_path = cfg
        .tests_manifest
        .as_ref()
        .ok_or_else(|| CliError::Input("no test manifest: pass --tests".to_string()))?;
    let fingerprint = ingest_fingerprint(cfg)?;
    let dir = ingest_dir(&cfg.out);
    let index_path = dir.join("index.json");
    if !force && cache::is_fresh(&cfg.out, "ingest", &fingerprint, std::slice::from_ref(&index_path)) {
        out.warn("note: ingest/ is up to date; reusing it");
        return Ok(());
    }
    cache::forget(&cfg.out, "ingest");

    let manifest = TestManifest::from_json(&read_text(manifest_path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", manifest_path.display())))?;
    let mut calls = Vec::new();
    let mut rejected = Vec::new();
    let mut stats = IngestStats::default();
    for path in &cfg.trace_files {
        let ingested = read_calls(&read_text(path)?, cfg.trace_format, &cfg.fields);
        for w in ingested.warnings {
            out.warn(format!("{}: {}", path.display(), w));
        }
        stats.records += ingested.stats.records;
        stats.dropped += ingested.stats.dropped;
        stats.decoded += ingested.stats.decoded;
        stats.errors += ingested.stats.errors;
        calls.extend(ingested.calls);
        rejected.extend(ingested.errors);
    }
    let windowed = window_calls(&calls, &manifest.tests, cfg.clock_skew_micros)
        .map_err(|e| CliError::Input(format!("{}: {e}", manifest_path.display())))?;
    out.warn_all(windowed.warnings.clone());

    let tests_dir = dir.join("tests");
    if tests_dir.is_dir() {
        for entry in fs::read_dir(&tests_dir).into_iter().flatten().flatten() {
            if entry.path().extension().is_some_and(|e| e == "jsonl") {
                let _ = fs::remove_file(entry.path());
            }
        }
    }
    let names = sanitized_names(windowed.per_test.keys().map(String::as_str));
    let mut entries = Vec::new();
    for w in &manifest.tests {
        let calls = &windowed.per_test[&w.test_id];
        let file = format!("tests/{}.jsonl", names[&w.test_id]);
        write_file(&dir.join(&file), &jsonl(calls))?;
        entries.push(IndexEntry {
            id: w.test_id.clone(),
            start: w.start,
            end: w.end,
            calls: calls.len(),
            file,
        });
    }
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    write_file(&dir.join("orphans.jsonl"), &jsonl(&windowed.orphans))?;
    let mut rejected_text = String::new();
    for r in &rejected {
        rejected_text.push_str(&serde_json::to_string(r).map_err(|e| CliError::Internal(e.to_string()))?);
        rejected_text.push('\n');
    }
    write_file(&dir.join("rejected.jsonl"), &rejected_text)?;
    let index = IngestIndex {
        tests: entries,
        orphans: windowed.orphans.len(),
        rejected: rejected.len(),
        clock_skew_us: cfg.clock_skew_micros,
        stats,
    };
    let mut text = serde_json::to_string_pretty(&index).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    write_file(&index_path, &text)?;
    cache::record(&cfg.out, "ingest", &fingerprint)?;
    out.lines.push(format!(
        "ingest: {} records, {} calls in {} tests, {} orphans, {} rejected -> {}",
        index.stats.records,
        index.stats.decoded,
        index.tests.len(),
        index.orphans,
        index.rejected,
        dir.display()
    ));
    Ok(())
}

pub fn cmd_ingest(cfg: &RunConfig) -> Result<Output, CliError> {
    let _lock = OutputLock::acquire(&cfg.out)?;
    let mut out = Output::default();
    run_ingest_stage(cfg, &mut out, true)?;
    Ok(out)
}

// ---- analyze ----

/// Reads the windows written by `ingest`.
pub fn load_ingested(out_dir: &Path) -> Result<BTreeMap<String, Vec<EndpointCall>>, CliError> {
    let dir = ingest_dir(out_dir);
    let index_path = dir.join("index.json");
    let index: IngestIndex = serde_json::from_str(&read_text(&index_path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", index_path.display())))?;
    let mut windows = BTreeMap::new();
    for entry in index.tests {
        let path = dir.join(&entry.file);
        let text = read_text(&path)?;
        let calls = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, l)| {
                EndpointCall::from_jsonl_line(l).map_err(|e| {
                    CliError::Input(format!("{}:{}: {e}", path.display(), i + 1))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        windows.insert(entry.id, calls);
    }
    Ok(windows)
}

pub fn load_inventory(out_dir: &Path) -> Result<EndpointInventory, CliError> {
    let path = inventory_path(out_dir);
    EndpointInventory::from_json(&read_text(&path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Runs the analysis and writes every report. Returns the report.
fn run_analyze(cfg: &RunConfig, from_cache: bool, out: &mut Output) -> Result<CoverageReport, CliError> {
    if !from_cache {
        run_extract_stage(cfg, out, false)?;
        run_ingest_stage(cfg, out, false)?;
    }
    let mut inventory = load_inventory(&cfg.out)?;
    for g in &cfg.gateway_services {
        inventory.set_gateway(g, true)?;
    }
    let windows = load_ingested(&cfg.out)?;
    let traces = match_test_traces(&windows, &inventory);
    let report = build_report(&inventory, &traces)?;
    for w in &report.warnings {
        out.warn(format!("warning: {w}"));
    }

    write_file(&cfg.out.join("coverage.json"), &render_json(&report))?;
    write_file(&cfg.out.join("coverage.txt"), &render_text(&report))?;
    write_file(&cfg.out.join("coverage.dot"), &render_dot(&report, &cfg.color_scale))?;
    write_file(
        &cfg.out.join("coverage.html"),
        &render_endpoint_list_html(&report, &inventory),
    )?;
    write_file(&cfg.out.join("match_audit.jsonl"), &audit_jsonl(&windows, &inventory))?;
    out.lines.push(format!(
        "suite coverage: {:.2}% ({}/{} endpoints, {} tests) -> {}",
        percent(report.suite_coverage),
        report.suite_tested_count,
        report.universe_count,
        report.t_total,
        cfg.out.join("coverage.json").display()
    ));
    Ok(report)
}

pub fn cmd_analyze(cfg: &RunConfig, from_cache: bool) -> Result<Output, CliError> {
    let _lock = OutputLock::acquire(&cfg.out)?;
    let mut out = Output::default();
    run_analyze(cfg, from_cache, &mut out)?;
    Ok(out)
}

/// Compares suite coverage, in percent rounded to two decimals, against
/// `min_percent`. Returns whether the gate passed.
pub fn cmd_check(
    cfg: &RunConfig,
    min_percent: f64,
    report_path: Option<&Path>,
) -> Result<(bool, Output), CliError> {
    if !min_percent.is_finite() || !(0.0..=100.0).contains(&min_percent) {
        return Err(CliError::Input(format!(
            "--min-suite-coverage must be a percentage between 0 and 100, got {min_percent}"
        )));
    }
    let mut out = Output::default();
    let report = match report_path {
        Some(p) => serde_json::from_str::<CoverageReport>(&read_text(p)?)
            .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        None => {
            let _lock = OutputLock::acquire(&cfg.out)?;
            run_analyze(cfg, false, &mut out)?
        }
    };
    let actual = percent(report.suite_coverage);
    let passed = actual >= min_percent;
    out.lines.push(format!(
        "check {}: suite coverage {actual:.2}% {} minimum {min_percent:.2}%",
        if passed { "passed" } else { "FAILED" },
        if passed { "meets" } else { "is below" },
    ));
    Ok((passed, out))
}

fn emit(out: &Output, stdout: &mut dyn Write, stderr: &mut dyn Write) {
    for w in &out.warnings {
        let _ = writeln!(stderr, "{w}");
    }
    for l in &out.lines {
        let _ = writeln!(stdout, "{l}");
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Extract(a) => RunConfig::resolve(a).and_then(|c| cmd_extract(&c)).map(|o| (true, o)),
        Command::Ingest(a) => RunConfig::resolve(a).and_then(|c| cmd_ingest(&c)).map(|o| (true, o)),
        Command::Analyze { common, from_cache } => RunConfig::resolve(common)
            .and_then(|c| cmd_analyze(&c, *from_cache))
            .map(|o| (true, o)),
        Command::Check {
            common,
            min_suite_coverage,
            report,
        } => RunConfig::resolve(common)
            .and_then(|c| cmd_check(&c, *min_suite_coverage, report.as_deref())),
    };
    match result {
        Ok((passed, out)) => {
            emit(&out, stdout, stderr);
            if passed {
                EXIT_OK
            } else {
                EXIT_GATE_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
