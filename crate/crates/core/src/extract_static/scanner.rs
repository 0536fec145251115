//! Lexical scanner for Spring-style REST mapping annotations.
//!
//! Recognizes `@RestController`/`@Controller` classes, class-level
//! `@RequestMapping` prefixes, and method-level `@RequestMapping`,
//! `@GetMapping`, `@PostMapping`, `@PutMapping`, `@DeleteMapping` and
//! `@PatchMapping`. Parameter types come from the method signature.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use globset::{Glob, GlobSet, GlobSetBuilder};
use regex::Regex;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use super::lexer::{split_top_level, Masked};
use super::StaticError;
use crate::diag::{Warning, WarningKind};
use crate::model::{
    normalize_path, validate_service_name, Endpoint, EndpointInventory, HttpMethod, ParamType,
    PathTemplate,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ServiceLayout {
    /// Each top-level directory under the root is one service.
    OneDirPerService,
    /// The whole tree is a single service with the given name.
    SingleService(String),
}

/// Optional mapping from service name to sub-directory and gateway flag:
/// `{"services": {"ts-order-service": {"dir": "order", "gateway": false}}}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServicesManifest {
    pub services: BTreeMap<String, ServiceEntry>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServiceEntry {
    /// Relative to the source root; defaults to the service name.
    #[serde(default)]
    pub dir: Option<String>,
    #[serde(default)]
    pub gateway: bool,
}

impl ServicesManifest {
    pub fn from_json(text: &str) -> Result<ServicesManifest, StaticError> {
        let manifest: ServicesManifest =
            serde_json::from_str(text).map_err(|e| StaticError::Manifest(e.to_string()))?;
        for name in manifest.services.keys() {
            validate_service_name(name)?;
        }
        Ok(manifest)
    }

    fn dir_of<'a>(&'a self, name: &'a str) -> &'a str {
        self.services
            .get(name)
            .and_then(|e| e.dir.as_deref())
            .unwrap_or(name)
            .trim_matches('/')
    }
}

pub const DEFAULT_INCLUDE: &[&str] = &["**/*.java"];
pub const DEFAULT_EXCLUDE: &[&str] = &["**/src/test/**", "**/target/**"];

#[derive(Debug, Clone)]
pub struct SourceTree {
    pub root: PathBuf,
    pub layout: ServiceLayout,
    pub include_globs: Vec<String>,
    pub exclude_globs: Vec<String>,
    pub manifest: Option<ServicesManifest>,
}

impl SourceTree {
    pub fn new(root: impl Into<PathBuf>) -> SourceTree {
        SourceTree {
            root: root.into(),
            layout: ServiceLayout::OneDirPerService,
            include_globs: DEFAULT_INCLUDE.iter().map(|s| s.to_string()).collect(),
            exclude_globs: DEFAULT_EXCLUDE.iter().map(|s| s.to_string()).collect(),
            manifest: None,
        }
    }

    pub fn single_service(root: impl Into<PathBuf>, name: impl Into<String>) -> SourceTree {
        SourceTree {
            layout: ServiceLayout::SingleService(name.into()),
            ..SourceTree::new(root)
        }
    }

    pub fn with_manifest(mut self, manifest: ServicesManifest) -> SourceTree {
        self.manifest = Some(manifest);
        self
    }

    /// Resolves the owning service of a root-relative path (with `/`
    /// separators).
    fn service_for(&self, rel: &str) -> Option<String> {
        if let Some(manifest) = &self.manifest {
            return manifest
                .services
                .keys()
                .map(|name| (name, manifest.dir_of(name)))
                .filter(|(_, dir)| {
                    dir.is_empty() || rel == *dir || rel.starts_with(&format!("{dir}/"))
                })
                .max_by_key(|(_, dir)| dir.len())
                .map(|(name, _)| name.clone());
        }
        match &self.layout {
            ServiceLayout::SingleService(name) => Some(name.clone()),
            ServiceLayout::OneDirPerService => rel
                .split_once('/')
                .map(|(first, _)| first.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MappingKind {
    ClassMapping,
    MethodMapping,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamDecl {
    /// Binding name: the `@PathVariable` value when given, else the Java
    /// parameter name.
    pub name: String,
    pub type_text: String,
    pub path_variable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationMatch {
    pub file: String,
    pub line: usize,
    pub kind: MappingKind,
    pub http_method: Option<HttpMethod>,
    pub path_value: String,
    pub param_decls: Vec<ParamDecl>,
}

#[derive(Debug, Clone, Default)]
pub struct ScanOutput {
    pub inventory: EndpointInventory,
    pub matches: Vec<AnnotationMatch>,
    pub warnings: Vec<Warning>,
}

/// One endpoint found in a file, before service attribution.
#[derive(Debug, Clone)]
pub struct FileEndpoint {
    pub method: HttpMethod,
    pub path: PathTemplate,
    pub line: usize,
    pub return_type: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct FileScan {
    pub endpoints: Vec<FileEndpoint>,
    pub matches: Vec<AnnotationMatch>,
    pub warnings: Vec<Warning>,
}

fn build_globs(patterns: &[String]) -> Result<GlobSet, StaticError> {
    let mut builder = GlobSetBuilder::new();
    for p in patterns {
        let glob = Glob::new(p).map_err(|e| StaticError::Glob(p.clone(), e.to_string()))?;
        builder.add(glob);
    }
    builder
        .build()
        .map_err(|e| StaticError::Glob(patterns.join(","), e.to_string()))
}

/// Scans a source tree for mapping annotations and builds its inventory.
pub fn scan_annotations(tree: &SourceTree) -> Result<ScanOutput, StaticError> {
    if !tree.root.is_dir() {
        return Err(StaticError::MissingRoot(tree.root.clone()));
    }
    let include = build_globs(&tree.include_globs)?;
    let exclude = build_globs(&tree.exclude_globs)?;
    let mut out = ScanOutput::default();
    let mut declared: Vec<String> = match (&tree.manifest, &tree.layout) {
        (Some(m), _) => m.services.keys().cloned().collect(),
        (None, ServiceLayout::SingleService(name)) => vec![name.clone()],
        (None, ServiceLayout::OneDirPerService) => Vec::new(),
    };

    let walker = WalkDir::new(&tree.root)
        .follow_links(true)
        .sort_by_file_name()
        .into_iter();
    for entry in walker {
        let entry = match entry {
            Ok(e) => e,
            Err(err) => {
                out.warnings.push(Warning::new(
                    WarningKind::UnreadableFile,
                    format!("cannot read {}", err),
                ));
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = relative_slash_path(&tree.root, entry.path());
        if !include.is_match(&rel) || exclude.is_match(&rel) {
            continue;
        }
        let Some(service) = tree.service_for(&rel) else {
            continue;
        };
        validate_service_name(&service)?;
        if !declared.contains(&service) {
            declared.push(service.clone());
        }
        let text = match fs::read_to_string(entry.path()) {
            Ok(t) => t,
            Err(err) => {
                out.warnings.push(Warning::new(
                    WarningKind::UnreadableFile,
                    format!("cannot read {rel}: {err}"),
                ));
                continue;
            }
        };
        let scan = scan_source(&text, &rel);
        out.matches.extend(scan.matches);
        out.warnings.extend(scan.warnings);
        out.inventory.add_service(&service)?;
        for fe in scan.endpoints {
            let mut endpoint = Endpoint::new(&service, fe.method, fe.path)
                .with_source(format!("{rel}:{}", fe.line));
            endpoint.return_type = fe.return_type;
            let key = endpoint.key();
            if !out.inventory.insert(endpoint)? {
                out.warnings.push(Warning::new(
                    WarningKind::InvalidRoute,
                    format!("{rel}:{}: duplicate mapping {key} ignored", fe.line),
                ));
            }
        }
    }

    for name in &declared {
        out.inventory.add_service(name)?;
        if let Some(manifest) = &tree.manifest {
            let gateway = manifest.services.get(name).is_some_and(|e| e.gateway);
            out.inventory.set_gateway(name, gateway)?;
        }
        let empty = out
            .inventory
            .service(name)
            .is_none_or(|s| s.endpoints.is_empty());
        let is_gateway = out.inventory.is_gateway(name);
        if empty && !is_gateway {
            out.warnings.push(Warning::new(
                WarningKind::EmptyService,
                format!("service {name} has no endpoints"),
            ));
        }
    }
    Ok(out)
}

fn relative_slash_path(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

const METHOD_MAPPINGS: &[(&str, Option<HttpMethod>)] = &[
    ("RequestMapping", None),
    ("GetMapping", Some(HttpMethod::Get)),
    ("PostMapping", Some(HttpMethod::Post)),
    ("PutMapping", Some(HttpMethod::Put)),
    ("DeleteMapping", Some(HttpMethod::Delete)),
    ("PatchMapping", Some(HttpMethod::Patch)),
];

fn mapping_kind(name: &str) -> Option<Option<HttpMethod>> {
    METHOD_MAPPINGS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, m)| *m)
}

#[derive(Debug)]
struct Annotation {
    name: String,
    args: Option<String>,
    start: usize,
    end: usize,
}

fn parse_annotation(m: &Masked, at: usize) -> Option<Annotation> {
    let bytes = m.bytes();
    let name_start = m.skip_ws(at + 1);
    let mut i = name_start;
    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || matches!(bytes[i], b'_' | b'.' | b'$')) {
        i += 1;
    }
    if i == name_start {
        return None;
    }
    let full = m.slice(name_start, i);
    if full == "interface" {
        return None;
    }
    let name = full.rsplit('.').next().unwrap_or(full).to_string();
    let after = m.skip_ws(i);
    if bytes.get(after) == Some(&b'(') {
        let close = m.matching_close(after)?;
        return Some(Annotation {
            name,
            args: Some(m.slice(after + 1, close).to_string()),
            start: at,
            end: close + 1,
        });
    }
    Some(Annotation {
        name,
        args: None,
        start: at,
        end: i,
    })
}

/// Consecutive annotations starting at `at`.
fn parse_run(m: &Masked, at: usize) -> (Vec<Annotation>, usize) {
    let mut run = Vec::new();
    let mut pos = at;
    loop {
        pos = m.skip_ws(pos);
        if m.bytes().get(pos) != Some(&b'@') {
            break;
        }
        match parse_annotation(m, pos) {
            Some(a) => {
                pos = a.end;
                run.push(a);
            }
            None => break,
        }
    }
    (run, pos)
}

#[derive(Debug)]
struct ClassInfo {
    keyword_pos: usize,
    body: (usize, usize),
    line: usize,
    prefixes: Vec<String>,
    controller: bool,
    client: bool,
    method_mappings: usize,
}

fn class_decl_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\b(class|interface|enum|record)\s+[A-Za-z_$][\w$]*").unwrap())
}

fn find_classes(m: &Masked) -> Vec<ClassInfo> {
    class_decl_regex()
        .find_iter(&m.text)
        .filter(|hit| !m.is_string(hit.start()))
        .filter_map(|hit| {
            let open = m.find_any(hit.end(), b"{;")?;
            if m.bytes()[open] != b'{' {
                return None;
            }
            let close = m.matching_close(open).unwrap_or(m.len());
            Some(ClassInfo {
                keyword_pos: hit.start(),
                body: (open, close),
                line: m.line_of(hit.start()),
                prefixes: Vec::new(),
                controller: false,
                client: false,
                method_mappings: 0,
            })
        })
        .collect()
}

fn innermost_class(classes: &[ClassInfo], pos: usize) -> Option<usize> {
    classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.body.0 < pos && pos < c.body.1)
        .min_by_key(|(_, c)| c.body.1 - c.body.0)
        .map(|(i, _)| i)
}

const MODIFIERS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "synchronized",
    "native",
    "default",
    "strictfp",
];

/// Extracts string literal paths and HTTP methods from mapping arguments.
#[derive(Debug, Default, PartialEq)]
struct MappingArgs {
    paths: Vec<String>,
    methods: Vec<HttpMethod>,
    non_literal: bool,
}

fn key_value_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?s)^([A-Za-z_]\w*)\s*=(.*)$").unwrap())
}

fn string_literal_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r#"^"((?:[^"\\]|\\.)*)"$"#).unwrap())
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(n) = chars.next() {
                out.push(match n {
                    'n' => '\n',
                    't' => '\t',
                    other => other,
                });
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// `"a" + "b"` → `ab`; anything that is not a literal concatenation → None.
fn constant_string(expr: &str) -> Option<String> {
    let mut out = String::new();
    for part in split_plus(expr) {
        let caps = string_literal_regex().captures(part.trim())?;
        out.push_str(&unescape(&caps[1]));
    }
    Some(out)
}

fn split_plus(expr: &str) -> Vec<&str> {
    let bytes = expr.as_bytes();
    let mut parts = Vec::new();
    let mut start = 0;
    let mut in_str = false;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' if in_str => i += 1,
            b'"' => in_str = !in_str,
            b'+' if !in_str => {
                parts.push(&expr[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    parts.push(&expr[start..]);
    parts
}

fn strings_of(value: &str, out: &mut MappingArgs) {
    let value = value.trim();
    let items = match value.strip_prefix('{').and_then(|v| v.strip_suffix('}')) {
        Some(inner) => split_top_level(inner),
        None => vec![value],
    };
    for item in items {
        match constant_string(item) {
            Some(s) => out.paths.push(s),
            None => out.non_literal = true,
        }
    }
}

fn parse_mapping_args(args: Option<&str>) -> MappingArgs {
    let mut out = MappingArgs::default();
    for part in args.map(split_top_level).unwrap_or_default() {
        match key_value_regex().captures(part) {
            Some(caps) => match &caps[1] {
                "value" | "path" => strings_of(&caps[2], &mut out),
                "method" => {
                    for word in caps[2].split(|c: char| !c.is_ascii_alphanumeric()) {
                        if let Ok(m) = word.parse::<HttpMethod>() {
                            if !out.methods.contains(&m) {
                                out.methods.push(m);
                            }
                        }
                    }
                }
                _ => {}
            },
            None => strings_of(part, &mut out),
        }
    }
    out
}

fn join_paths(prefix: &str, path: &str) -> String {
    let prefix = prefix.trim_end_matches('/');
    let path = path.trim_start_matches('/');
    match (prefix.is_empty(), path.is_empty()) {
        (true, _) => format!("/{path}"),
        (false, true) => prefix.to_string(),
        (false, false) => format!("{prefix}/{path}"),
    }
}

/// Maps a declared Java type to a parameter type.
pub fn map_declared_type(type_text: &str) -> ParamType {
    let base = type_text.trim();
    let base = base.rsplit('.').next().unwrap_or(base);
    match base {
        "int" | "long" | "short" | "byte" | "Integer" | "Long" | "Short" | "Byte"
        | "BigInteger" => ParamType::Integer,
        "float" | "double" | "Float" | "Double" | "BigDecimal" => ParamType::Number,
        "boolean" | "Boolean" => ParamType::Boolean,
        "String" | "CharSequence" | "char" | "Character" => ParamType::String,
        _ => ParamType::Opaque,
    }
}

fn parse_params(text: &str) -> Vec<ParamDecl> {
    let mut decls = Vec::new();
    for raw in split_top_level(text) {
        let mut rest = raw.trim();
        let mut binding = None;
        let mut path_variable = false;
        while let Some(after_at) = rest.strip_prefix('@') {
            let name_len = after_at
                .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '.'))
                .unwrap_or(after_at.len());
            let name = after_at[..name_len].rsplit('.').next().unwrap_or("");
            let mut tail = after_at[name_len..].trim_start();
            let mut args = None;
            if tail.starts_with('(') {
                let close = matching_paren(tail).unwrap_or(tail.len() - 1);
                args = Some(&tail[1..close]);
                tail = &tail[close + 1..];
            }
            if name == "PathVariable" {
                path_variable = true;
                binding = args.and_then(|a| {
                    let parsed = parse_mapping_args(Some(a));
                    parsed.paths.into_iter().next().or_else(|| {
                        split_top_level(a).into_iter().find_map(|kv| {
                            let caps = key_value_regex().captures(kv)?;
                            (&caps[1] == "name").then(|| constant_string(&caps[2]))?
                        })
                    })
                });
            }
            rest = tail.trim_start();
        }
        let words: Vec<&str> = rest
            .split_whitespace()
            .filter(|w| *w != "final")
            .collect();
        let Some((name, ty)) = words.split_last() else {
            continue;
        };
        let java_name = name.trim_start_matches("...");
        decls.push(ParamDecl {
            name: binding.unwrap_or_else(|| java_name.to_string()),
            type_text: ty.join(" "),
            path_variable,
        });
    }
    decls
}

fn matching_paren(text: &str) -> Option<usize> {
    let mut depth = 0;
    let mut in_str = false;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' if in_str => i += 1,
            b'"' => in_str = !in_str,
            b'(' if !in_str => depth += 1,
            b')' if !in_str => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
        i += 1;
    }
    None
}

enum Target {
    Class(usize),
    Method {
        name_end: usize,
        return_type: Option<String>,
        params: (usize, usize),
    },
    Other,
}

fn classify_target(m: &Masked, classes: &[ClassInfo], pos: usize) -> Target {
    let Some(header_end) = m.find_any(pos, b"{;(=") else {
        return Target::Other;
    };
    if let Some(idx) = classes
        .iter()
        .position(|c| pos <= c.keyword_pos && c.keyword_pos < header_end)
    {
        return Target::Class(idx);
    }
    if m.bytes()[header_end] != b'(' {
        return Target::Other;
    }
    let header = m.slice(pos, header_end);
    let words: Vec<&str> = header
        .split_whitespace()
        .filter(|w| !MODIFIERS.contains(w))
        .collect();
    let Some((_name, ret)) = words.split_last() else {
        return Target::Other;
    };
    let Some(close) = m.matching_close(header_end) else {
        return Target::Other;
    };
    let return_type = (!ret.is_empty()).then(|| ret.join(" "));
    Target::Method {
        name_end: header_end,
        return_type,
        params: (header_end + 1, close),
    }
}

/// Scans one source file. `rel` is only used for provenance.
pub fn scan_source(text: &str, rel: &str) -> FileScan {
    let m = Masked::new(text);
    let mut classes = find_classes(&m);
    let mut scan = FileScan::default();
    let mut pending = Vec::new();

    let mut pos = 0;
    while let Some(at) = m.find_any(pos, b"@") {
        let (run, after) = parse_run(&m, at);
        if run.is_empty() {
            pos = at + 1;
            continue;
        }
        pos = after;
        match classify_target(&m, &classes, after) {
            Target::Class(idx) => {
                let class = &mut classes[idx];
                for a in &run {
                    match a.name.as_str() {
                        "RestController" | "Controller" => class.controller = true,
                        "FeignClient" => class.client = true,
                        "RequestMapping" => {
                            let args = parse_mapping_args(a.args.as_deref());
                            let line = m.line_of(a.start);
                            if args.non_literal {
                                scan.warnings.push(Warning::new(
                                    WarningKind::InvalidRoute,
                                    format!("{rel}:{line}: non-constant class mapping path"),
                                ));
                            }
                            let prefixes = if args.paths.is_empty() {
                                vec![String::new()]
                            } else {
                                args.paths
                            };
                            for p in &prefixes {
                                scan.matches.push(AnnotationMatch {
                                    file: rel.to_string(),
                                    line,
                                    kind: MappingKind::ClassMapping,
                                    http_method: None,
                                    path_value: p.clone(),
                                    param_decls: Vec::new(),
                                });
                            }
                            class.prefixes = prefixes;
                        }
                        _ => {}
                    }
                }
            }
            Target::Method {
                name_end,
                return_type,
                params,
            } => {
                pos = pos.max(params.1);
                for a in run.iter().filter(|a| mapping_kind(&a.name).is_some()) {
                    pending.push((
                        a.name.clone(),
                        a.args.clone(),
                        m.line_of(a.start),
                        name_end,
                        return_type.clone(),
                        parse_params(m.slice(params.0, params.1)),
                    ));
                }
            }
            Target::Other => {}
        }
    }

    for (name, args, line, method_pos, return_type, param_decls) in pending {
        let owner = innermost_class(&classes, method_pos);
        if owner.is_some_and(|i| classes[i].client) {
            continue;
        }
        let prefixes = owner
            .map(|i| classes[i].prefixes.clone())
            .filter(|p| !p.is_empty())
            .unwrap_or_else(|| vec![String::new()]);
        if let Some(i) = owner {
            classes[i].method_mappings += 1;
        }
        let parsed = parse_mapping_args(args.as_deref());
        if parsed.non_literal {
            scan.warnings.push(Warning::new(
                WarningKind::InvalidRoute,
                format!("{rel}:{line}: non-constant mapping path skipped"),
            ));
        }
        let implied = mapping_kind(&name).flatten();
        let methods = match implied {
            Some(m) => vec![m],
            None if !parsed.methods.is_empty() => parsed.methods.clone(),
            None => {
                scan.warnings.push(Warning::new(
                    WarningKind::DefaultedMethod,
                    format!("{rel}:{line}: @{name} without method, assuming GET"),
                ));
                vec![HttpMethod::Get]
            }
        };
        let paths = if parsed.paths.is_empty() && !parsed.non_literal {
            vec![String::new()]
        } else {
            parsed.paths.clone()
        };
        for path_value in &paths {
            for &method in &methods {
                scan.matches.push(AnnotationMatch {
                    file: rel.to_string(),
                    line,
                    kind: MappingKind::MethodMapping,
                    http_method: Some(method),
                    path_value: path_value.clone(),
                    param_decls: param_decls.clone(),
                });
            }
            for prefix in &prefixes {
                let full = join_paths(prefix, path_value);
                let template = match normalize_path(&full) {
                    Ok(t) => t,
                    Err(err) => {
                        scan.warnings.push(Warning::new(
                            WarningKind::InvalidRoute,
                            format!("{rel}:{line}: {err}"),
                        ));
                        continue;
                    }
                };
                let template = template.with_param_types(|pname, _| {
                    match lookup_param(&param_decls, pname) {
                        Some(decl) => map_declared_type(&decl.type_text),
                        None => {
                            scan.warnings.push(Warning::new(
                                WarningKind::UntypedParam,
                                format!("{rel}:{line}: path variable {{{pname}}} has no parameter, typed opaque"),
                            ));
                            ParamType::Opaque
                        }
                    }
                });
                for &method in &methods {
                    scan.endpoints.push(FileEndpoint {
                        method,
                        path: template.clone(),
                        line,
                        return_type: return_type.clone(),
                    });
                }
            }
        }
    }

    for class in classes.iter().filter(|c| c.controller && !c.client) {
        if class.method_mappings == 0 {
            scan.warnings.push(Warning::new(
                WarningKind::NoMappings,
                format!("{rel}:{}: controller declares no request mappings", class.line),
            ));
        }
    }
    scan
}

fn lookup_param<'a>(decls: &'a [ParamDecl], name: &str) -> Option<&'a ParamDecl> {
    decls
        .iter()
        .find(|d| d.path_variable && d.name == name)
        .or_else(|| decls.iter().find(|d| d.name == name))
}
