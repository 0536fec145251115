//! C ABI over the e2ecov library.
//!
//! Inventories and reports are opaque heap handles released with their
//! `_free` function. Strings handed out by this library are released with
//! `e2ecov_string_free`. Every fallible call returns an `E2ecovStatus`; on
//! failure `e2ecov_last_error_message` describes what went wrong.
//!
//! The header `include/e2ecov.h` is generated by cbindgen at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use e2ecov::extract_dynamic::{read_calls, FieldConfig, TraceFormat};
use e2ecov::extract_static::parse_openapi;
use e2ecov::model::{CoverageReport, EndpointInventory, TestManifest};
use e2ecov::pipeline;
use e2ecov::report::{render_dot, render_endpoint_list_html, render_json, render_text, ColorScale};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum E2ecovStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArg = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A JSON, YAML or trace document could not be parsed.
    ParseError = 3,
    /// The input parsed but cannot be analysed, e.g. an empty manifest or an
    /// inventory with no non-gateway endpoints.
    InvalidInput = 4,
    /// A bug in the library. The message has details.
    Internal = 5,
}

/// Values for the `format` argument of `e2ecov_report_render`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum E2ecovRenderFormat {
    Json = 0,
    Text = 1,
    Dot = 2,
    Html = 3,
}

/// An endpoint inventory.
pub struct E2ecovInventory {
    inner: EndpointInventory,
}

/// A coverage report, together with the inventory it was computed from.
pub struct E2ecovReport {
    report: CoverageReport,
    inventory: EndpointInventory,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Fail(E2ecovStatus, String);

fn set_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> E2ecovStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            E2ecovStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| panic.downcast_ref::<&str>().copied())
                .unwrap_or("panic");
            set_error(&format!("internal error: {msg}"));
            E2ecovStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(E2ecovStatus::NullArg, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(E2ecovStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn out_arg<T>(p: *mut T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(E2ecovStatus::NullArg, format!("{what} is NULL")))
    } else {
        Ok(())
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(E2ecovStatus::NullArg, format!("{what} is NULL")))
}

fn to_c(s: String) -> *mut c_char {
    // rendered output never holds NUL; strip defensively rather than fail
    CString::new(s.replace('\0', ""))
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Parses an inventory JSON document. On success `*out` receives a handle
/// to release with `e2ecov_inventory_free`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn e2ecov_inventory_from_json(
    json: *const c_char,
    out: *mut *mut E2ecovInventory,
) -> E2ecovStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = ptr::null_mut();
        let inner = EndpointInventory::from_json(text(json, "json")?)
            .map_err(|e| Fail(E2ecovStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(E2ecovInventory { inner }));
        Ok(())
    })
}

/// Builds an inventory for one service from an OpenAPI 3 or Swagger 2
/// document, in JSON or YAML.
///
/// # Safety
/// `document` and `service` must be NUL-terminated strings; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn e2ecov_inventory_from_openapi(
    document: *const c_char,
    service: *const c_char,
    out: *mut *mut E2ecovInventory,
) -> E2ecovStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = ptr::null_mut();
        let doc = text(document, "document")?;
        let service = text(service, "service")?;
        let parsed = parse_openapi(doc.as_bytes(), service)
            .map_err(|e| Fail(E2ecovStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(E2ecovInventory { inner: parsed.inventory }));
        Ok(())
    })
}

/// Number of endpoints in the coverage universe, gateways excluded.
/// Returns 0 for NULL.
///
/// # Safety
/// `inventory` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn e2ecov_inventory_endpoint_count(inventory: *const E2ecovInventory) -> usize {
    inventory.as_ref().map_or(0, |i| i.inner.universe_size())
}

/// Serializes the inventory to canonical JSON.
///
/// # Safety
/// `inventory` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn e2ecov_inventory_to_json(
    inventory: *const E2ecovInventory,
    out: *mut *mut c_char,
) -> E2ecovStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = to_c(handle(inventory, "inventory")?.inner.to_json());
        Ok(())
    })
}

/// # Safety
/// `inventory` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn e2ecov_inventory_free(inventory: *mut E2ecovInventory) {
    if !inventory.is_null() {
        drop(Box::from_raw(inventory));
    }
}

/// Windows the calls in `traces` by the test manifest, matches them against
/// the inventory and computes coverage.
///
/// `format` is `"jsonl"` (one call object per line) or `"skywalking-es"`
/// (an Elasticsearch export of SkyWalking indices). Records that cannot be
/// decoded are skipped.
///
/// # Safety
/// `inventory` must be a live handle; the strings must be NUL-terminated;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn e2ecov_analyze(
    inventory: *const E2ecovInventory,
    traces: *const c_char,
    format: *const c_char,
    manifest_json: *const c_char,
    out: *mut *mut E2ecovReport,
) -> E2ecovStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = ptr::null_mut();
        let inv = &handle(inventory, "inventory")?.inner;
        let traces = text(traces, "traces")?;
        let format: TraceFormat = text(format, "format")?
            .parse()
            .map_err(|e: String| Fail(E2ecovStatus::InvalidInput, e))?;
        let manifest = TestManifest::from_json(text(manifest_json, "manifest_json")?)
            .map_err(|e| Fail(E2ecovStatus::ParseError, e.to_string()))?;
        let calls = read_calls(traces, format, &FieldConfig::default()).calls;
        let analysis = pipeline::analyze(inv, &calls, &manifest, 0)
            .map_err(|e| Fail(E2ecovStatus::InvalidInput, e.to_string()))?;
        *out = Box::into_raw(Box::new(E2ecovReport {
            report: analysis.report,
            inventory: inv.clone(),
        }));
        Ok(())
    })
}

/// Parses a coverage report JSON document, as written by `analyze`. The
/// HTML rendering of such a report lists only the endpoints it names.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn e2ecov_report_from_json(
    json: *const c_char,
    out: *mut *mut E2ecovReport,
) -> E2ecovStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = ptr::null_mut();
        let report: CoverageReport = serde_json::from_str(text(json, "json")?)
            .map_err(|e| Fail(E2ecovStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(E2ecovReport { report, inventory: EndpointInventory::new() }));
        Ok(())
    })
}

/// Suite coverage as a ratio in [0, 1].
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn e2ecov_report_suite_coverage(
    report: *const E2ecovReport,
    out: *mut f64,
) -> E2ecovStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = handle(report, "report")?.report.suite_coverage;
        Ok(())
    })
}

/// Renders the report. `format` is one of the `E2ecovRenderFormat` values.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn e2ecov_report_render(
    report: *const E2ecovReport,
    format: u32,
    out: *mut *mut c_char,
) -> E2ecovStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = ptr::null_mut();
        let r = handle(report, "report")?;
        let rendered = match format {
            f if f == E2ecovRenderFormat::Json as u32 => render_json(&r.report),
            f if f == E2ecovRenderFormat::Text as u32 => render_text(&r.report),
            f if f == E2ecovRenderFormat::Dot as u32 => render_dot(&r.report, &ColorScale::default()),
            f if f == E2ecovRenderFormat::Html as u32 => {
                render_endpoint_list_html(&r.report, &r.inventory)
            }
            other => {
                return Err(Fail(E2ecovStatus::InvalidInput, format!("unknown render format {other}")))
            }
        };
        *out = to_c(rendered);
        Ok(())
    })
}

/// # Safety
/// `report` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn e2ecov_report_free(report: *mut E2ecovReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn e2ecov_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or "" after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn e2ecov_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn e2ecov_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
