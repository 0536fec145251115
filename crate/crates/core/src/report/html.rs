use std::collections::BTreeSet;
use std::fmt::Write;

use super::{fmt_percent, ColorScale};
use crate::model::{CoverageReport, EndpointInventory, EndpointKey};

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c if c.is_control() && c != '\n' && c != '\t' => {}
            c => out.push(c),
        }
    }
    out
}

const STYLE: &str = "body{font-family:sans-serif;margin:2em;color:#222}\
summary{cursor:pointer;font-weight:bold;padding:.2em 0}\
.badge{display:inline-block;min-width:4.5em;padding:0 .4em;margin-right:.6em;border-radius:3px;text-align:right}\
ul{list-style:none;margin:.2em 0 .8em 1.5em;padding:0}\
li{font-family:monospace;padding:.1em 0}\
li.covered{color:#11772d}li.missed{color:#b3261e}li.excluded{color:#777}\
table{border-collapse:collapse}td,th{padding:.2em .8em;text-align:right}td:first-child,th:first-child{text-align:left}\
footer{margin-top:2em;color:#555}";

/// A self-contained page listing every inventory endpoint, grouped by
/// service. Covered endpoints are green, missed ones red.
pub fn render_endpoint_list_html(report: &CoverageReport, inv: &EndpointInventory) -> String {
    let scale = ColorScale::default();
    let mut out = String::new();
    out.push_str("<!DOCTYPE html>\n");
    out.push_str("<html xmlns=\"http://www.w3.org/1999/xhtml\" lang=\"en\">\n<head>\n");
    out.push_str("<meta charset=\"utf-8\"/>\n<title>Endpoint coverage</title>\n");
    let _ = writeln!(out, "<style>{STYLE}</style>");
    out.push_str("</head>\n<body>\n<h1>Endpoint coverage</h1>\n");
    let _ = writeln!(
        out,
        "<p class=\"suite\">Test suite coverage: <strong>{}%</strong> ({} of {} endpoints, {} services, {} tests)</p>",
        fmt_percent(report.suite_coverage),
        report.suite_tested_count,
        report.universe_count,
        report.m_total,
        report.t_total
    );

    for (name, service) in inv.services() {
        let keys: Vec<&EndpointKey> = service.endpoints.keys().collect();
        if let Some(c) = report.per_service.get(name) {
            let tested: BTreeSet<&EndpointKey> = c.tested_endpoints.iter().collect();
            let percent = crate::metrics::percent(c.ratio);
            let _ = writeln!(
                out,
                "<details class=\"service\" id=\"svc-{}\">\n<summary><span class=\"badge\" style=\"background:{}\">{}%</span>{} <small>({}/{})</small></summary>\n<ul>",
                esc(name),
                esc(scale.color_for(percent)),
                fmt_percent(c.ratio),
                esc(name),
                c.tested_count,
                c.total_count
            );
            for key in keys {
                let e = &service.endpoints[key];
                let (class, mark) = if tested.contains(key) {
                    ("covered", "&#10003;")
                } else {
                    ("missed", "&#10007;")
                };
                let _ = writeln!(
                    out,
                    "<li class=\"{class}\" title=\"{}\">{mark} {} {}</li>",
                    esc(key.as_str()),
                    e.method,
                    esc(&e.path.to_string())
                );
            }
            out.push_str("</ul>\n</details>\n");
        } else {
            let _ = writeln!(
                out,
                "<details class=\"service gateway\" id=\"svc-{}\">\n<summary><span class=\"badge\" style=\"background:lightgray\">gateway</span>{} <small>(excluded)</small></summary>\n<ul>",
                esc(name),
                esc(name)
            );
            for key in keys {
                let e = &service.endpoints[key];
                let _ = writeln!(
                    out,
                    "<li class=\"excluded\" title=\"{}\">&#8211; {} {}</li>",
                    esc(key.as_str()),
                    e.method,
                    esc(&e.path.to_string())
                );
            }
            out.push_str("</ul>\n</details>\n");
        }
    }

    if !report.per_test.is_empty() {
        out.push_str("<h2>Tests</h2>\n<table>\n<tr><th>Test</th><th>Endpoints</th><th>Coverage</th></tr>\n");
        for (id, c) in &report.per_test {
            let _ = writeln!(
                out,
                "<tr><td>{}</td><td>{}</td><td>{}%</td></tr>",
                esc(id),
                c.tested_count,
                fmt_percent(c.ratio)
            );
        }
        out.push_str("</table>\n");
    }

    let c = &report.calls;
    let _ = writeln!(
        out,
        "<footer>\n<p>{} calls analysed: {} matched, {} gateway calls excluded ({} distinct), {} unmatched ({} distinct).</p>\n</footer>",
        c.total, c.matched, c.gateway, c.distinct_gateway_targets, c.unmatched, c.distinct_unmatched_targets
    );
    out.push_str("</body>\n</html>\n");
    out
}
