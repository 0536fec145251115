use std::collections::BTreeSet;
use std::fmt::Write;

use super::{fmt_percent, ColorScale};
use crate::model::CoverageReport;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if c.is_control() => {}
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Service dependency graph. Nodes are filled by coverage; edges with no
/// matched call are dashed.
pub fn render_dot(report: &CoverageReport, scale: &ColorScale) -> String {
    let mut out = String::new();
    out.push_str("digraph coverage {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=box, style=filled, fontname=\"Helvetica\"];\n");

    let mut declared = BTreeSet::new();
    for (name, c) in &report.per_service {
        let percent = crate::metrics::percent(c.ratio);
        let label = format!(
            "{name}\n{}/{} ({}%)",
            c.tested_count,
            c.total_count,
            fmt_percent(c.ratio)
        );
        let _ = writeln!(
            out,
            "  {} [label={}, fillcolor={}];",
            quote(name),
            quote(&label),
            quote(scale.color_for(percent))
        );
        declared.insert(name.as_str());
    }
    for name in &report.gateway_services {
        let _ = writeln!(
            out,
            "  {} [label={}, fillcolor=\"lightgray\", shape=diamond];",
            quote(name),
            quote(&format!("{name}\ngateway"))
        );
        declared.insert(name.as_str());
    }
    let strangers: BTreeSet<&str> = report
        .dependency_edges
        .iter()
        .flat_map(|e| [e.source.as_str(), e.destination.as_str()])
        .filter(|s| !declared.contains(s))
        .collect();
    for name in strangers {
        let _ = writeln!(
            out,
            "  {} [label={}, fillcolor=\"white\", style=\"filled,dashed\"];",
            quote(name),
            quote(&format!("{name}\nnot in inventory"))
        );
    }

    for e in &report.dependency_edges {
        let style = if e.covered { "solid" } else { "dashed" };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}, style={style}];",
            quote(&e.source),
            quote(&e.destination),
            quote(&e.calls.to_string())
        );
    }
    out.push_str("}\n");
    out
}
