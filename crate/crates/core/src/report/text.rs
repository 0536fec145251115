use std::fmt::Write;

use super::fmt_percent;
use crate::model::{CoverageReport, Summary};

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut line = |cells: &[String]| {
        let mut text = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                text.push_str("  ");
            }
            // first column left-aligned, numbers right-aligned
            if i == 0 {
                let _ = write!(text, "{cell:<w$}");
            } else {
                let _ = write!(text, "{cell:>w$}");
            }
        }
        out.push_str(text.trim_end());
        out.push('\n');
    };
    line(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for row in rows {
        line(row);
    }
}

fn summary_row(name: &str, s: Option<Summary>) -> Vec<String> {
    match s {
        Some(s) => vec![
            name.to_string(),
            format!("{:.2}", s.min),
            format!("{:.2}", s.avg),
            format!("{:.2}", s.max),
            format!("{:.2}", s.mode),
        ],
        None => vec![name.to_string(), "-".into(), "-".into(), "-".into(), "-".into()],
    }
}

/// Fixed-width plain-text tables.
pub fn render_text(report: &CoverageReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Suite coverage: {}/{} endpoints ({}%)",
        report.suite_tested_count,
        report.universe_count,
        fmt_percent(report.suite_coverage)
    );
    let _ = writeln!(
        out,
        "Services: {}  Tests: {}",
        report.m_total, report.t_total
    );
    if !report.gateway_services.is_empty() {
        let _ = writeln!(out, "Gateways (excluded): {}", report.gateway_services.join(", "));
    }

    out.push_str("\nPer-service coverage\n");
    let rows: Vec<Vec<String>> = report
        .per_service
        .iter()
        .map(|(name, c)| {
            vec![
                name.clone(),
                format!("{}/{}", c.tested_count, c.total_count),
                fmt_percent(c.ratio),
            ]
        })
        .collect();
    table(&mut out, &["Service", "Tested", "Percent"], &rows);

    out.push_str("\nPer-test coverage\n");
    let rows: Vec<Vec<String>> = report
        .per_test
        .iter()
        .map(|(id, c)| {
            vec![
                id.clone(),
                format!("{}/{}", c.tested_count, c.universe_count),
                fmt_percent(c.ratio),
            ]
        })
        .collect();
    table(&mut out, &["Test", "Endpoints", "Percent"], &rows);

    out.push_str("\nSummary (percent)\n");
    let suite = fmt_percent(report.suite_coverage);
    table(
        &mut out,
        &["Metric", "Min", "Avg", "Max", "Mode"],
        &[
            summary_row("C_ms", report.stats.per_service),
            summary_row("C_test", report.stats.per_test),
            vec!["C_suite".into(), suite.clone(), suite.clone(), suite.clone(), suite],
        ],
    );

    let c = &report.calls;
    out.push_str("\nCalls\n");
    table(
        &mut out,
        &["Outcome", "Calls", "Distinct"],
        &[
            vec!["matched".into(), c.matched.to_string(), c.distinct_matched_endpoints.to_string()],
            vec!["gateway".into(), c.gateway.to_string(), c.distinct_gateway_targets.to_string()],
            vec!["unmatched".into(), c.unmatched.to_string(), c.distinct_unmatched_targets.to_string()],
            vec!["total".into(), c.total.to_string(), c.distinct_called().to_string()],
        ],
    );

    if !report.risky_matches.is_empty() {
        out.push_str("\nRisky matches (several signatures fit)\n");
        for r in &report.risky_matches {
            let alts: Vec<&str> = r.alternatives.iter().map(|k| k.as_str()).collect();
            let _ = writeln!(
                out,
                "{}: {} {}{} -> {} (also: {})",
                r.test_id,
                r.method,
                r.service,
                r.url,
                r.chosen,
                alts.join(", ")
            );
        }
    }
    out
}
