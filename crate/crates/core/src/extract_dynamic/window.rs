use std::collections::BTreeMap;

use super::DynamicError;
use crate::diag::{Warning, WarningKind};
use crate::model::{EndpointCall, TestWindow};

/// Calls partitioned by test window.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Windowed {
    /// Every manifest test has an entry, possibly empty. Calls are in
    /// timestamp order.
    pub per_test: BTreeMap<String, Vec<EndpointCall>>,
    /// Calls outside every window.
    pub orphans: Vec<EndpointCall>,
    pub warnings: Vec<Warning>,
}

fn sort_calls(calls: &mut [EndpointCall]) {
    calls.sort_by(|a, b| {
        (a.timestamp, &a.destination, &a.source).cmp(&(b.timestamp, &b.destination, &b.source))
    });
}

/// Assigns each call to every window containing its timestamp (bounds
/// inclusive). Windows are shifted by `skew_micros` first, which corrects a
/// test-runner clock that is behind the tracing backend by that amount.
pub fn window_calls(
    calls: &[EndpointCall],
    windows: &[TestWindow],
    skew_micros: i64,
) -> Result<Windowed, DynamicError> {
    if windows.is_empty() {
        return Err(DynamicError::EmptyManifest);
    }
    let windows: Vec<TestWindow> = windows.iter().map(|w| w.shifted(skew_micros)).collect();
    let mut out = Windowed::default();

    let mut by_start: Vec<&TestWindow> = windows.iter().collect();
    by_start.sort_by(|a, b| (a.start, &a.test_id).cmp(&(b.start, &b.test_id)));
    for (i, a) in by_start.iter().enumerate() {
        for b in &by_start[i + 1..] {
            if b.start > a.end {
                break;
            }
            out.warnings.push(Warning::new(
                WarningKind::OverlappingWindows,
                format!(
                    "test windows {} and {} overlap; calls in the overlap count for both",
                    a.test_id, b.test_id
                ),
            ));
        }
    }

    let mut sorted = calls.to_vec();
    sort_calls(&mut sorted);
    for w in &windows {
        out.per_test.entry(w.test_id.clone()).or_default();
    }
    for call in sorted {
        let mut placed = false;
        for w in windows.iter().filter(|w| w.contains(call.timestamp)) {
            out.per_test.get_mut(&w.test_id).expect("seeded above").push(call.clone());
            placed = true;
        }
        if !placed {
            out.orphans.push(call);
        }
    }
    if !out.orphans.is_empty() {
        out.warnings.push(Warning::new(
            WarningKind::OrphanCalls,
            format!("{} calls fall outside every test window", out.orphans.len()),
        ));
    }
    Ok(out)
}

/// Parses a signed duration such as `250ms`, `-1.5s`, `+2m`. Units: `us`,
/// `ms`, `s`, `m`, `h`. Returns microseconds.
pub fn parse_clock_skew(text: &str) -> Option<i64> {
    let text = text.trim();
    let (negative, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let split = body
        .find(|c: char| !(c.is_ascii_digit() || c == '.'))
        .unwrap_or(body.len());
    let (number, unit) = body.split_at(split);
    if number.is_empty() || number == "." {
        return None;
    }
    let scale: f64 = match unit {
        "us" => 1.0,
        "ms" => 1e3,
        "s" => 1e6,
        "m" => 60e6,
        "h" => 3600e6,
        _ => return None,
    };
    let micros = (number.parse::<f64>().ok()? * scale).round();
    if !micros.is_finite() || micros > i64::MAX as f64 {
        return None;
    }
    Some(if negative { -(micros as i64) } else { micros as i64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EndpointRef, HttpMethod, Timestamp};

    fn call(t: i64) -> EndpointCall {
        EndpointCall::new(
            Timestamp::from_micros(t),
            None,
            EndpointRef::new("s", HttpMethod::Get, format!("/c/{t}")),
        )
    }

    fn window(id: &str, s: i64, e: i64) -> TestWindow {
        TestWindow::new(id, Timestamp::from_micros(s), Timestamp::from_micros(e)).unwrap()
    }

    fn urls(calls: &[EndpointCall]) -> Vec<i64> {
        calls.iter().map(|c| c.timestamp.as_micros()).collect()
    }

    #[test]
    fn boundaries_orphans_and_order() {
        let out = window_calls(
            &[call(25), call(10), call(20), call(5), call(21)],
            &[window("a", 10, 20)],
            0,
        )
        .unwrap();
        assert_eq!(urls(&out.per_test["a"]), [10, 20]);
        assert_eq!(urls(&out.orphans), [5, 21, 25]);
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn overlap_assigns_both_and_warns() {
        let out = window_calls(
            &[call(15)],
            &[window("a", 10, 20), window("b", 15, 30)],
            0,
        )
        .unwrap();
        assert_eq!(urls(&out.per_test["a"]), [15]);
        assert_eq!(urls(&out.per_test["b"]), [15]);
        assert_eq!(out.warnings[0].kind, WarningKind::OverlappingWindows);
    }

    #[test]
    fn empty_manifest_is_an_error() {
        assert!(matches!(
            window_calls(&[call(1)], &[], 0),
            Err(DynamicError::EmptyManifest)
        ));
    }

    #[test]
    fn skew_shifts_windows() {
        let out = window_calls(&[call(105)], &[window("a", 0, 10)], 100).unwrap();
        assert_eq!(urls(&out.per_test["a"]), [105]);
    }

    #[test]
    fn empty_windows_still_listed() {
        let out = window_calls(&[], &[window("a", 0, 10)], 0).unwrap();
        assert!(out.per_test["a"].is_empty());
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn skew_units() {
        assert_eq!(parse_clock_skew("250ms"), Some(250_000));
        assert_eq!(parse_clock_skew("-1.5s"), Some(-1_500_000));
        assert_eq!(parse_clock_skew("+2m"), Some(120_000_000));
        assert_eq!(parse_clock_skew("1h"), Some(3_600_000_000));
        assert_eq!(parse_clock_skew("7us"), Some(7));
        assert_eq!(parse_clock_skew("5"), None);
        assert_eq!(parse_clock_skew("ms"), None);
        assert_eq!(parse_clock_skew("3d"), None);
    }
}
