//! Stage 4: presenting a [`CoverageReport`].
//!
//! Every renderer is a pure function of its inputs and byte-deterministic.

mod dot;
mod html;
mod text;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::CoverageReport;

pub use dot::render_dot;
pub use html::render_endpoint_list_html;
pub use text::render_text;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScaleError {
    #[error("color scale has no buckets")]
    Empty,
    #[error("color scale bounds must be strictly increasing ({0} follows {1})")]
    NotIncreasing(f64, f64),
    #[error("color scale must end at 100, not {0}")]
    BadFinalBound(f64),
    #[error("color {0:?} is not a plain name or #hex value")]
    BadColor(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorBucket {
    /// Inclusive upper bound, in percent.
    pub upper: f64,
    pub color: String,
}

/// Maps a coverage percentage to a color: the first bucket whose bound is at
/// or above the percentage.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ColorScale {
    buckets: Vec<ColorBucket>,
}

impl ColorScale {
    pub fn new(buckets: Vec<ColorBucket>) -> Result<ColorScale, ScaleError> {
        let last = buckets.last().ok_or(ScaleError::Empty)?;
        if last.upper != 100.0 {
            return Err(ScaleError::BadFinalBound(last.upper));
        }
        for pair in buckets.windows(2) {
            if pair[1].upper <= pair[0].upper {
                return Err(ScaleError::NotIncreasing(pair[1].upper, pair[0].upper));
            }
        }
        for b in &buckets {
            let ok = !b.color.is_empty()
                && (b.color.bytes().all(|c| c.is_ascii_alphanumeric())
                    || b.color
                        .strip_prefix('#')
                        .is_some_and(|h| !h.is_empty() && h.bytes().all(|c| c.is_ascii_hexdigit())));
            if !ok {
                return Err(ScaleError::BadColor(b.color.clone()));
            }
        }
        Ok(ColorScale { buckets })
    }

    pub fn buckets(&self) -> &[ColorBucket] {
        &self.buckets
    }

    /// `percent` is compared after rounding to two decimals, so 99.996%
    /// counts as 100.
    pub fn color_for(&self, percent: f64) -> &str {
        let p = (percent * 100.0).round() / 100.0;
        self.buckets
            .iter()
            .find(|b| p <= b.upper)
            .unwrap_or_else(|| self.buckets.last().expect("validated non-empty"))
            .color
            .as_str()
    }
}

impl Default for ColorScale {
    fn default() -> Self {
        let b = |upper, color: &str| ColorBucket {
            upper,
            color: color.to_string(),
        };
        ColorScale {
            buckets: vec![b(0.0, "red"), b(50.0, "orange"), b(99.99, "yellow"), b(100.0, "green")],
        }
    }
}

impl<'de> Deserialize<'de> for ColorScale {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let buckets = Vec::<ColorBucket>::deserialize(d)?;
        ColorScale::new(buckets).map_err(serde::de::Error::custom)
    }
}

/// Canonical JSON: sorted keys, two-space indent, LF line ends, trailing
/// newline.
pub fn render_json(report: &CoverageReport) -> String {
    // serde_json's Value map is ordered by key
    let value = serde_json::to_value(report).expect("reports serialize");
    let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
    out.push('\n');
    out
}

pub(crate) fn fmt_percent(ratio: f64) -> String {
    format!("{:.2}", crate::metrics::percent(ratio))
}
