use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::call::Timestamp;
use super::ModelError;

/// A named test and the interval during which it ran.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestWindow {
    #[serde(rename = "id")]
    pub test_id: String,
    pub start: Timestamp,
    pub end: Timestamp,
}

impl TestWindow {
    pub fn new(test_id: impl Into<String>, start: Timestamp, end: Timestamp) -> Result<Self, ModelError> {
        let test_id = test_id.into();
        if start > end {
            return Err(ModelError::InvertedWindow(test_id));
        }
        Ok(TestWindow { test_id, start, end })
    }

    /// Both ends inclusive.
    pub fn contains(&self, ts: Timestamp) -> bool {
        self.start <= ts && ts <= self.end
    }

    pub fn shifted(&self, micros: i64) -> TestWindow {
        TestWindow {
            test_id: self.test_id.clone(),
            start: self.start.offset_by(micros),
            end: self.end.offset_by(micros),
        }
    }
}

/// The test manifest written by the test runner:
/// `{"tests":[{"id":..,"start":..,"end":..}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestManifest {
    pub tests: Vec<TestWindow>,
}

impl TestManifest {
    pub fn new(tests: Vec<TestWindow>) -> Result<TestManifest, ModelError> {
        let manifest = TestManifest { tests };
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let mut seen = BTreeSet::new();
        for t in &self.tests {
            if t.test_id.is_empty() {
                return Err(ModelError::EmptyTestId);
            }
            if t.start > t.end {
                return Err(ModelError::InvertedWindow(t.test_id.clone()));
            }
            if !seen.insert(t.test_id.as_str()) {
                return Err(ModelError::DuplicateTest(t.test_id.clone()));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<TestManifest, ModelError> {
        let manifest: TestManifest =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("manifest is serializable");
        out.push('\n');
        out
    }
}
