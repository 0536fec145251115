use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WarningKind {
    UnreadableFile,
    NoMappings,
    EmptyService,
    DefaultedMethod,
    InvalidRoute,
    UntypedParam,
    TypeConflict,
    DroppedRecords,
    DecodeError,
    OverlappingWindows,
    OrphanCalls,
    TieBreak,
    EmptyServiceCoverage,
}

/// A non-fatal finding. Warnings never go to stdout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warning {
    pub kind: WarningKind,
    pub message: String,
}

impl Warning {
    pub fn new(kind: WarningKind, message: impl Into<String>) -> Warning {
        Warning {
            kind,
            message: message.into(),
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "warning: {}", self.message)
    }
}
