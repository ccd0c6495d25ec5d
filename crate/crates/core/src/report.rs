//! The common report schema shared by the verification suites and the CLI.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    ExceedsTruncation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub elapsed_ms: u64,
}

impl Case {
    pub fn new(name: impl Into<String>, status: Status, witness: Option<serde_json::Value>) -> Self {
        Case {
            name: name.into(),
            status,
            witness,
            elapsed_ms: 0,
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Case::new(name, Status::Pass, None)
    }

    /// `Pass` when `ok`, otherwise `Fail` carrying the witness.
    pub fn check(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> serde_json::Value) -> Self {
        if ok {
            Case::pass(name)
        } else {
            Case::new(name, Status::Fail, Some(witness()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub cases: Vec<Case>,
    pub seed: u64,
    pub version: String,
}

impl Report {
    /// Cases are sorted by name so the order does not depend on scheduling.
    pub fn new(suite: impl Into<String>, seed: u64, mut cases: Vec<Case>) -> Self {
        cases.sort_by(|a, b| a.name.cmp(&b.name));
        Report {
            suite: suite.into(),
            cases,
            seed,
            version: SCHEMA_VERSION.into(),
        }
    }

    pub fn count(&self, status: Status) -> usize {
        self.cases.iter().filter(|c| c.status == status).count()
    }

    pub fn has_failures(&self) -> bool {
        self.count(Status::Fail) > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}
