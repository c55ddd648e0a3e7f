//! Verification reports shared by the check suites.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Note,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub witness: Value,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<CheckEntry>,
    pub passed: usize,
    pub failed: usize,
}

impl VerificationReport {
    pub fn new(suite: &str) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, id: &str, anchor: &str, ok: bool, witness: Value) {
        let status = if ok { Status::Pass } else { Status::Fail };
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.checks.push(CheckEntry {
            id: id.to_string(),
            anchor: anchor.to_string(),
            status,
            witness,
        });
    }

    /// An informational entry that neither passes nor fails.
    pub fn note(&mut self, id: &str, anchor: &str, witness: Value) {
        self.checks.push(CheckEntry {
            id: id.to_string(),
            anchor: anchor.to_string(),
            status: Status::Note,
            witness,
        });
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.passed += other.passed;
        self.failed += other.failed;
        self.checks.extend(other.checks);
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
    }
}

/// Outcome of a sampled exact check.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SampleReport {
    pub samples: usize,
    pub skipped: usize,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub point: crate::geometry::Point,
    pub detail: String,
}

impl SampleReport {
    pub fn ok(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn checked(&self) -> usize {
        self.samples - self.skipped
    }
}
