//! Check verdicts shared by every verification routine.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn pass(id: &str) -> Self {
        CheckResult { check_id: id.to_string(), status: Status::Pass, witness: None }
    }

    pub fn fail(id: &str, witness: impl Into<String>) -> Self {
        CheckResult { check_id: id.to_string(), status: Status::Fail, witness: Some(witness.into()) }
    }

    pub fn skipped(id: &str, why: impl Into<String>) -> Self {
        CheckResult { check_id: id.to_string(), status: Status::Skipped, witness: Some(why.into()) }
    }

    /// Pass with an informational note.
    pub fn pass_with(id: &str, note: impl Into<String>) -> Self {
        CheckResult { check_id: id.to_string(), status: Status::Pass, witness: Some(note.into()) }
    }

    pub fn from_outcome(id: &str, outcome: Result<(), String>) -> Self {
        match outcome {
            Ok(()) => CheckResult::pass(id),
            Err(w) => CheckResult::fail(id, w),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<24} {}", self.check_id, self.status)?;
        if let Some(w) = &self.witness {
            write!(f, "  ({w})")?;
        }
        Ok(())
    }
}
