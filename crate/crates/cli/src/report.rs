use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// The statement this check confirms, quoted in words.
    pub anchor: String,
    pub status: Status,
    pub witness: Value,
}

impl Check {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, ok: bool, witness: Value) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Check { id: id.into(), anchor: anchor.into(), status, witness }
    }

    pub fn skipped(id: impl Into<String>, anchor: impl Into<String>, why: impl Into<String>) -> Self {
        Check { id: id.into(), anchor: anchor.into(), status: Status::Skipped, witness: Value::String(why.into()) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn skipped(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Skipped)
    }
}
