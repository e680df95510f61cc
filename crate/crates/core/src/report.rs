//! The JSON envelope shared by every command.
//!
//! Keys appear in a fixed order: `command`, `config`, `seed`, `status`,
//! `witnesses`, `timings_ms`, `result`. Integers outside ±(2^53 - 1) are
//! decimal strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::recurrence::ClaimStatus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    /// 0 pass, 1 fail, 2 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }

    /// Fail dominates inconclusive, which dominates pass.
    pub fn combine(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

impl From<ClaimStatus> for Status {
    fn from(s: ClaimStatus) -> Self {
        match s {
            ClaimStatus::Pass => Status::Pass,
            ClaimStatus::Fail => Status::Fail,
            ClaimStatus::Inconclusive => Status::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub command: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub status: Status,
    pub witnesses: Vec<Value>,
    /// Empty unless timing was requested, so that reports stay byte-identical.
    pub timings_ms: BTreeMap<String, u64>,
    pub result: Value,
}

impl Envelope {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope values are plain JSON")
    }
}
