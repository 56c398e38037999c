//! Verification records: one per (identity, parameter tuple), serialized as
//! `{"identity", "params", "holds" | "inconclusive", "detail"}` with sorted keys.

use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Holds,
    Fails,
    /// A budget (window, depth, height) was too small to decide.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub identity: String,
    /// A JSON object; keys are kept sorted.
    pub params: Value,
    pub status: Status,
    pub detail: String,
    /// For inconclusive records: the budget (window, height or depth) that
    /// would have been needed. Not part of the serialized record.
    pub needed: Option<usize>,
}

impl Check {
    pub fn new(identity: &str, params: Value, status: Status, detail: impl Into<String>) -> Self {
        Check {
            identity: identity.to_string(),
            params,
            status,
            detail: detail.into(),
            needed: None,
        }
    }

    pub fn with_needed(mut self, needed: usize) -> Self {
        self.needed = Some(needed);
        self
    }

    pub fn holds(identity: &str, params: Value) -> Self {
        Check::new(identity, params, Status::Holds, "")
    }

    /// Run a check; budget exhaustion becomes an inconclusive record, every
    /// other error propagates.
    pub fn run(
        identity: &str,
        params: Value,
        f: impl FnOnce() -> Result<Option<String>>,
    ) -> Result<Check> {
        match f() {
            Ok(None) => Ok(Check::holds(identity, params)),
            Ok(Some(why)) => Ok(Check::new(identity, params, Status::Fails, why)),
            Err(e) if e.is_inconclusive() => {
                let needed = match &e {
                    Error::Budget { needed, .. } => *needed,
                    Error::Inconclusive { required, .. } => *required,
                    _ => 0,
                };
                Ok(Check::new(identity, params, Status::Inconclusive, e.to_string())
                    .with_needed(needed))
            }
            Err(e) => Err(e),
        }
    }

    /// Sort key: identity name, then the canonical serialization of the parameters.
    pub fn sort_key(&self) -> (String, String) {
        (self.identity.clone(), self.params.to_string())
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("identity".into(), Value::String(self.identity.clone()));
        m.insert("params".into(), self.params.clone());
        match self.status {
            Status::Holds => m.insert("holds".into(), Value::Bool(true)),
            Status::Fails => m.insert("holds".into(), Value::Bool(false)),
            Status::Inconclusive => m.insert("inconclusive".into(), Value::Bool(true)),
        };
        m.insert("detail".into(), Value::String(self.detail.clone()));
        Value::Object(m)
    }

    pub fn text_line(&self) -> String {
        let verdict = match self.status {
            Status::Holds => "holds",
            Status::Fails => "FAILS",
            Status::Inconclusive => "inconclusive",
        };
        if self.detail.is_empty() {
            format!("{} {} {}", self.identity, self.params, verdict)
        } else {
            format!(
                "{} {} {}: {}",
                self.identity, self.params, verdict, self.detail
            )
        }
    }
}

/// Aggregate verdict of a list of checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub holds: usize,
    pub fails: usize,
    pub inconclusive: usize,
}

impl Tally {
    pub fn of(checks: &[Check]) -> Tally {
        let mut t = Tally::default();
        for c in checks {
            match c.status {
                Status::Holds => t.holds += 1,
                Status::Fails => t.fails += 1,
                Status::Inconclusive => t.inconclusive += 1,
            }
        }
        t
    }

    /// Everything checked held and nothing was left undecided.
    pub fn all_hold(&self) -> bool {
        self.fails == 0 && self.inconclusive == 0 && self.holds > 0
    }

    /// Process exit status: 0 all hold, 1 a refutation, 2 undecided.
    pub fn exit_code(&self) -> i32 {
        if self.fails > 0 {
            1
        } else if self.inconclusive > 0 {
            2
        } else {
            0
        }
    }
}

pub fn sort_checks(checks: &mut [Check]) {
    checks.sort_by_key(|c| c.sort_key());
}

