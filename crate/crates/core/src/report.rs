//! Check outcomes.

use std::collections::BTreeMap;

use serde::Serialize;

/// Most counterexamples kept per check.
pub const MAX_COUNTEREXAMPLES: usize = 10;

/// Running count of verified cases and the first few failures.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub cases: u64,
    pub failures: u64,
    pub counterexamples: Vec<String>,
}

impl Tally {
    /// Record one case; the description is only built on failure.
    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(describe());
            }
        }
    }

    /// Record a fallible case; errors count as failures.
    pub fn record_result(&mut self, r: crate::Result<bool>, describe: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, describe),
            Err(e) => self.record(false, || format!("{}: {e}", describe())),
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failures += other.failures;
        for c in other.counterexamples {
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(c);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub id: String,
    pub status: Status,
    pub cases: u64,
    pub failures: u64,
    pub counterexamples: Vec<String>,
    /// Named values worth printing, such as witnesses.
    pub notes: BTreeMap<String, String>,
}

impl Report {
    pub fn from_tally(id: &str, t: Tally) -> Report {
        Report {
            id: id.to_string(),
            status: if t.passed() { Status::Pass } else { Status::Fail },
            cases: t.cases,
            failures: t.failures,
            counterexamples: t.counterexamples,
            notes: BTreeMap::new(),
        }
    }

    pub fn note(mut self, key: &str, value: impl Into<String>) -> Report {
        self.notes.insert(key.to_string(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
