use serde::{Deserialize, Serialize};

/// Outcome of one verification routine. Failures are collected, not thrown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub pass: bool,
    pub failures: Vec<String>,
    /// Instances that could not be evaluated inside the stored range.
    pub skipped: usize,
    /// Instances actually evaluated.
    pub checked: usize,
}

/// Failures beyond this many are counted but not described.
const MAX_RECORDED_FAILURES: usize = 50;

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            pass: true,
            failures: Vec::new(),
            skipped: 0,
            checked: 0,
        }
    }

    pub fn ok(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.checked += 1;
        self.pass = false;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(msg.into());
        } else if self.failures.len() == MAX_RECORDED_FAILURES {
            self.failures.push("further failures omitted".into());
        }
    }

    /// Records a pass when `cond` holds, otherwise a failure built lazily.
    pub fn expect(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        if cond {
            self.ok();
        } else {
            self.fail(msg());
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.pass &= other.pass;
        self.checked += other.checked;
        self.skipped += other.skipped;
        for f in other.failures {
            if self.failures.len() <= MAX_RECORDED_FAILURES {
                self.failures.push(format!("{}: {f}", other.check));
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
