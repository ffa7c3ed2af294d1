//! Machine-readable reports plus a short text summary. Nothing here depends
//! on wall-clock time, so a fixed configuration gives byte-identical output.
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub check: String,
    pub case: usize,
    pub witness: Value,
}

/// Outcome of one named suite: counts per check kind and the failures with
/// serialized counterexamples.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: usize,
    pub counts: BTreeMap<String, usize>,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.into(),
            checks: 0,
            counts: BTreeMap::new(),
            failures: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    /// Records one check; the witness is only built on failure.
    pub fn check(&mut self, name: &str, case: usize, ok: bool, witness: impl FnOnce() -> Value) -> bool {
        self.checks += 1;
        *self.counts.entry(name.into()).or_default() += 1;
        if !ok {
            self.failures.push(Failure { check: name.into(), case, witness: witness() });
        }
        ok
    }

    /// Records a check whose computation itself failed.
    pub fn error(&mut self, name: &str, case: usize, err: impl std::fmt::Display) {
        let msg = err.to_string();
        self.check(name, case, false, || Value::String(msg));
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details.insert(key.into(), serde_json::to_value(value).expect("serializable detail"));
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn count(&self, name: &str) -> usize {
        self.counts.get(name).copied().unwrap_or(0)
    }

    pub fn summary_line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        format!("{verdict} {}: {} checks, {} failures", self.suite, self.checks, self.failures.len())
    }
}

/// Top-level report of one command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: BTreeMap<String, Value>,
    pub suites: Vec<SuiteReport>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub result: Value,
    #[serde(skip)]
    pub text: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), config: BTreeMap::new(), suites: Vec::new(), result: Value::Null, text: Vec::new() }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.config.insert(key.into(), serde_json::to_value(value).expect("serializable config"));
    }

    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn summary(&self) -> String {
        let mut out: Vec<String> = self.text.clone();
        out.extend(self.suites.iter().map(SuiteReport::summary_line));
        let total: usize = self.suites.iter().map(|s| s.checks).sum();
        let failed: usize = self.suites.iter().map(|s| s.failures.len()).sum();
        if !self.suites.is_empty() {
            out.push(format!("{}: {total} checks, {failed} failures", if self.passed() { "PASS" } else { "FAIL" }));
        }
        out.join("\n") + "\n"
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}
