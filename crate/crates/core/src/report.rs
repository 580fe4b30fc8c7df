//! Deterministic JSON reports.
//!
//! Canonical form: keys sorted, two-space indentation, LF newlines, trailing
//! newline, `timing_ms` fields removed. Two runs with the same configuration
//! produce byte-identical canonical output.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::{Result, DEFINITIONAL_EXTENSION_NOTICE, VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    CertifiedModP,
    Skipped,
}

impl CheckStatus {
    /// Pass or certified.
    pub fn is_ok(self) -> bool {
        matches!(self, CheckStatus::Pass | CheckStatus::CertifiedModP | CheckStatus::Skipped)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub status: CheckStatus,
    pub witness: String,
    pub timing_ms: u64,
}

impl Check {
    pub fn new(id: impl Into<String>, description: impl Into<String>, status: CheckStatus, witness: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            description: description.into(),
            status,
            witness: witness.into(),
            timing_ms: 0,
        }
    }

    pub fn from_bool(id: impl Into<String>, description: impl Into<String>, ok: bool, witness: impl Into<String>) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        Self::new(id, description, status, witness)
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.timing_ms = start.elapsed().as_millis() as u64;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
    pub checks: Vec<Check>,
    /// Computed objects (classifications and the like), keyed by name.
    pub results: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        Report {
            command: command.into(),
            params: BTreeMap::new(),
            seed,
            checks: Vec::new(),
            results: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, key: &str, v: impl Into<Value>) {
        self.params.insert(key.to_string(), v.into());
    }

    pub fn result(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.to_string(), v.into());
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail).count()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "tool": "k3lab",
            "tool_version": VERSION,
            "notice": DEFINITIONAL_EXTENSION_NOTICE,
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "checks": self.checks,
            "results": self.results,
        })
    }

    /// Full JSON including timing.
    pub fn to_json(&self) -> String {
        render(&self.to_value())
    }

    /// JSON with timing fields removed.
    pub fn canonical_json(&self) -> String {
        let mut v = self.to_value();
        strip_timing(&mut v);
        render(&v)
    }

    /// Plain-text summary, one line per check.
    pub fn summary(&self) -> String {
        let mut s = format!("k3lab {} {}\n{}\n", VERSION, self.command, DEFINITIONAL_EXTENSION_NOTICE);
        for (k, v) in &self.results {
            s += &format!("  {k}: {}\n", one_line(v));
        }
        for c in &self.checks {
            let status = serde_json::to_value(c.status).expect("status serializes");
            s += &format!(
                "[{}] {}: {}",
                status.as_str().unwrap_or_default(),
                c.id,
                c.description
            );
            if !c.witness.is_empty() {
                s += &format!(" ({})", c.witness);
            }
            s.push('\n');
        }
        s
    }
}

fn one_line(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Removes every `timing_ms` key, recursively.
pub fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("timing_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

/// Writes the full report to `path`.
pub fn emit_report(r: &Report, path: &Path) -> Result<()> {
    std::fs::write(path, r.to_json())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid_json() {
        let r = Report::new("bloch", 0);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["checks"], json!([]));
        assert!(r.to_json().ends_with("}\n"));
    }

    #[test]
    fn round_trips_through_parser() {
        let mut r = Report::new("verify", 3);
        r.push(Check::from_bool("x", "a check", true, "w"));
        let text = r.to_json();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(render(&v), text);
        assert_eq!(v["checks"][0]["status"], "pass");
    }

    #[test]
    fn canonical_drops_timing() {
        let mut a = Report::new("verify", 0);
        let mut b = a.clone();
        let mut c1 = Check::from_bool("x", "d", true, "");
        c1.timing_ms = 5;
        let mut c2 = c1.clone();
        c2.timing_ms = 9;
        a.push(c1);
        b.push(c2);
        assert_ne!(a.to_json(), b.to_json());
        assert_eq!(a.canonical_json(), b.canonical_json());
        assert!(!a.canonical_json().contains("timing_ms"));
    }

    #[test]
    fn keys_sorted() {
        let mut r = Report::new("k", 0);
        r.result("zeta", 1);
        r.result("alpha", 2);
        let s = r.canonical_json();
        assert!(s.find("\"alpha\"").unwrap() < s.find("\"zeta\"").unwrap());
        assert!(s.find("\"checks\"").unwrap() < s.find("\"command\"").unwrap());
    }
}
