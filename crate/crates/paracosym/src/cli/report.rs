//! Check reports: accumulation, JSON form, the text table and report diffs.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// One executed check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// Which group of properties the check belongs to.
    pub anchor: String,
    /// `None` when a residual was not finite or a point failed outright.
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub points: usize,
    pub pass: bool,
}

/// Observations that are reported but never fail a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub name: String,
    pub value: Value,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub family: String,
    pub label: String,
    pub dim: usize,
    pub sigma: f64,
    pub params: Map<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub seed: u64,
    #[serde(rename = "box")]
    pub bounds: [f64; 2],
    pub points: usize,
    pub jet_order: usize,
    pub tolerance: f64,
    pub normalize_xi: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub model: ModelDescriptor,
    pub environment: Environment,
    pub checks: Vec<CheckRecord>,
    pub findings: Vec<Finding>,
    /// Per-point failures (construction errors), in order of occurrence.
    pub errors: Vec<String>,
    pub pass: bool,
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn failing(&self) -> Vec<&CheckRecord> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn finding(&self, name: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.name == name)
    }

    /// Human-readable table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let e = &self.environment;
        let _ = writeln!(
            out,
            "model: {} ({} points, seed {}, jet order {}, box [{}, {}])",
            self.model.label, e.points, e.seed, e.jet_order, e.bounds[0], e.bounds[1]
        );
        let width = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
        for c in &self.checks {
            let status = if c.pass { "pass" } else { "FAIL" };
            let res = c.max_residual.map(|r| format!("{r:.3e}")).unwrap_or_else(|| "invalid".into());
            let pad = width - c.name.chars().count();
            let _ = writeln!(
                out,
                "  {status}  {}{}  {res:>10} / {:.0e}  [{:>3}]  {}",
                c.name,
                " ".repeat(pad),
                c.tolerance,
                c.points,
                c.anchor
            );
        }
        for f in &self.findings {
            let _ = writeln!(out, "  note  {}: {}  ({})", f.name, f.value, f.note);
        }
        for e in self.errors.iter().take(5) {
            let _ = writeln!(out, "  error {e}");
        }
        if self.errors.len() > 5 {
            let _ = writeln!(out, "  error ... {} more", self.errors.len() - 5);
        }
        let failed = self.failing().len();
        let _ = writeln!(out, "summary: {} checks, {} passed, {} failed", self.checks.len(), self.checks.len() - failed, failed);
        out
    }
}

/// Accumulates per-point residuals into check records in first-seen order.
#[derive(Default)]
pub struct Suite {
    records: Vec<CheckRecord>,
    worst: Vec<f64>,
    invalid: Vec<bool>,
    index: HashMap<String, usize>,
    pub findings: Vec<Finding>,
    pub errors: Vec<String>,
}

impl Suite {
    pub fn add(&mut self, name: &str, anchor: &str, tolerance: f64, residual: f64) {
        let i = *self.index.entry(name.to_string()).or_insert_with(|| {
            self.records.push(CheckRecord {
                name: name.to_string(),
                anchor: anchor.to_string(),
                max_residual: None,
                tolerance,
                points: 0,
                pass: true,
            });
            self.worst.push(0.0);
            self.invalid.push(false);
            self.records.len() - 1
        });
        self.records[i].points += 1;
        if residual.is_finite() {
            self.worst[i] = self.worst[i].max(residual);
        } else {
            self.invalid[i] = true;
        }
    }

    pub fn finding(&mut self, name: &str, value: Value, note: &str) {
        self.findings.push(Finding { name: name.into(), value, note: note.into() });
    }

    pub fn error(&mut self, msg: String) {
        self.errors.push(msg);
    }

    pub fn finish(self, model: ModelDescriptor, environment: Environment) -> CheckReport {
        let mut checks = self.records;
        for (i, c) in checks.iter_mut().enumerate() {
            if self.invalid[i] {
                c.max_residual = None;
                c.pass = false;
            } else {
                c.max_residual = Some(self.worst[i]);
                c.pass = self.worst[i] <= c.tolerance;
            }
        }
        let pass = checks.iter().all(|c| c.pass) && self.errors.is_empty();
        CheckReport { model, environment, checks, findings: self.findings, errors: self.errors, pass }
    }
}

/// Difference between two reports.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReportDiff {
    pub only_left: Vec<String>,
    pub only_right: Vec<String>,
    /// `(name, left pass, right pass)`.
    pub status_changed: Vec<(String, bool, bool)>,
    /// `(name, left, right)` for residuals that differ beyond the relative tolerance.
    pub residual_changed: Vec<(String, Option<f64>, Option<f64>)>,
    pub environment_changed: bool,
}

impl ReportDiff {
    /// Different check sets or any pass/fail change.
    pub fn is_regression(&self) -> bool {
        !self.only_left.is_empty() || !self.only_right.is_empty() || !self.status_changed.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.environment_changed {
            let _ = writeln!(out, "environment differs");
        }
        for n in &self.only_left {
            let _ = writeln!(out, "- {n}");
        }
        for n in &self.only_right {
            let _ = writeln!(out, "+ {n}");
        }
        for (n, a, b) in &self.status_changed {
            let s = |p: &bool| if *p { "pass" } else { "FAIL" };
            let _ = writeln!(out, "! {n}: {} -> {}", s(a), s(b));
        }
        for (n, a, b) in &self.residual_changed {
            let f = |x: &Option<f64>| x.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "invalid".into());
            let _ = writeln!(out, "~ {n}: {} -> {}", f(a), f(b));
        }
        if out.is_empty() {
            out.push_str("reports agree\n");
        }
        out
    }
}

pub fn diff_reports(left: &CheckReport, right: &CheckReport, rel_tol: f64) -> ReportDiff {
    let mut d = ReportDiff { environment_changed: left.environment != right.environment, ..Default::default() };
    for c in &left.checks {
        match right.check(&c.name) {
            None => d.only_left.push(c.name.clone()),
            Some(r) => {
                if r.pass != c.pass {
                    d.status_changed.push((c.name.clone(), c.pass, r.pass));
                }
                let changed = match (c.max_residual, r.max_residual) {
                    (Some(a), Some(b)) => (a - b).abs() > rel_tol * a.abs().max(b.abs()),
                    (a, b) => a.is_some() != b.is_some(),
                };
                if changed {
                    d.residual_changed.push((c.name.clone(), c.max_residual, r.max_residual));
                }
            }
        }
    }
    for c in &right.checks {
        if left.check(&c.name).is_none() {
            d.only_right.push(c.name.clone());
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env() -> Environment {
        Environment { seed: 1, bounds: [-1.0, 1.0], points: 2, jet_order: 3, tolerance: 1e-8, normalize_xi: false }
    }

    fn desc() -> ModelDescriptor {
        ModelDescriptor { family: "flat".into(), label: "t".into(), dim: 5, sigma: 1.0, params: Map::new() }
    }

    #[test]
    fn suite_keeps_first_seen_order_and_maxima() {
        let mut s = Suite::default();
        s.add("b", "x", 1e-3, 1e-5);
        s.add("a", "x", 1e-3, 2e-3);
        s.add("b", "x", 1e-3, 3e-5);
        let r = s.finish(desc(), env());
        assert_eq!(r.checks.iter().map(|c| c.name.as_str()).collect::<Vec<_>>(), ["b", "a"]);
        assert_eq!(r.checks[0].max_residual, Some(3e-5));
        assert_eq!(r.checks[0].points, 2);
        assert!(!r.checks[1].pass);
        assert!(!r.pass);
    }

    #[test]
    fn non_finite_residual_fails() {
        let mut s = Suite::default();
        s.add("a", "x", 1.0, f64::NAN);
        let r = s.finish(desc(), env());
        assert_eq!(r.checks[0].max_residual, None);
        assert!(!r.pass);
        let back: CheckReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn diff_flags_status_changes() {
        let mut a = Suite::default();
        a.add("a", "x", 1.0, 0.5);
        a.add("b", "x", 1.0, 0.5);
        let mut b = Suite::default();
        b.add("a", "x", 1.0, 2.0);
        b.add("c", "x", 1.0, 0.5);
        let d = diff_reports(&a.finish(desc(), env()), &b.finish(desc(), env()), 0.0);
        assert_eq!(d.only_left, ["b"]);
        assert_eq!(d.only_right, ["c"]);
        assert_eq!(d.status_changed, [("a".to_string(), true, false)]);
        assert!(d.is_regression());
    }
}
