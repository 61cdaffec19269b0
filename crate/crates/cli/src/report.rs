//! Check records and their JSON/CSV rendering.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::Format;

/// One verified identity: what was computed, what it should equal, and whether it does.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub paper_anchor: String,
    pub computed: Value,
    pub expected: Value,
    /// `None` marks an informational row that is reported but never fails.
    pub tol: Option<f64>,
    pub pass: bool,
    #[serde(skip)]
    deviation: f64,
}

impl Check {
    fn graded(id: &str, anchor: &str, computed: Value, expected: Value, deviation: f64, tol: f64) -> Self {
        Self {
            id: id.to_string(),
            paper_anchor: anchor.to_string(),
            computed,
            expected,
            tol: Some(tol),
            pass: deviation <= tol,
            deviation,
        }
    }

    /// `|computed - expected| ≤ tol`
    pub fn close(id: &str, anchor: &str, computed: f64, expected: f64, tol: f64) -> Self {
        let dev = if computed.is_finite() { (computed - expected).abs() } else { f64::INFINITY };
        Self::graded(id, anchor, json!(computed), json!(expected), dev, tol)
    }

    /// A defect that should vanish: `computed ≤ tol`.
    pub fn defect(id: &str, anchor: &str, computed: f64, tol: f64) -> Self {
        let dev = if computed.is_nan() { f64::INFINITY } else { computed };
        Self::graded(id, anchor, json!(computed), json!(0.0), dev, tol)
    }

    /// Largest entrywise difference of two vectors within `tol`.
    pub fn vector(id: &str, anchor: &str, computed: &[f64], expected: &[f64], tol: f64) -> Self {
        let dev = if computed.len() != expected.len() {
            f64::INFINITY
        } else {
            computed
                .iter()
                .zip(expected)
                .map(|(a, b)| if a.is_finite() { (a - b).abs() } else { f64::INFINITY })
                .fold(0.0, f64::max)
        };
        Self::graded(id, anchor, json!(computed), json!(expected), dev, tol)
    }

    /// A yes/no property.
    pub fn holds(id: &str, anchor: &str, computed: Value, expected: Value, pass: bool) -> Self {
        Self {
            id: id.to_string(),
            paper_anchor: anchor.to_string(),
            computed,
            expected,
            tol: None,
            pass,
            deviation: 0.0,
        }
    }

    /// Reported for comparison only.
    pub fn note(id: &str, anchor: &str, computed: Value, expected: Value) -> Self {
        Self::holds(id, anchor, computed, expected, true)
    }

    pub fn deviation(&self) -> f64 {
        self.deviation
    }

    /// Regrade against a new tolerance; informational rows are left alone.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        if self.tol.is_some() {
            self.tol = Some(tol);
            self.pass = self.deviation <= tol;
        }
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub params: Map<String, Value>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str, params: Value) -> Self {
        let params = match params {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        Self {
            suite: suite.to_string(),
            params,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn find(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Checks whose id starts with `prefix`.
    pub fn matching<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.id.starts_with(prefix))
    }

    pub fn with_tolerance(mut self, tol: Option<f64>) -> Self {
        if let Some(tol) = tol {
            self.checks = self.checks.into_iter().map(|c| c.with_tolerance(tol)).collect();
        }
        self
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// A single report renders as an object, several as an array.
pub fn render(reports: &[Report], format: Format) -> Result<String, std::io::Error> {
    match format {
        Format::Json => {
            let text = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])
            } else {
                serde_json::to_string_pretty(reports)
            }
            .map_err(std::io::Error::other)?;
            Ok(text + "\n")
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "id", "paper_anchor", "computed", "expected", "tol", "pass"])?;
            for r in reports {
                for c in &r.checks {
                    let tol = c.tol.map(|t| json!(t).to_string()).unwrap_or_default();
                    w.write_record([
                        r.suite.as_str(),
                        &c.id,
                        &c.paper_anchor,
                        &cell(&c.computed),
                        &cell(&c.expected),
                        &tol,
                        if c.pass { "true" } else { "false" },
                    ])?;
                }
            }
            let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
            String::from_utf8(bytes).map_err(std::io::Error::other)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grading() {
        assert!(Check::close("a", "x", 1.0, 1.0 + 1e-12, 1e-10).pass);
        assert!(!Check::close("a", "x", f64::NAN, 1.0, 1e-10).pass);
        assert!(!Check::defect("a", "x", 2e-3, 1e-3).pass);
        assert!(Check::defect("a", "x", 2e-3, 1e-3).with_tolerance(1e-2).pass);
        assert!(!Check::vector("a", "x", &[1.0], &[1.0, 2.0], 1.0).pass);
        let n = Check::note("a", "x", json!(1), json!(2)).with_tolerance(1e-30);
        assert!(n.pass && n.tol.is_none());
    }

    #[test]
    fn rendering() {
        let mut r = Report::new("demo", json!({"r": 0.5}));
        r.push(Check::close("one", "anchor", 0.5, 0.5, 1e-12));
        r.push(Check::note("two", "anchor", json!([1.0, 2.0]), Value::Null));
        let text = render(std::slice::from_ref(&r), Format::Json).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["suite"], "demo");
        assert_eq!(back["checks"][0]["pass"], true);
        assert!(back["checks"][1]["tol"].is_null());
        let csv = render(&[r.clone(), r], Format::Csv).unwrap();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.lines().nth(2).unwrap().contains("\"[1.0,2.0]\""));
    }
}
