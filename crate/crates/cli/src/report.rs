use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use conjspace::report::CheckResult;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    Ok,
    Fail,
    Error,
    Skipped,
}

/// A rendered table, e.g. series by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub index: usize,
    pub op: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bind: Option<String>,
    pub status: StepStatus,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl StepReport {
    pub fn new(index: usize, op: &str, bind: Option<String>) -> Self {
        StepReport { index, op: op.to_string(), bind, status: StepStatus::Ok, checks: vec![], output: None, table: None, error: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub cutoff: u32,
    pub status: &'static str,
    pub steps: Vec<StepReport>,
}

impl Report {
    pub fn new(cutoff: u32, steps: Vec<StepReport>) -> Self {
        let ok = steps.iter().all(|s| s.status == StepStatus::Ok);
        Report { schema_version: SCHEMA_VERSION, cutoff, status: if ok { "pass" } else { "fail" }, steps }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let bind = s.bind.as_ref().map(|b| format!(" -> {b}")).unwrap_or_default();
            let _ = writeln!(out, "step {} {}{bind}: {:?}", s.index, s.op, s.status);
            if let Some(e) = &s.error {
                let _ = writeln!(out, "  error: {e}");
            }
            for c in &s.checks {
                match &c.witness {
                    Some(w) => {
                        let _ = writeln!(out, "  [{}] {}: {w}", c.status, c.check_id);
                    }
                    None => {
                        let _ = writeln!(out, "  [{}] {}", c.status, c.check_id);
                    }
                }
            }
            if let Some(t) = &s.table {
                render_table(&mut out, t);
            }
            if let Some(v) = &s.output {
                render_value(&mut out, v, 1);
            }
        }
        let _ = writeln!(out, "cutoff {}: {}", self.cutoff, self.status);
        out
    }
}

fn render_table(out: &mut String, t: &Table) {
    let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
    for r in &t.rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        format!("  {}", parts.join("  "))
    };
    let _ = writeln!(out, "{}", line(&t.columns));
    for r in &t.rows {
        let _ = writeln!(out, "{}", line(r));
    }
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if x.is_object() || (x.is_array() && x.as_array().is_some_and(|a| a.iter().any(|y| y.is_object()))) {
                    let _ = writeln!(out, "{pad}{k}:");
                    render_value(out, x, depth + 1);
                } else {
                    let _ = writeln!(out, "{pad}{k}: {}", scalar(x));
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if x.is_object() {
                    let _ = writeln!(out, "{pad}-");
                    render_value(out, x, depth + 1);
                } else {
                    let _ = writeln!(out, "{pad}- {}", scalar(x));
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
