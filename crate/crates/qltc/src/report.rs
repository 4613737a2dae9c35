//! Per-step transform reports and their text rendering: one column per
//! pipeline stage, one row per code parameter, with an equivalent JSON
//! form for regression fixtures.

use serde::{Deserialize, Serialize};

use crate::css::{CodeParams, Metric};
use crate::oracle::Rational;
use crate::{Error, Result};

/// Outcome of one invariant or lemma-bound check inside a step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// One pipeline step: what ran, with which parameters, what came out, and
/// which checks held.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformReport {
    pub step: String,
    pub params: serde_json::Value,
    pub measured: CodeParams,
    pub checks: Vec<CheckOutcome>,
}

impl TransformReport {
    pub fn new(step: &str, params: serde_json::Value, measured: CodeParams) -> Self {
        TransformReport {
            step: step.to_string(),
            params,
            measured,
            checks: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn metric_cell<T: std::fmt::Display>(m: &Metric<T>) -> String {
    match m {
        Metric::Exact(v) => v.to_string(),
        Metric::Skipped { needed } => format!("skip(2^{needed})"),
        Metric::Undefined => "undef".to_string(),
        Metric::NotRequested => "-".to_string(),
    }
}

fn rho_cell(m: &Metric<Rational>) -> String {
    match m {
        Metric::Exact(v) => format!("{} ({:.4})", v, v.to_f64()),
        other => metric_cell(other),
    }
}

/// Plain-text table: parameters as rows, stages as columns.
pub fn render_table(reports: &[TransformReport]) -> String {
    let rows: Vec<(&str, Box<dyn Fn(&CodeParams) -> String>)> = vec![
        ("physical qubits", Box::new(|p: &CodeParams| p.n.to_string())),
        ("x checks", Box::new(|p: &CodeParams| p.n_x.to_string())),
        ("z checks", Box::new(|p: &CodeParams| p.n_z.to_string())),
        ("dimension k", Box::new(|p: &CodeParams| p.k.to_string())),
        ("distance d_x", Box::new(|p: &CodeParams| metric_cell(&p.d_x))),
        ("distance d_z", Box::new(|p: &CodeParams| metric_cell(&p.d_z))),
        ("weight w_x", Box::new(|p: &CodeParams| p.w_x.to_string())),
        ("weight w_z", Box::new(|p: &CodeParams| p.w_z.to_string())),
        ("degree q_x", Box::new(|p: &CodeParams| p.q_x.to_string())),
        ("degree q_z", Box::new(|p: &CodeParams| p.q_z.to_string())),
        (
            "locality",
            Box::new(|p: &CodeParams| p.w_x.max(p.w_z).max(p.q_x).max(p.q_z).to_string()),
        ),
        ("soundness rho_x", Box::new(|p: &CodeParams| rho_cell(&p.rho_x))),
        ("soundness rho_z", Box::new(|p: &CodeParams| rho_cell(&p.rho_z))),
    ];
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["parameter".to_string()];
    header.extend(reports.iter().map(|r| r.step.clone()));
    cells.push(header);
    for (label, extract) in &rows {
        let mut row = vec![label.to_string()];
        row.extend(reports.iter().map(|r| extract(&r.measured)));
        cells.push(row);
    }
    let mut checks_row = vec!["checks".to_string()];
    checks_row.extend(reports.iter().map(|r| {
        let failed = r.checks.iter().filter(|c| !c.passed).count();
        if r.checks.is_empty() {
            "-".to_string()
        } else if failed == 0 {
            format!("{} ok", r.checks.len())
        } else {
            format!("{failed}/{} FAILED", r.checks.len())
        }
    }));
    cells.push(checks_row);

    let cols = cells[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, row) in cells.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if i == 0 {
            let total = widths.iter().sum::<usize>() + 2 * (cols - 1);
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    let mut failures: Vec<String> = Vec::new();
    for r in reports {
        for c in &r.checks {
            if !c.passed {
                failures.push(format!("FAIL [{}] {}: {}", r.step, c.name, c.detail));
            }
        }
    }
    if !failures.is_empty() {
        out.push('\n');
        for f in failures {
            out.push_str(&f);
            out.push('\n');
        }
    }
    out
}

/// Machine-readable form of the same reports.
pub fn to_json(reports: &[TransformReport]) -> Result<String> {
    serde_json::to_string_pretty(reports)
        .map_err(|e| Error::InvalidParameter(format!("report serialization failed: {e}")))
}

pub fn from_json(text: &str) -> Result<Vec<TransformReport>> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("bad report JSON: {e}"),
    })
}
