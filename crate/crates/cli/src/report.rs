use std::collections::BTreeMap;
use std::fmt::Write as _;

use mwtree_core::{CheckStatus, DenseMatrix, VerificationReport};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const REPORT_SCHEMA: &str = "mwtree.report/v1";

#[derive(Debug, Clone, Serialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

impl InputRecord {
    pub fn new(path: &str, bytes: &[u8]) -> Self {
        let digest = Sha256::digest(bytes);
        let mut hex = String::with_capacity(64);
        for b in digest.iter() {
            let _ = write!(hex, "{b:02x}");
        }
        Self {
            path: path.to_owned(),
            sha256: hex,
        }
    }
}

/// One check in a report. `pass` is `null` for skipped checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: Option<bool>,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl CheckRecord {
    pub fn measured(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let pass = residual <= tolerance;
        Self {
            name: name.into(),
            residual: Some(residual),
            tolerance: Some(tolerance),
            pass: Some(pass),
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            reason: None,
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            residual: None,
            tolerance: None,
            pass: None,
            status: CheckStatus::Skipped,
            reason: Some(reason.into()),
        }
    }

    /// A yes/no check recorded as a count of violations against tolerance 0.
    pub fn count(name: impl Into<String>, violations: usize) -> Self {
        Self::measured(name, violations as f64, 0.0)
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    /// Replaces the tolerance of a measured check and re-derives its verdict.
    pub fn retolerance(self, tolerance: Option<f64>) -> Self {
        match (tolerance, self.residual) {
            (Some(tol), Some(r)) => Self {
                reason: self.reason,
                ..Self::measured(self.name, r, tol)
            },
            _ => self,
        }
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

impl From<VerificationReport> for CheckRecord {
    fn from(r: VerificationReport) -> Self {
        match r.residual {
            Some(res) => CheckRecord::measured(r.name, res, r.tolerance),
            None => CheckRecord::skipped(r.name, r.reason.unwrap_or_default()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub input: InputRecord,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub matrices: BTreeMap<String, Vec<Vec<f64>>>,
}

impl Report {
    pub fn new(command: &'static str, input: InputRecord) -> Self {
        Self {
            schema: REPORT_SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            input,
            checks: Vec::new(),
            passed: true,
            data: Value::Null,
            matrices: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.passed &= !check.failed();
        self.checks.push(check);
    }

    pub fn matrix(&mut self, name: &str, m: &DenseMatrix) {
        self.matrices.insert(name.to_owned(), m.to_rows());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} ({} {})", self.command, self.schema, self.tool_version);
        let _ = writeln!(out, "input   {} sha256:{}", self.input.path, self.input.sha256);
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "SKIP",
            };
            let _ = write!(out, "{status:<5} {}", c.name);
            if let (Some(r), Some(t)) = (c.residual, c.tolerance) {
                let _ = write!(out, "  residual={r:.3e} tol={t:.3e}");
            }
            if let Some(reason) = &c.reason {
                let _ = write!(out, "  ({reason})");
            }
            out.push('\n');
        }
        if !self.data.is_null() {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&self.data).unwrap_or_default());
        }
        for (name, rows) in &self.matrices {
            let _ = writeln!(out, "{name} =");
            for row in rows {
                let cells: Vec<String> = row.iter().map(|x| format!("{x:>10.4}")).collect();
                let _ = writeln!(out, "  {}", cells.join(" "));
            }
        }
        let _ = writeln!(out, "overall {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}
