//! Serializable reports. Field order is fixed so that a run with a given
//! seed produces byte-identical JSON.

use serde::Serialize;
use std::fmt::Write as _;

/// Version of the JSON layout described by `schema/report.schema.json`.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

/// One checked identity. Numerical checks carry `residual`; symbolic checks
/// carry the rendered residual polynomial in the DSL syntax.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_poly: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn numeric(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            status: Status::from_bool(residual < tol),
            residual: Some(residual),
            residual_poly: None,
            detail: None,
        }
    }

    pub fn symbolic(name: impl Into<String>, residual_poly: impl Into<String>, is_zero: bool) -> Self {
        Self {
            name: name.into(),
            status: Status::from_bool(is_zero),
            residual: None,
            residual_poly: Some(residual_poly.into()),
            detail: None,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool, detail: Option<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::from_bool(ok),
            residual: None,
            residual_poly: None,
            detail,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// Inputs echoed into every report.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Inputs {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub algebras: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub s: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pq: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pq_convention: Option<String>,
}

/// Result of one suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub status: Status,
    pub inputs: Inputs,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl Report {
    pub fn new(suite: impl Into<String>, inputs: Inputs, checks: Vec<Check>) -> Self {
        let status = Status::from_bool(checks.iter().all(|c| c.status == Status::Pass));
        Self {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            status,
            inputs,
            checks,
            wall_time_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[{}] suite {}", self.status.label(), self.suite);
        for c in &self.checks {
            let _ = write!(out, "  {} {}", c.status.label(), c.name);
            if let Some(r) = c.residual {
                let _ = write!(out, "  residual={r:e}");
            }
            if let Some(p) = &c.residual_poly {
                let _ = write!(out, "  residual={p}");
            }
            if let Some(d) = &c.detail {
                let _ = write!(out, "  ({d})");
            }
            out.push('\n');
        }
        if let Some(t) = self.wall_time_ms {
            let _ = writeln!(out, "  wall time {t:.1} ms");
        }
        out
    }
}

/// Several suite reports in a fixed order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bundle {
    pub schema_version: u32,
    pub status: Status,
    pub reports: Vec<Report>,
}

impl Bundle {
    pub fn new(reports: Vec<Report>) -> Self {
        let status = Status::from_bool(reports.iter().all(Report::passed));
        Self {
            schema_version: SCHEMA_VERSION,
            status,
            reports,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_text(&self) -> String {
        let mut out: String = self.reports.iter().map(Report::to_text).collect();
        let _ = writeln!(out, "[{}] all suites", self.status.label());
        out
    }
}
