//! Versioned JSON reports with scalars as decimal strings.

use purespin::lie::{CMat, GroupModel};
use purespin::linalg::Mat;
use purespin::Scalar;
use serde::Serialize;
use serde_json::Value;

use crate::RunConfig;

pub const SCHEMA: &str = "purespin-report/1";

pub fn version() -> String {
    format!("v{}", env!("CARGO_PKG_VERSION"))
}

pub fn num(x: f64) -> String {
    x.to_decimal_string()
}

pub fn mat(m: &Mat) -> Vec<Vec<String>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| num(m[(i, j)])).collect()).collect()
}

pub fn vector(v: &[f64]) -> Vec<String> {
    v.iter().copied().map(num).collect()
}

/// A group element as separate real and imaginary parts.
pub fn group_element(g: &CMat) -> Value {
    let part = |f: fn(&purespin::lie::group::C64) -> f64| -> Vec<Vec<String>> {
        (0..g.nrows()).map(|i| (0..g.ncols()).map(|j| num(f(&g[(i, j)]))).collect()).collect()
    };
    serde_json::json!({ "re": part(|z| z.re), "im": part(|z| z.im) })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub seed: String,
    pub group: String,
    pub group_dim: usize,
    pub tolerance: String,
    pub fd_step: String,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub residual: String,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub threshold: String,
    pub samples: usize,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    /// Passes when `residual < threshold`.
    pub fn below(name: &str, residual: f64, threshold: f64, samples: usize) -> Self {
        Check {
            name: name.into(),
            passed: residual < threshold,
            residual: num(residual),
            threshold: num(threshold),
            samples,
            detail: String::new(),
        }
    }

    /// Passes when `value > threshold`.
    pub fn above(name: &str, value: f64, threshold: f64, samples: usize) -> Self {
        Check { passed: value > threshold, ..Check::below(name, value, threshold, samples) }
    }

    pub fn flag(name: &str, passed: bool, samples: usize, detail: String) -> Self {
        Check { name: name.into(), passed, residual: String::new(), threshold: String::new(), samples, detail }
    }

    pub fn with_detail(mut self, detail: String) -> Self {
        self.detail = detail;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: String,
    pub command: String,
    pub provenance: Provenance,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub records: Vec<Value>,
}

impl Report {
    pub fn new(config: &RunConfig) -> Self {
        Report {
            schema: SCHEMA,
            version: version(),
            command: config.command.name(),
            provenance: Provenance {
                seed: config.seed.to_string(),
                group: config.group.name().into(),
                group_dim: GroupModel::new(config.group).dim(),
                tolerance: num(config.tolerance.tau),
                fd_step: num(config.fd_step),
                samples: config.samples,
            },
            passed: true,
            checks: Vec::new(),
            records: Vec::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn record(&mut self, v: Value) {
        self.records.push(v);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
