//! Machine-readable certificates emitted by the command-line front end.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Error;

/// Process exit status of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    HypothesisFailed,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified => 0,
            Status::HypothesisFailed => 2,
            Status::InputError => 3,
        }
    }

    pub fn of_error(e: &Error) -> Self {
        if e.is_hypothesis_failure() {
            Status::HypothesisFailed
        } else {
            Status::InputError
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub operation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    /// `sha256:<hex>` of the input file bytes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_digest: Option<String>,
    pub status: Status,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violated_inequality: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub inputs: BTreeMap<String, Value>,
    pub verdicts: BTreeMap<String, bool>,
    pub bounds: BTreeMap<String, Value>,
    pub residuals: BTreeMap<String, f64>,
    pub hypothesis: BTreeMap<String, f64>,
    pub timing_ms: f64,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

impl CertificateReport {
    pub fn new(operation: impl Into<String>) -> Self {
        CertificateReport {
            operation: operation.into(),
            source: None,
            instance_digest: None,
            status: Status::Verified,
            summary: String::new(),
            violated_inequality: None,
            error: None,
            inputs: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            bounds: BTreeMap::new(),
            residuals: BTreeMap::new(),
            hypothesis: BTreeMap::new(),
            timing_ms: 0.0,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.into(), value.into());
        self
    }

    pub fn verdict(&mut self, key: &str, value: bool) -> &mut Self {
        self.verdicts.insert(key.into(), value);
        self
    }

    pub fn interval(&mut self, key: &str, lo: f64, hi: f64) -> &mut Self {
        self.bounds.insert(key.into(), Value::from(vec![lo, hi]));
        self
    }

    pub fn bound(&mut self, key: &str, value: f64) -> &mut Self {
        self.bounds.insert(key.into(), Value::from(value));
        self
    }

    pub fn residual(&mut self, key: &str, value: f64) -> &mut Self {
        self.residuals.insert(key.into(), value);
        self
    }

    pub fn hypothesis_value(&mut self, key: &str, value: f64) -> &mut Self {
        self.hypothesis.insert(key.into(), value);
        self
    }

    /// Marks a failed check that is not a library error.
    pub fn fail(&mut self, inequality: impl Into<String>, detail: impl Into<String>) -> &mut Self {
        self.status = Status::HypothesisFailed;
        self.violated_inequality = Some(inequality.into());
        self.error = Some(detail.into());
        self
    }

    pub fn record_error(&mut self, e: &Error) -> &mut Self {
        self.status = Status::of_error(e);
        if let Error::HypothesisFailed { inequality, .. } = e {
            self.violated_inequality = Some(inequality.clone());
        }
        self.error = Some(e.to_string());
        if self.summary.is_empty() {
            self.summary = match self.status {
                Status::HypothesisFailed => "hypothesis failed".into(),
                _ => "input error".into(),
            };
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "operation: {}", self.operation);
        if let Some(src) = &self.source {
            let _ = writeln!(s, "source: {src}");
        }
        if let Some(d) = &self.instance_digest {
            let _ = writeln!(s, "digest: {d}");
        }
        let status = match self.status {
            Status::Verified => "verified",
            Status::HypothesisFailed => "hypothesis failed",
            Status::InputError => "input error",
        };
        let _ = writeln!(s, "status: {status} (exit {})", self.exit_code());
        let _ = writeln!(s, "summary: {}", self.summary);
        if let Some(ineq) = &self.violated_inequality {
            let _ = writeln!(s, "violated: {ineq}");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(s, "error: {e}");
        }
        section(&mut s, "inputs", self.inputs.iter().map(|(k, v)| (k, v.to_string())));
        section(
            &mut s,
            "verdicts",
            self.verdicts.iter().map(|(k, v)| (k, v.to_string())),
        );
        section(&mut s, "bounds", self.bounds.iter().map(|(k, v)| (k, v.to_string())));
        section(
            &mut s,
            "residuals",
            self.residuals.iter().map(|(k, v)| (k, format!("{v:e}"))),
        );
        section(
            &mut s,
            "hypothesis",
            self.hypothesis.iter().map(|(k, v)| (k, v.to_string())),
        );
        let _ = writeln!(s, "timing_ms: {:.3}", self.timing_ms);
        s
    }
}

fn section<'a>(out: &mut String, title: &str, items: impl Iterator<Item = (&'a String, String)>) {
    let items: Vec<_> = items.collect();
    if items.is_empty() {
        return;
    }
    let _ = writeln!(out, "{title}:");
    for (k, v) in items {
        let _ = writeln!(out, "  {k}: {v}");
    }
}
