//! Command reports and the exit-code convention.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use toricfan::divisor::CartierData;
use toricfan::exactlin::{FGAbelianGroup, LatticeVector, RationalVector};

use crate::files::number;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Library(#[from] toricfan::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(toricfan::Error::Invariant(_)) => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            3 => "invariant",
            _ => "input",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorEntry {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    /// `Some(false)` when the command ran and the property fails
    pub holds: Option<bool>,
    pub summary: Vec<String>,
    pub data: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
    pub errors: Vec<ErrorEntry>,
    pub timings_us: BTreeMap<String, u128>,
    #[serde(skip)]
    started: Option<Instant>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            command,
            holds: None,
            summary: Vec::new(),
            data: BTreeMap::new(),
            warnings: Vec::new(),
            errors: Vec::new(),
            timings_us: BTreeMap::new(),
            started: Some(Instant::now()),
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }

    pub fn put(&mut self, key: &str, v: Value) {
        self.data.insert(key.to_string(), v);
    }

    /// Record a verdict; a failure anywhere makes the whole report fail.
    pub fn verdict(&mut self, holds: bool) {
        self.holds = Some(self.holds.unwrap_or(true) && holds);
    }

    pub fn timed<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings_us
            .insert(label.to_string(), start.elapsed().as_micros());
        out
    }

    pub fn fail(&mut self, e: &CliError) {
        self.errors.push(ErrorEntry {
            kind: e.kind(),
            message: e.to_string(),
        });
    }

    pub fn exit_code(&self) -> i32 {
        if self.errors.iter().any(|e| e.kind == "invariant") {
            3
        } else if !self.errors.is_empty() {
            2
        } else if self.holds == Some(false) {
            1
        } else {
            0
        }
    }

    pub fn finish(&mut self) {
        if let Some(start) = self.started.take() {
            self.timings_us
                .insert("total".into(), start.elapsed().as_micros());
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "$ toricfan {}", self.command.join(" ")).unwrap();
        for w in &self.warnings {
            writeln!(out, "warning: {w}").unwrap();
        }
        for s in &self.summary {
            writeln!(out, "{s}").unwrap();
        }
        for e in &self.errors {
            writeln!(out, "error ({}): {}", e.kind, e.message).unwrap();
        }
        match self.holds {
            Some(true) => writeln!(out, "verdict: holds").unwrap(),
            Some(false) => writeln!(out, "verdict: fails").unwrap(),
            None => {}
        }
        out
    }
}

/// Integral rationals become JSON numbers, the rest strings `"p/q"`.
pub fn rational(q: &BigRational) -> Value {
    if q.is_integer() {
        Value::Number(number(q.numer()))
    } else {
        Value::String(q.to_string())
    }
}

pub fn rational_vector(v: &RationalVector) -> Value {
    Value::Array(v.coords().iter().map(rational).collect())
}

pub fn lattice_vector(v: &LatticeVector) -> Value {
    Value::Array(
        v.coords()
            .iter()
            .map(|x| Value::Number(number(x)))
            .collect(),
    )
}

pub fn group(g: &FGAbelianGroup) -> Value {
    json!({
        "rank": g.rank,
        "invariant_factors": g.invariant_factors.iter().map(number).collect::<Vec<_>>(),
        "display": g.to_string(),
    })
}

pub fn cartier_data(d: &CartierData) -> Value {
    Value::Array(d.characters.iter().map(rational_vector).collect())
}
