//! Versioned JSON reports and CSV datapoint export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "v1";
pub const CSV_HEADER: &str = "suite,series,t,value";

/// The published JSON schema, for external validators.
pub const SCHEMA_JSON: &str = include_str!("../schema/report.v1.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub series: String,
    pub t: f64,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub exponent: f64,
    pub r2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub suite: String,
    pub params: BTreeMap<String, Value>,
    pub datapoints: Vec<DataPoint>,
    pub fit: Option<Fit>,
    pub pass: bool,
    pub tol: f64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(suite: &str, tol: f64) -> Self {
        VerificationReport {
            schema: SCHEMA_VERSION.to_string(),
            suite: suite.to_string(),
            params: BTreeMap::new(),
            datapoints: Vec::new(),
            fit: None,
            pass: true,
            tol,
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report parameters are plain data");
        self.params.insert(key.to_string(), v);
    }

    pub fn push(&mut self, series: &str, t: f64, value: f64) {
        self.datapoints.push(DataPoint {
            series: series.to_string(),
            t,
            value,
        });
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    /// Marks the report failed with a reason.
    pub fn fail(&mut self, reason: impl Into<String>) {
        self.pass = false;
        self.notes.push(format!("FAIL: {}", reason.into()));
    }

    pub fn series_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = Vec::new();
        for p in &self.datapoints {
            if !names.contains(&p.series.as_str()) {
                names.push(&p.series);
            }
        }
        names
    }

    pub fn series(&self, name: &str) -> Vec<(f64, f64)> {
        self.datapoints
            .iter()
            .filter(|p| p.series == name)
            .map(|p| (p.t, p.value))
            .collect()
    }

    /// Largest value over the final datapoint of every series.
    pub fn final_value(&self) -> Option<f64> {
        self.series_names()
            .iter()
            .filter_map(|s| self.series(s).last().map(|p| p.1))
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
    }

    pub fn to_json(&self) -> Result<String> {
        let value = serde_json::to_value(self)?;
        validate(&value)?;
        let mut s = serde_json::to_string_pretty(&value)?;
        s.push('\n');
        Ok(s)
    }

    pub fn csv_rows(&self, out: &mut String) {
        for p in &self.datapoints {
            writeln!(out, "{},{},{},{:e}", self.suite, p.series, p.t, p.value).expect("writing to a String");
        }
    }
}

pub fn to_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        r.csv_rows(&mut out);
    }
    out
}

/// Parses and validates a v1 report.
pub fn parse_report(text: &str) -> Result<VerificationReport> {
    let value: Value = serde_json::from_str(text)?;
    validate(&value)?;
    Ok(serde_json::from_value(value)?)
}

fn schema_err(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn finite_number(v: &Value, what: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| schema_err(format!("{what} must be a finite number")))
}

/// Structural check against the v1 schema.
pub fn validate(value: &Value) -> Result<()> {
    const KEYS: [&str; 8] = ["schema", "suite", "params", "datapoints", "fit", "pass", "tol", "notes"];
    let obj = value
        .as_object()
        .ok_or_else(|| schema_err("report must be an object"))?;
    for key in obj.keys() {
        if !KEYS.contains(&key.as_str()) {
            return Err(schema_err(format!("unexpected key {key:?}")));
        }
    }
    for key in KEYS {
        if !obj.contains_key(key) {
            return Err(schema_err(format!("missing key {key:?}")));
        }
    }
    if obj["schema"].as_str() != Some(SCHEMA_VERSION) {
        return Err(schema_err("schema must be \"v1\""));
    }
    match obj["suite"].as_str() {
        Some(s) if !s.is_empty() => {}
        _ => return Err(schema_err("suite must be a non-empty string")),
    }
    if !obj["params"].is_object() {
        return Err(schema_err("params must be an object"));
    }
    let points = obj["datapoints"]
        .as_array()
        .ok_or_else(|| schema_err("datapoints must be an array"))?;
    for p in points {
        let p = p.as_object().ok_or_else(|| schema_err("datapoint must be an object"))?;
        if p.len() != 3 || !p.get("series").is_some_and(Value::is_string) {
            return Err(schema_err("datapoint must have exactly series, t, value"));
        }
        finite_number(p.get("t").unwrap_or(&Value::Null), "datapoint t")?;
        finite_number(p.get("value").unwrap_or(&Value::Null), "datapoint value")?;
    }
    match &obj["fit"] {
        Value::Null => {}
        Value::Object(fit) => {
            if fit.len() != 2 {
                return Err(schema_err("fit must have exactly exponent and r2"));
            }
            finite_number(fit.get("exponent").unwrap_or(&Value::Null), "fit exponent")?;
            finite_number(fit.get("r2").unwrap_or(&Value::Null), "fit r2")?;
        }
        _ => return Err(schema_err("fit must be an object or null")),
    }
    if !obj["pass"].is_boolean() {
        return Err(schema_err("pass must be a boolean"));
    }
    finite_number(&obj["tol"], "tol")?;
    let notes = obj["notes"]
        .as_array()
        .ok_or_else(|| schema_err("notes must be an array"))?;
    if !notes.iter().all(Value::is_string) {
        return Err(schema_err("notes must be strings"));
    }
    Ok(())
}
