use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinetic::PathBundle;

/// Accepted range for a measured value; either side may be open.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Bound {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

impl Bound {
    pub fn at_most(max: f64) -> Self {
        Self { min: None, max: Some(max) }
    }

    pub fn at_least(min: f64) -> Self {
        Self { min: Some(min), max: None }
    }

    pub fn within(min: f64, max: f64) -> Self {
        Self { min: Some(min), max: Some(max) }
    }

    pub fn around(center: f64, tol: f64) -> Self {
        Self::within(center - tol, center + tol)
    }

    /// NaN never passes.
    pub fn contains(&self, v: f64) -> bool {
        !v.is_nan() && self.min.is_none_or(|m| v >= m) && self.max.is_none_or(|m| v <= m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: Bound,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowupInfo {
    pub quantity: String,
    pub time: f64,
    pub message: String,
}

/// Contents of `report.json`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub experiment: String,
    pub master_seed: u64,
    pub n_paths: u64,
    pub checks: Vec<Check>,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupInfo>,
    /// Recipe-specific measurements that are not pass/fail checks.
    pub details: serde_json::Map<String, serde_json::Value>,
}

impl Report {
    pub fn new(experiment: &str, master_seed: u64, n_paths: u64) -> Self {
        Self {
            experiment: experiment.to_owned(),
            master_seed,
            n_paths,
            checks: Vec::new(),
            failures: Vec::new(),
            blowup: None,
            details: serde_json::Map::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, value: f64, tolerance: Bound) -> bool {
        let name = name.into();
        let pass = tolerance.contains(value);
        if !pass {
            self.failures.push(Failure { name: name.clone(), value });
        }
        self.checks.push(Check { name, value, tolerance, pass });
        pass
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.details.insert(key.to_owned(), v);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.blowup.is_none()
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("report.json");
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

/// Shortest round-trip decimal; scientific notation for very large or very
/// small magnitudes.
pub fn fmt_float(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file))
}

pub fn write_trajectory(dir: &Path, id: u64, b: &PathBundle) -> Result<PathBuf> {
    let path = dir.join(format!("trajectory_{id}.csv"));
    let mut w = csv_writer(&path)?;
    w.write_record(["t", "S", "X", "Y", "U", "M", "A"])?;
    for i in 0..b.len() {
        let row = [b.t[i], b.s[i], b.x[i], b.y[i], b.u[i], b.m[i], b.a[i]];
        w.write_record(row.iter().map(|&v| fmt_float(v)))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

pub fn write_samples(dir: &Path, name: &str, values: &[f64]) -> Result<PathBuf> {
    let path = dir.join(format!("samples_{name}.csv"));
    let mut w = csv_writer(&path)?;
    w.write_record(["value"])?;
    for &v in values {
        w.write_record([fmt_float(v)])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(path)
}
