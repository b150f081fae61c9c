//! Verification reports: named checks with their measured and reference
//! values, serialized as JSON, CSV or an aligned text table.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Where the reference value of a check comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Provenance {
    /// a value or identity stated in the source mathematics
    Paper,
    /// an independent numerical oracle
    Derived,
    /// an elementary consequence
    Trivial,
}

/// How `measured` is compared with `reference` and `tolerance`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// `|measured − reference| ≤ tolerance`
    Absolute,
    /// `|measured − reference| ≤ tolerance·|reference|`
    Relative,
    /// `measured ≤ tolerance` (a defect or error; `reference` is its ideal)
    Below,
    /// `measured ≥ tolerance`
    Above,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    /// What is held against `tolerance`: the distance for `absolute`, the
    /// distance over `|reference|` for `relative`, `measured` otherwise.
    /// Complex checks use the complex distance.
    pub error: f64,
    pub pass: bool,
    pub grid_params: BTreeMap<String, f64>,
    pub runtime_ms: u64,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

fn decide(error: f64, tolerance: f64, how: Comparison) -> bool {
    // NaN never passes
    if error.is_nan() {
        return false;
    }
    match how {
        Comparison::Above => error >= tolerance,
        _ => error <= tolerance,
    }
}

fn error_of(gap: f64, scale: f64, measured: f64, how: Comparison) -> f64 {
    match how {
        Comparison::Absolute => gap,
        Comparison::Relative => gap / scale,
        Comparison::Below | Comparison::Above => measured,
    }
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        measured: f64,
        reference: f64,
        tolerance: f64,
        comparison: Comparison,
        provenance: Provenance,
    ) -> Self {
        let error = error_of((measured - reference).abs(), reference.abs(), measured, comparison);
        Self {
            name: name.into(),
            measured,
            reference,
            tolerance,
            comparison,
            error,
            pass: decide(error, tolerance, comparison),
            grid_params: BTreeMap::new(),
            runtime_ms: 0,
            provenance,
            note: None,
        }
    }

    /// A defect that should vanish: `measured ≤ tolerance`, reference 0.
    pub fn defect(name: impl Into<String>, defect: f64, tolerance: f64, provenance: Provenance) -> Self {
        Self::new(name, defect, 0.0, tolerance, Comparison::Below, provenance)
    }

    /// Complex value against a complex reference. `measured` and
    /// `reference` hold the real parts; the note keeps both numbers when
    /// either has an imaginary part.
    pub fn complex(
        name: impl Into<String>,
        measured: C64,
        reference: C64,
        tolerance: f64,
        relative: bool,
        provenance: Provenance,
    ) -> Self {
        let comparison = if relative { Comparison::Relative } else { Comparison::Absolute };
        let mut c = Self::new(name, measured.re, reference.re, tolerance, comparison, provenance);
        c.error = error_of((measured - reference).norm(), reference.norm(), 0.0, comparison);
        c.pass = decide(c.error, tolerance, comparison);
        if measured.im != 0.0 || reference.im != 0.0 {
            c.note = Some(format!("measured {measured:e}, reference {reference:e}"));
        }
        c
    }

    pub fn grid(mut self, key: &str, value: f64) -> Self {
        self.grid_params.insert(key.to_string(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Re-decide with a different tolerance.
    pub fn retolerate(&mut self, tolerance: f64) {
        self.tolerance = tolerance;
        self.pass = decide(self.error, tolerance, self.comparison);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<u64>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::Parameter(format!("unknown format `{s}` (json, csv, text)"))),
        }
    }
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self { suite: suite.into(), timestamp: None, checks: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,name,measured,reference,tolerance,comparison,error,pass,provenance,runtime_ms,grid_params\n");
        for c in &self.checks {
            let grid: Vec<String> = c.grid_params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let fields = [
                self.suite.clone(),
                c.name.clone(),
                format!("{:e}", c.measured),
                format!("{:e}", c.reference),
                format!("{:e}", c.tolerance),
                serde_plain(&c.comparison),
                format!("{:e}", c.error),
                c.pass.to_string(),
                serde_plain(&c.provenance),
                c.runtime_ms.to_string(),
                grid.join(";"),
            ];
            let row: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(4).max(4);
        let mut out = String::new();
        let _ = writeln!(out, "suite: {}", self.suite);
        let _ = writeln!(
            out,
            "{:<width$}  {:>13}  {:>13}  {:>10}  {:<8}  {:<6}  provenance",
            "name", "measured", "reference", "tolerance", "compare", "result"
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<width$}  {:>13.6e}  {:>13.6e}  {:>10.2e}  {:<8}  {:<6}  {}",
                c.name,
                c.measured,
                c.reference,
                c.tolerance,
                serde_plain(&c.comparison),
                if c.pass { "PASS" } else { "FAIL" },
                serde_plain(&c.provenance),
            );
        }
        let failed = self.failures().len();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Json => self.to_json()?,
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        })
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> Result<()> {
        out.write_all(self.render(format)?.as_bytes())?;
        Ok(())
    }

    pub fn save(&self, format: Format, path: impl AsRef<Path>) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        self.write(format, &mut file)
    }
}

fn serde_plain<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
