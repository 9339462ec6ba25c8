//! Machine-readable output: JSON with stable field order, and CSV with
//! RFC 4180 quoting.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cqae::CQAEResult;
use crate::error::{Error, Result};
use crate::mci::MCIResult;
use crate::mlqae::{MLEResult, ShotRecord};
use crate::statevec::MeasurementRecord;
use crate::transpile::TranspileSummary;

/// Bumped on any breaking change to the report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// One checked quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproEntry {
    pub criterion: u32,
    pub name: String,
    pub statistical: bool,
    /// Published value, when there is one.
    pub paper_value: Option<f64>,
    pub computed_value: f64,
    pub relative_error: Option<f64>,
    /// Absolute tolerance on `computed_value`, or 0 for boolean checks.
    pub tolerance: f64,
    pub pass: bool,
    /// Wall-clock time of the enclosing criterion. Excluded from determinism.
    pub runtime_ms: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproReport {
    pub schema_version: u32,
    pub seed: u64,
    pub recipe_version: String,
    pub skipped_statistical: bool,
    pub entries: Vec<ReproEntry>,
    pub all_passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// Row view of a result for CSV output.
pub trait Tabular {
    fn header(&self) -> Vec<String>;
    fn rows(&self) -> Vec<Vec<String>>;
}

fn strings<const N: usize>(items: [&str; N]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl Tabular for ReproReport {
    fn header(&self) -> Vec<String> {
        strings([
            "criterion",
            "name",
            "statistical",
            "paper_value",
            "computed_value",
            "relative_error",
            "tolerance",
            "pass",
            "runtime_ms",
            "detail",
        ])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.entries
            .iter()
            .map(|e| {
                vec![
                    e.criterion.to_string(),
                    e.name.clone(),
                    e.statistical.to_string(),
                    opt(e.paper_value),
                    e.computed_value.to_string(),
                    opt(e.relative_error),
                    e.tolerance.to_string(),
                    e.pass.to_string(),
                    format!("{:.3}", e.runtime_ms),
                    e.detail.clone(),
                ]
            })
            .collect()
    }
}

impl Tabular for MLEResult {
    fn header(&self) -> Vec<String> {
        strings([
            "theta_hat",
            "amplitude_hat",
            "grid_points",
            "log_likelihood_at_max",
        ])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.theta_hat.to_string(),
            self.amplitude_hat.to_string(),
            self.grid_points.to_string(),
            self.log_likelihood_at_max.to_string(),
        ]]
    }
}

impl Tabular for MCIResult {
    fn header(&self) -> Vec<String> {
        strings([
            "samples",
            "hits",
            "estimate",
            "box_volume",
            "order_violations",
        ])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.samples.to_string(),
            self.hits.to_string(),
            self.estimate.to_string(),
            self.box_volume.to_string(),
            self.order_violations.to_string(),
        ]]
    }
}

/// One row per bitstring; `count` in sampled mode, `probability` in exact mode.
impl Tabular for CQAEResult {
    fn header(&self) -> Vec<String> {
        match self.distribution {
            Some(_) => strings(["bitstring", "probability", "theta"]),
            None => strings(["bitstring", "count", "theta"]),
        }
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let theta = |k: &str| {
            let y = u64::from_str_radix(k, 2).expect("bitstring key");
            crate::cqae::readout_theta(y, self.ancillae).to_string()
        };
        match &self.distribution {
            Some(d) => d
                .iter()
                .map(|(k, p)| vec![k.clone(), p.to_string(), theta(k)])
                .collect(),
            None => self
                .histogram
                .iter()
                .map(|(k, c)| vec![k.clone(), c.to_string(), theta(k)])
                .collect(),
        }
    }
}

impl Tabular for MeasurementRecord {
    fn header(&self) -> Vec<String> {
        strings(["bitstring", "count"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.counts
            .iter()
            .map(|(k, c)| vec![k.clone(), c.to_string()])
            .collect()
    }
}

impl Tabular for Vec<ShotRecord> {
    fn header(&self) -> Vec<String> {
        strings(["power", "shots", "hits"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.iter()
            .map(|r| vec![r.power.to_string(), r.shots.to_string(), r.hits.to_string()])
            .collect()
    }
}

/// Gate counts as rows, preceded by the scalar fields.
impl Tabular for TranspileSummary {
    fn header(&self) -> Vec<String> {
        strings(["key", "value"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let join = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut rows = vec![
            vec!["coupling_map".into(), self.coupling_map.clone()],
            vec!["depth".into(), self.depth.to_string()],
            vec!["swaps".into(), self.swaps.to_string()],
            vec!["initial_layout".into(), join(&self.initial_layout)],
            vec!["final_layout".into(), join(&self.final_layout)],
        ];
        rows.extend(
            self.gate_counts
                .iter()
                .map(|(g, c)| vec![format!("count.{g}"), c.to_string()]),
        );
        rows
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn to_csv<T: Tabular + ?Sized>(value: &T) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(value.header())?;
    for row in value.rows() {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render<T: Serialize + Tabular + ?Sized>(value: &T, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(value),
        Format::Csv => to_csv(value),
    }
}

/// Writes `value` to `path`, or to stdout when `path` is `None`.
pub fn emit<T: Serialize + Tabular + ?Sized>(
    value: &T,
    format: Format,
    path: Option<&Path>,
) -> Result<()> {
    let text = render(value, format)?;
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, text)?;
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
