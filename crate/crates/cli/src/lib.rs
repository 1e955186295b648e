//! Batch experiment driver: a versioned JSON config selects one experiment,
//! which writes `report.json` and its CSV data into the output directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub mod config;
mod experiments;

pub use config::{ExperimentConfig, ExperimentKind, SCHEMA_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("assertions failed: {}", .0.join(", "))]
    AssertionFailed(Vec<String>),
    #[error("unknown report kind {0:?}")]
    UnknownReportKind(String),
    #[error("report has no {0} data")]
    MissingPlotData(String),
    #[error(transparent)]
    Core(#[from] hol_core::HolError),
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 for failed assertions, 2 for anything that stops the run.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::AssertionFailed(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

impl Assertion {
    /// Passes when `value <= threshold`.
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            passed: value <= threshold,
            value,
            threshold,
        }
    }

    /// Passes when `value >= threshold`.
    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            passed: value >= threshold,
            value,
            threshold,
        }
    }

    pub fn holds(name: &str, ok: bool) -> Self {
        Self {
            name: name.into(),
            passed: ok,
            value: if ok { 1.0 } else { 0.0 },
            threshold: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub experiment: String,
    pub config: ExperimentConfig,
    pub passed: bool,
    pub assertions: Vec<Assertion>,
    pub results: serde_json::Value,
    pub files: Vec<String>,
    pub plot_data: BTreeMap<String, PlotTable>,
}

impl Report {
    pub fn failed_assertions(&self) -> Vec<String> {
        self.assertions
            .iter()
            .filter(|a| !a.passed)
            .map(|a| a.name.clone())
            .collect()
    }
}

/// Everything an experiment produces, before it is written.
pub(crate) struct Outcome {
    pub params: serde_json::Value,
    pub results: serde_json::Value,
    pub assertions: Vec<Assertion>,
    pub files: Vec<(String, String)>,
    pub plot_data: BTreeMap<String, PlotTable>,
}

pub const PLOT_KINDS: [&str; 3] = ["orbit-convergence", "boundary-modulus-tiling", "blaschke-partials"];

/// Flat CSV for one plot kind; the first line is a `#` comment naming the columns.
pub fn emit_plot_data(report: &Report, kind: &str) -> Result<String, CliError> {
    if !PLOT_KINDS.contains(&kind) {
        return Err(CliError::UnknownReportKind(kind.into()));
    }
    let table = report
        .plot_data
        .get(kind)
        .ok_or_else(|| CliError::MissingPlotData(kind.into()))?;
    let mut s = String::new();
    let _ = writeln!(s, "# {kind}: columns {}", table.columns.join(", "));
    let _ = writeln!(s, "{}", table.columns.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    Ok(s)
}

/// Runs the experiment without touching the filesystem.
pub fn evaluate(config: &ExperimentConfig) -> Result<(Report, Vec<(String, String)>), CliError> {
    if config.schema_version != SCHEMA_VERSION {
        return Err(CliError::ConfigInvalid(format!(
            "schema_version {} is not supported",
            config.schema_version
        )));
    }
    log::info!("running {}", config.experiment.name());
    let out = experiments::run(config)?;
    let mut resolved = config.clone();
    resolved.params = out.params;
    let mut files = out.files;
    for kind in out.plot_data.keys() {
        files.push((format!("plot_{kind}.csv"), String::new()));
    }
    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        experiment: config.experiment.name().into(),
        config: resolved,
        passed: out.assertions.iter().all(|a| a.passed),
        assertions: out.assertions,
        results: out.results,
        files: vec![],
        plot_data: out.plot_data,
    };
    for (name, body) in files.iter_mut() {
        if let Some(kind) = name.strip_prefix("plot_").and_then(|n| n.strip_suffix(".csv")) {
            *body = emit_plot_data(&report, kind)?;
        }
    }
    report.files = files.iter().map(|(n, _)| n.clone()).collect();
    report.files.push("report.json".into());
    Ok((report, files))
}

/// Writes `report.json` and the data files; assertion failures are returned
/// after the report is written.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<Report, CliError> {
    let (report, files) = evaluate(config)?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::Io(out_dir.into(), e))?;
    for (name, body) in &files {
        let p = out_dir.join(name);
        std::fs::write(&p, body).map_err(|e| CliError::Io(p.clone(), e))?;
    }
    let p = out_dir.join("report.json");
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    std::fs::write(&p, json).map_err(|e| CliError::Io(p.clone(), e))?;
    for a in &report.assertions {
        log::info!("{}: {} (value {:e}, threshold {:e})", a.name, if a.passed { "pass" } else { "FAIL" }, a.value, a.threshold);
    }
    if report.passed {
        Ok(report)
    } else {
        Err(CliError::AssertionFailed(report.failed_assertions()))
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let s = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.into(), e))?;
    ExperimentConfig::from_json(&s)
}

pub fn load_report(path: &Path) -> Result<Report, CliError> {
    let s = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.into(), e))?;
    Ok(serde_json::from_str(&s)?)
}
