//! Experiment runner: every subcommand is a pure function of its options to
//! a report, rendered as JSON (sorted keys) or CSV.

mod commands;

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

pub use commands::{grover_scan, sampling_tests, verify_reduction};

use permsearch::measurement::Rate;

/// Version of the report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "permsearch",
    version,
    about = "Reduction and query-count experiments for permutation inversion and unique search"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run the search-from-inversion reduction on every fixture solver and
    /// check its error bounds.
    VerifyReduction,
    /// Grover success probabilities and query counts over a list of sizes.
    GroverScan,
    /// Check that the hidden functions h are uniform on Q, exactly and by
    /// a chi-square test.
    SamplingTests,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyReduction => "verify-reduction",
            Command::GroverScan => "grover-scan",
            Command::SamplingTests => "sampling-tests",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// Problem size(s), comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Monte Carlo trials or sampled draws.
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl Default for Options {
    fn default() -> Self {
        Self { n: Vec::new(), seed: 0, mode: Mode::Exact, trials: None, out: None, format: Format::Json }
    }
}

/// Invalid arguments, as opposed to a failed run.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub(crate) fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// A finished report: one flat row per fixture or size, plus whether every
/// check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: Command,
    pub config: Map<String, Value>,
    pub rows: Vec<Map<String, Value>>,
    pub extra: Map<String, Value>,
    pub pass: bool,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut top = Map::new();
        top.insert("schema_version".into(), json!(SCHEMA_VERSION));
        top.insert("command".into(), json!(self.command.name()));
        top.insert("config".into(), Value::Object(self.config.clone()));
        top.insert("rows".into(), Value::Array(self.rows.iter().cloned().map(Value::Object).collect()));
        top.insert("pass".into(), json!(self.pass));
        for (k, v) in &self.extra {
            top.insert(k.clone(), v.clone());
        }
        Value::Object(top)
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.to_json())? + "\n"),
            Format::Csv => self.to_csv(),
        }
    }

    fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header: Vec<String> = match self.rows.first() {
            Some(row) => row.keys().cloned().collect(),
            None => return Ok(String::new()),
        };
        w.write_record(&header)?;
        for row in &self.rows {
            w.write_record(header.iter().map(|k| row.get(k).map(flat).unwrap_or_default()))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

/// CSV cell for a JSON value; value objects collapse to their rational
/// form when exact.
fn flat(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Object(o) => match (o.get("rational"), o.get("value")) {
            (Some(Value::String(r)), _) => r.clone(),
            (_, Some(x)) => flat(x),
            _ => v.to_string(),
        },
        other => other.to_string(),
    }
}

/// `{mode, value, rational}` for a measured quantity.
pub fn rate_value(rate: &Rate, mode: Mode) -> Value {
    let tag = match mode {
        Mode::Exact => "exact",
        Mode::Mc => "mc",
    };
    json!({
        "mode": tag,
        "value": rate.value(),
        "rational": rate.exact().map(|p| p.to_string()),
    })
}

/// Runs one subcommand.
pub fn execute(command: Command, options: &Options) -> anyhow::Result<Report> {
    match command {
        Command::VerifyReduction => verify_reduction(options),
        Command::GroverScan => grover_scan(options),
        Command::SamplingTests => sampling_tests(options),
    }
}
