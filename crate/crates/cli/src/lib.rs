//! Command-line front end: point reports, zenith sweeps and crossover reports.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qkdlink::config::{parse_override, resolve_scenario, NamedScenario, Scenario};
use qkdlink::evaluate::evaluate_point;
use qkdlink::protocols::Protocol;
use qkdlink::sweep::{
    find_crossover, gap_profile, parse_theta_range, run_sweep, Metric, SweepSpec, SweepTable,
    DEFAULT_QBER_GAP,
};

pub mod numfmt;
pub mod report;
pub mod table;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] qkdlink::Error),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("table: {0}")]
    Table(String),
}

impl CliError {
    /// 2 for invalid input, 3 for I/O failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Model(qkdlink::Error::Io { .. }) => 3,
            _ => 2,
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qkdlink", version, about = "Satellite-ground QKD link budget simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full link budget, noise, QBER and keyrate at one zenith angle.
    Point(PointArgs),
    /// Results for every protocol over a zenith-angle range.
    Sweep(SweepArgs),
    /// Angle at which two protocols trade places.
    Crossover(CrossoverArgs),
    /// Print the fully resolved scenario document.
    Show(ShowArgs),
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Override a parameter, e.g. `mu=0.2` or `optics.receiver_diameter_m=0.5`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PointFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Named scenario or scenario file.
    #[arg(long, default_value = "downlink-night")]
    pub scenario: String,
    /// Zenith angle in degrees.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[command(flatten)]
    pub overrides: ScenarioArgs,
    #[arg(long, value_enum, default_value_t = PointFormat::Text)]
    pub format: PointFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Scenarios to sweep (repeatable); all named defaults when omitted.
    #[arg(long)]
    pub scenario: Vec<String>,
    /// Zenith range `start:end:step` in degrees.
    #[arg(long, default_value = "0:85:1", allow_hyphen_values = true)]
    pub theta_range: String,
    #[command(flatten)]
    pub overrides: ScenarioArgs,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CrossoverArgs {
    /// Scenario to sweep, or to select from `--input`.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long, default_value = "0:85:1", allow_hyphen_values = true)]
    pub theta_range: String,
    #[command(flatten)]
    pub overrides: ScenarioArgs,
    /// Protocol pair, e.g. `bb84,b92`.
    #[arg(long, default_value = "bb84,b92")]
    pub pair: String,
    #[arg(long, default_value = "keyrate")]
    pub metric: String,
    /// Relative QBER gap counted as separation.
    #[arg(long, default_value_t = DEFAULT_QBER_GAP)]
    pub threshold: f64,
    /// Read a previously written sweep table (CSV or JSON) instead of sweeping.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PointFormat::Text)]
    pub format: PointFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ShowArgs {
    #[arg(long, default_value = "downlink-night")]
    pub scenario: String,
    #[command(flatten)]
    pub overrides: ScenarioArgs,
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Point(a) => cmd_point(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Crossover(a) => cmd_crossover(a, stdout),
        Command::Show(a) => {
            let s = load(&a.scenario, &a.overrides)?;
            emit(None, stdout, |w| writeln!(w, "{}", s.to_json_string()))
        }
    }
}

/// Resolves a scenario reference and applies `--set` overrides.
pub fn load(reference: &str, overrides: &ScenarioArgs) -> Result<Scenario, CliError> {
    let base = resolve_scenario(reference)?;
    let pairs = overrides.set.iter().map(|s| parse_override(s)).collect::<Result<Vec<_>, _>>()?;
    Ok(if pairs.is_empty() { base } else { base.with_overrides(&pairs)? })
}

fn emit<F>(path: Option<&Path>, stdout: &mut dyn Write, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w).map_err(|e| CliError::io(p, e))?;
            w.flush().map_err(|e| CliError::io(p, e))
        }
        None => body(stdout).map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn cmd_point(a: &PointArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let s = load(&a.scenario, &a.overrides)?;
    let p = evaluate_point(&s, a.theta)?;
    emit(a.out.as_deref(), stdout, |w| match a.format {
        PointFormat::Text => report::write_point(w, &s, &p),
        PointFormat::Json => {
            serde_json::to_writer_pretty(&mut *w, &p)?;
            writeln!(w)
        }
    })
}

fn sweep_spec(range: &str, scenarios: &[Scenario]) -> Result<SweepSpec, CliError> {
    let (start, end, step) = parse_theta_range(range)?;
    let spec = SweepSpec {
        theta_start_deg: start,
        theta_end_deg: end,
        theta_step_deg: step,
        scenarios: scenarios.iter().map(|s| s.name.clone()).collect(),
        protocols: Protocol::ALL.to_vec(),
    };
    spec.validate()?;
    Ok(spec)
}

fn write_table(table: &SweepTable, format: TableFormat, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut buf = Vec::new();
    match format {
        TableFormat::Csv => table::write_csv(table, &mut buf)?,
        TableFormat::Json => table::write_json(table, &mut buf)?,
    }
    emit(out, stdout, |w| w.write_all(&buf))
}

fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let names: Vec<String> = if a.scenario.is_empty() {
        NamedScenario::ALL.iter().map(|n| n.as_str().to_string()).collect()
    } else {
        a.scenario.clone()
    };
    let catalog = names.iter().map(|n| load(n, &a.overrides)).collect::<Result<Vec<_>, _>>()?;
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = catalog.iter().find(|s| !seen.insert(s.name.as_str())) {
        return Err(qkdlink::Error::validation("scenario", format!("`{}` listed twice", dup.name)).into());
    }
    let spec = sweep_spec(&a.theta_range, &catalog)?;
    let table = run_sweep(&spec, &catalog)?;
    for row in table.errors() {
        eprintln!("warning: {} at {} deg: {}", row.scenario, row.theta_deg, row.error.as_deref().unwrap_or(""));
    }
    write_table(&table, a.format, a.out.as_deref(), stdout)
}

fn parse_pair(text: &str) -> Result<(Protocol, Protocol), CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(qkdlink::Error::validation("pair", format!("expected two protocols, got `{text}`")).into());
    }
    Ok((parts[0].parse()?, parts[1].parse()?))
}

fn read_input(path: &Path) -> Result<SweepTable, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        table::read_json(file)
    } else {
        table::read_csv(file)
    }
}

fn cmd_crossover(a: &CrossoverArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let pair = parse_pair(&a.pair)?;
    let metric: Metric = a.metric.parse()?;
    if !(a.threshold > 0.0 && a.threshold < 1.0) {
        return Err(qkdlink::Error::validation("threshold", "must lie in (0, 1)").into());
    }
    let table = match &a.input {
        Some(path) => {
            let t = read_input(path)?;
            match &a.scenario {
                Some(name) => t.for_scenario(name),
                None => t,
            }
        }
        None => {
            let s = load(a.scenario.as_deref().unwrap_or("downlink-night"), &a.overrides)?;
            let spec = sweep_spec(&a.theta_range, std::slice::from_ref(&s))?;
            run_sweep(&spec, &[s])?
        }
    };
    let angle = find_crossover(&table, metric, pair, a.threshold)?;
    let profile = gap_profile(&table, metric, pair)?;
    let scenario = table.rows.first().map(|r| r.scenario.clone()).unwrap_or_default();
    emit(a.out.as_deref(), stdout, |w| match a.format {
        PointFormat::Text => report::write_crossover(w, &scenario, metric, pair, a.threshold, angle, &profile),
        PointFormat::Json => {
            let doc = serde_json::json!({
                "scenario": scenario,
                "metric": metric,
                "pair": [pair.0, pair.1],
                "threshold": a.threshold,
                "crossover_deg": angle,
                "profile": profile,
            });
            serde_json::to_writer_pretty(&mut *w, &doc)?;
            writeln!(w)
        }
    })
}
