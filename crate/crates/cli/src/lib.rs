//! Scenario runner behind the `mhsim` binary: loads a config or preset,
//! applies overrides, runs the sweep and writes the CSV artifacts.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use mhsim::scenario::{
    parse_override, parse_with_overrides, write_runs_csv, write_summary_csv, ConfigError,
    ConfigErrors,
};
use mhsim::{presets, summarize, RunResult, ScenarioConfig, Sweep, TraceMode};
use thiserror::Error;

pub const SUMMARY_CSV: &str = "summary.csv";
pub const RUNS_CSV: &str = "runs.csv";
pub const EFFECTIVE_CONFIG: &str = "effective_config.json";
pub const TRACE_DIR: &str = "traces";

/// Prefix selecting a built-in scenario instead of a config file.
pub const PRESET_PREFIX: &str = "preset:";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TraceLevel {
    #[default]
    Off,
    /// Event-trace hash per run, reported in runs.csv.
    Summary,
    /// Hash plus one event log file per run.
    Full,
}

impl TraceLevel {
    fn mode(self) -> TraceMode {
        match self {
            TraceLevel::Off => TraceMode::Off,
            TraceLevel::Summary => TraceMode::Hash,
            TraceLevel::Full => TraceMode::Full,
        }
    }
}

impl FromStr for TraceLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(TraceLevel::Off),
            "summary" => Ok(TraceLevel::Summary),
            "full" => Ok(TraceLevel::Full),
            _ => Err(format!("unknown trace level \"{s}\" (valid: off, summary, full)")),
        }
    }
}

/// One `run` invocation.
#[derive(Debug, Clone)]
pub struct RunRequest {
    /// Config file path, or `preset:NAME`.
    pub config: String,
    /// `key=value` overrides with dotted paths, applied in order.
    pub overrides: Vec<String>,
    pub out_dir: PathBuf,
    /// Replaces the config's seed base.
    pub seed: Option<u64>,
    pub trace: TraceLevel,
    pub jobs: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config:\n{0}")]
    Config(#[from] ConfigErrors),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("unknown preset \"{0}\" (see `mhsim presets list`)")]
    UnknownPreset(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        1
    }
}

/// What a completed `run` produced.
#[derive(Debug)]
pub struct RunOutcome {
    pub runs: usize,
    pub incomplete: usize,
    pub summary_path: PathBuf,
}

impl RunOutcome {
    /// 0 when every run completed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.incomplete == 0 {
            0
        } else {
            2
        }
    }
}

fn load_text(config: &str) -> Result<String, CliError> {
    match config.strip_prefix(PRESET_PREFIX) {
        Some(name) => presets::get(name)
            .map(|c| c.to_json_pretty())
            .ok_or_else(|| CliError::UnknownPreset(name.into())),
        None => fs::read_to_string(config).map_err(|source| CliError::Read { path: config.into(), source }),
    }
}

/// Reads the config, applies the overrides and the seed, and validates.
pub fn resolve_config(req: &RunRequest) -> Result<ScenarioConfig, CliError> {
    let text = load_text(&req.config)?;
    let mut overrides = req
        .overrides
        .iter()
        .map(|s| parse_override(s))
        .collect::<Result<Vec<_>, ConfigError>>()
        .map_err(ConfigErrors::from)?;
    if let Some(seed) = req.seed {
        overrides.push(("seed_base".into(), seed.into()));
    }
    Ok(parse_with_overrides(&text, &overrides)?)
}

fn write_file(path: &Path, write: impl FnOnce(&mut BufWriter<fs::File>) -> io::Result<()>) -> Result<(), CliError> {
    let err = |source| CliError::Write { path: path.to_path_buf(), source };
    let mut w = BufWriter::new(fs::File::create(path).map_err(err)?);
    write(&mut w).map_err(err)?;
    w.flush().map_err(err)
}

fn trace_file_name(r: &RunResult) -> String {
    format!("{:03}-{}-r{:03}.log", r.point, r.strategy.as_str(), r.replication)
}

/// Runs the request. The output directory and the effective config are
/// written before any simulation starts.
pub fn execute(req: &RunRequest) -> Result<RunOutcome, CliError> {
    let cfg = resolve_config(req)?;
    let sweep = Sweep::new(&cfg)?;
    let out = &req.out_dir;
    fs::create_dir_all(out).map_err(|source| CliError::Write { path: out.clone(), source })?;
    write_file(&out.join(EFFECTIVE_CONFIG), |w| writeln!(w, "{}", cfg.to_json_pretty()))?;

    let results = sweep.run(req.jobs.max(1), req.trace.mode());

    let summary_path = out.join(SUMMARY_CSV);
    write_file(&summary_path, |w| Ok(write_summary_csv(&summarize(&results), w)?))?;
    write_file(&out.join(RUNS_CSV), |w| Ok(write_runs_csv(&results, w)?))?;
    if req.trace == TraceLevel::Full {
        let dir = out.join(TRACE_DIR);
        fs::create_dir_all(&dir).map_err(|source| CliError::Write { path: dir.clone(), source })?;
        for r in &results {
            write_file(&dir.join(trace_file_name(r)), |w| {
                r.report.trace.iter().try_for_each(|line| writeln!(w, "{line}"))
            })?;
        }
    }
    Ok(RunOutcome {
        runs: results.len(),
        incomplete: results.iter().filter(|r| !r.report.completed).count(),
        summary_path,
    })
}

/// One line per preset: name and sweep size.
pub fn presets_list() -> Vec<String> {
    presets::names()
        .iter()
        .map(|&name| {
            let cfg = presets::get(name).expect("listed presets exist");
            let jobs = cfg.expand().map_or(0, |j| j.len());
            format!("{name}\t{jobs} jobs x {} replications", cfg.replications)
        })
        .collect()
}

/// The preset as a config file.
pub fn presets_show(name: &str) -> Result<String, CliError> {
    presets::get(name)
        .map(|c| c.to_json_pretty())
        .ok_or_else(|| CliError::UnknownPreset(name.into()))
}
