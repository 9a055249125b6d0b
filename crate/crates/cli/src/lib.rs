//! Batch runner behind the `relaxwave` binary: scenario files, parameter
//! sweeps, convergence studies and deterministic CSV/JSON output.

// `!(x > 0.0)` style checks also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod study;

use std::path::{Path, PathBuf};

pub use config::{Scenario, ScenarioConfig, Units};
pub use error::CliError;
pub use run::{run_config, RunOutput};
pub use study::{convergence_study, StudyParam, StudyReport};

/// Command-line adjustments applied on top of a scenario file.
#[derive(Debug, Clone, Default)]
pub struct Adjustments {
    pub overrides: Vec<String>,
    pub units: Option<Units>,
    pub v_sweep: Option<String>,
    pub output: Option<PathBuf>,
}

/// Read `source` as a file, or as a scenario name with built-in defaults when
/// no such file exists, then apply `adj`.
pub fn load_config(source: &str, adj: &Adjustments) -> Result<ScenarioConfig, CliError> {
    let path = Path::new(source);
    let mut cfg = match Scenario::from_name(source) {
        Some(s) if !path.exists() => ScenarioConfig::preset(s),
        _ => ScenarioConfig::load(path)?,
    };
    for item in &adj.overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::invalid("--override", format!("expected key=value, got `{item}`")))?;
        cfg = cfg.with_override(key.trim(), value.trim())?;
    }
    if let Some(u) = adj.units {
        cfg.units = u;
    }
    if let Some(range) = &adj.v_sweep {
        if cfg.scenario != Scenario::Modes {
            return Err(CliError::invalid("--v-sweep", "only applies to scenario `modes`"));
        }
        cfg.sweep = Some(config::SweepConfig {
            parameter: "V".into(),
            values: None,
            range: Some(range.clone()),
        });
    }
    if let Some(out) = &adj.output {
        cfg.output.path = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Run `f` on a dedicated pool of `threads` workers, or on the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::invalid("--threads", "must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| CliError::invalid("--threads", e.to_string())),
    }
}

/// Evaluate and write a run. Returns the notes and the files written.
pub fn execute_run(cfg: &ScenarioConfig, threads: Option<usize>) -> Result<(Vec<String>, Vec<PathBuf>), CliError> {
    let out = with_threads(threads, || run_config(cfg))??;
    let meta = output::metadata(cfg, &out.notes);
    let mut tables = vec![(None, &out.table)];
    if let Some(log) = &out.norm_log {
        tables.push((Some("norm"), log));
    }
    let written = output::emit(cfg, &meta, &tables)?;
    Ok((out.notes, written))
}

/// Run a convergence study and write its table. The report is returned even
/// when the order check fails so callers can show it.
pub fn execute_study(
    cfg: &ScenarioConfig,
    param: StudyParam,
    levels: usize,
    threads: Option<usize>,
) -> Result<(StudyReport, Vec<PathBuf>), CliError> {
    let report = with_threads(threads, || convergence_study(cfg, param, levels))??;
    let mut notes = report.notes();
    if let Err(e) = report.check() {
        notes.push(format!("FAILED: {e}"));
    }
    let meta = output::metadata(cfg, &notes);
    let written = output::emit(cfg, &meta, &[(None, &report.table())])?;
    Ok((report, written))
}
