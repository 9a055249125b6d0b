use std::io::Write;
use std::path::{Path, PathBuf};

use relaxwave_core::export::{Format, Table};
use sha2::{Digest, Sha256};

use crate::config::ScenarioConfig;
use crate::error::CliError;

pub const TOOL: &str = concat!("relaxwave ", env!("CARGO_PKG_VERSION"));

/// SHA-256 of the resolved configuration (overrides applied). The output
/// location does not enter the hash, so the same run written to two places
/// carries the same header.
pub fn config_hash(cfg: &ScenarioConfig) -> String {
    let mut canonical = cfg.clone();
    canonical.output.path = None;
    let bytes = serde_json::to_vec(&canonical).expect("configs always serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn metadata(cfg: &ScenarioConfig, notes: &[String]) -> Vec<(String, String)> {
    let mut meta = vec![
        ("tool".to_owned(), TOOL.to_owned()),
        ("scenario".to_owned(), cfg.scenario.name().to_owned()),
        ("units".to_owned(), format!("{:?}", cfg.units).to_lowercase()),
        ("config_sha256".to_owned(), config_hash(cfg)),
    ];
    meta.extend(notes.iter().map(|n| ("note".to_owned(), n.clone())));
    meta
}

/// `out/run.csv` → `out/run.norm.csv`.
pub fn sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{tag}{ext}"))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, text).map_err(io)
}

/// Write `tables` (primary first, then tagged companions) to the configured
/// path, or to standard output. Returns the files written.
pub fn emit(
    cfg: &ScenarioConfig,
    meta: &[(String, String)],
    tables: &[(Option<&str>, &Table)],
) -> Result<Vec<PathBuf>, CliError> {
    let format: Format = cfg.output.resolved_format();
    let mut written = Vec::new();
    match &cfg.output.path {
        Some(path) => {
            for (tag, table) in tables {
                let target = tag.map_or_else(|| path.clone(), |t| sibling(path, t));
                write_file(&target, &table.render(format, meta))?;
                written.push(target);
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            for (_, table) in tables {
                out.write_all(table.render(format, meta).as_bytes())
                    .map_err(|source| CliError::Io {
                        path: "<stdout>".into(),
                        source,
                    })?;
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Scenario;

    #[test]
    fn hash_ignores_output_path() {
        let a = ScenarioConfig::preset(Scenario::Modes);
        let mut b = a.clone();
        b.output.path = Some("x/y.csv".into());
        assert_eq!(config_hash(&a), config_hash(&b));
        b.units = crate::config::Units::Si;
        assert_ne!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);
    }

    #[test]
    fn sibling_names() {
        assert_eq!(
            sibling(Path::new("out/se.csv"), "norm"),
            PathBuf::from("out/se.norm.csv")
        );
        assert_eq!(sibling(Path::new("se"), "norm"), PathBuf::from("se.norm"));
    }
}
