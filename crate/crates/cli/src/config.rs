//! Run configuration: an optional JSON file with flag overrides on top.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use lfunlab::constants::Constants;
use serde::Deserialize;

use crate::error::CliError;

pub const CACHE_DIR_ENV: &str = "LFUNLAB_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = "lfunlab-cache";
pub const DEFAULT_INSTANCE: &str = "chi4";
pub const DEFAULT_DELTA_CACHE: u64 = 100_000;

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub instance: Option<String>,
    pub delta_cache: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub zeroset: Option<PathBuf>,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Read {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// The resolved configuration shared by every command.
#[derive(Debug)]
pub struct RunConfig {
    pub instance: String,
    pub delta_cache: u64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub zeroset: Option<PathBuf>,
    pub constants: Constants,
    pub overridden: Vec<String>,
    pub cache_dir: PathBuf,
}

/// Flag values that take precedence over the config file.
#[derive(Debug, Default)]
pub struct Overrides {
    pub instance: Option<String>,
    pub delta_cache: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub constants: Vec<(String, f64)>,
}

impl RunConfig {
    pub fn resolve(file: ConfigFile, flags: Overrides, cache_dir: Option<PathBuf>) -> Result<Self, CliError> {
        let mut overrides = file.constants;
        overrides.extend(flags.constants);
        let constants = Constants::default()
            .with_overrides(&overrides)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let threads = flags.threads.or(file.threads);
        if threads == Some(0) {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        Ok(RunConfig {
            instance: flags
                .instance
                .or(file.instance)
                .unwrap_or_else(|| DEFAULT_INSTANCE.to_string()),
            delta_cache: flags
                .delta_cache
                .or(file.delta_cache)
                .unwrap_or(DEFAULT_DELTA_CACHE),
            threads,
            out: flags.out.or(file.out),
            zeroset: file.zeroset,
            constants,
            overridden: overrides.into_keys().collect(),
            cache_dir: cache_dir.unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)),
        })
    }

    /// Where `zeros` stores, and the other commands look for, an instance's zero set.
    pub fn cached_zeroset(&self, instance: &str) -> PathBuf {
        self.cache_dir.join(format!("zeros-{instance}.json"))
    }
}

/// Parses a `NAME=VALUE` constant override.
pub fn parse_constant(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let v: f64 = value
        .parse()
        .map_err(|_| format!("{value:?} is not a number"))?;
    Ok((name.to_string(), v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: ConfigFile =
            serde_json::from_str(r#"{"instance": "delta", "constants": {"c_T": 2.0, "c_B": 3.0}}"#).unwrap();
        let flags = Overrides {
            constants: vec![("c_B".into(), 4.0)],
            ..Default::default()
        };
        let cfg = RunConfig::resolve(file, flags, None).unwrap();
        assert_eq!(cfg.instance, "delta");
        assert_eq!(cfg.constants.get("c_T"), 2.0);
        assert_eq!(cfg.constants.get("c_B"), 4.0);
        assert_eq!(cfg.overridden, vec!["c_B", "c_T"]);
        assert_eq!(cfg.delta_cache, DEFAULT_DELTA_CACHE);
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(serde_json::from_str::<ConfigFile>(r#"{"instnace": "chi4"}"#).is_err());
        let file: ConfigFile = serde_json::from_str(r#"{"constants": {"c_nope": 1.0}}"#).unwrap();
        assert!(RunConfig::resolve(file, Overrides::default(), None).is_err());
        assert_eq!(parse_constant("c_T=0.5").unwrap(), ("c_T".to_string(), 0.5));
        assert!(parse_constant("c_T").is_err());
    }
}
