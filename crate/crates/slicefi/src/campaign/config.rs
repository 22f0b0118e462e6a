//! Campaign configuration: a `key = value` file, overridable from the
//! command line. Relative paths resolve against the config file's
//! directory.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::sim::FaultSemantics;
use crate::slicer::{semantics_from_str, PruneMode, TargetSpec};

use super::kv;

#[derive(Debug, Clone, Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("config: {0}")]
    Format(String),
    #[error("config key `{key}`: {message}")]
    BadValue { key: String, message: String },
    #[error("config is missing required key `{0}`")]
    Missing(String),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("unknown observation signal `{0}`")]
    UnknownObservation(String),
}

/// Everything a campaign needs. `observation` holds signal names,
/// resolved against the design after parsing.
#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub design: PathBuf,
    pub stimulus: PathBuf,
    pub observation: Vec<String>,
    pub target: TargetSpec,
    pub mode: PruneMode,
    pub semantics: FaultSemantics,
    pub workers: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl CampaignConfig {
    pub fn new(design: impl Into<PathBuf>, stimulus: impl Into<PathBuf>) -> Self {
        Self {
            design: design.into(),
            stimulus: stimulus.into(),
            observation: Vec::new(),
            target: TargetSpec::all(),
            mode: PruneMode::DynamicPrune,
            semantics: FaultSemantics::Transient,
            workers: 1,
            seed: 0,
            out: None,
        }
    }

    /// Load a config file; relative `design`/`stimulus`/`out` paths are
    /// anchored at the file's directory.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_kv_str(&text, base)
    }

    pub fn from_kv_str(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let pairs = kv::parse(text).map_err(|e| ConfigError::Format(e.to_string()))?;
        let mut design = None;
        let mut stimulus = None;
        let mut cfg = CampaignConfig::new("", "");
        for (key, value) in pairs {
            match key.as_str() {
                "design" => design = Some(anchor(base, &value)),
                "stimulus" => stimulus = Some(anchor(base, &value)),
                "observation" => {
                    cfg.observation = value
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect()
                }
                "target" => cfg.target = parse_key(&key, &value)?,
                "mode" => cfg.mode = parse_key(&key, &value)?,
                "semantics" => {
                    cfg.semantics = semantics_from_str(&value)
                        .map_err(|message| ConfigError::BadValue { key, message })?
                }
                "workers" => {
                    cfg.workers = parse_key(&key, &value)?;
                    if cfg.workers == 0 {
                        return Err(ConfigError::BadValue {
                            key: "workers".into(),
                            message: "must be at least 1".into(),
                        });
                    }
                }
                "seed" => cfg.seed = parse_key(&key, &value)?,
                "out" => cfg.out = Some(anchor(base, &value)),
                other => return Err(ConfigError::UnknownKey(other.to_string())),
            }
        }
        cfg.design = design.ok_or_else(|| ConfigError::Missing("design".into()))?;
        cfg.stimulus = stimulus.ok_or_else(|| ConfigError::Missing("stimulus".into()))?;
        Ok(cfg)
    }

    pub fn to_kv_string(&self) -> String {
        let mut pairs = vec![
            ("design".to_string(), self.design.display().to_string()),
            ("stimulus".to_string(), self.stimulus.display().to_string()),
            ("observation".to_string(), self.observation.join(",")),
            ("target".to_string(), self.target.to_string()),
            ("mode".to_string(), self.mode.to_string()),
            (
                "semantics".to_string(),
                crate::slicer::semantics_name(self.semantics).to_string(),
            ),
            ("workers".to_string(), self.workers.to_string()),
            ("seed".to_string(), self.seed.to_string()),
        ];
        if let Some(out) = &self.out {
            pairs.push(("out".to_string(), out.display().to_string()));
        }
        kv::format(&pairs)
    }
}

fn anchor(base: &Path, value: &str) -> PathBuf {
    let p = PathBuf::from(value);
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

fn parse_key<T>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::BadValue {
        key: key.to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let text = "\
# campaign
design = designs/chip.mrtl
stimulus = designs/chip.stim.csv
observation = tar_f, dbg
target = f*,mem
mode = dynamic
semantics = persistent
workers = 4
seed = 7
out = results
";
        let cfg = CampaignConfig::from_kv_str(text, Path::new("/base")).unwrap();
        assert_eq!(cfg.design, PathBuf::from("/base/designs/chip.mrtl"));
        assert_eq!(cfg.observation, vec!["tar_f", "dbg"]);
        assert_eq!(cfg.mode, PruneMode::DynamicPrune);
        assert_eq!(cfg.semantics, FaultSemantics::Persistent);
        assert_eq!(cfg.workers, 4);
        assert_eq!(cfg.out, Some(PathBuf::from("/base/results")));
    }

    #[test]
    fn missing_design_is_an_error() {
        let err =
            CampaignConfig::from_kv_str("stimulus = s.csv\n", Path::new(".")).unwrap_err();
        assert!(matches!(err, ConfigError::Missing(k) if k == "design"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = CampaignConfig::from_kv_str(
            "design = d\nstimulus = s\nbogus = 1\n",
            Path::new("."),
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey(k) if k == "bogus"));
    }

    #[test]
    fn kv_round_trip_preserves_fields() {
        let mut cfg = CampaignConfig::new("d.mrtl", "s.csv");
        cfg.observation = vec!["out".into()];
        cfg.workers = 2;
        let back = CampaignConfig::from_kv_str(&cfg.to_kv_string(), Path::new("")).unwrap();
        assert_eq!(back.workers, 2);
        assert_eq!(back.observation, vec!["out"]);
        assert_eq!(back.mode, cfg.mode);
    }
}
