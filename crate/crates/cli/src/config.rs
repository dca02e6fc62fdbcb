use std::path::{Path, PathBuf};

use afmerge_core::{ConflictMatrix, DependencyRules};
use serde::Deserialize;

use crate::error::ServiceError;

pub const DEFAULT_PORT: u16 = 8080;
pub const DEFAULT_STABLE_CAP: usize = 10_000;

/// Settings read from a TOML key-value file, e.g.
///
/// ```toml
/// port = 8080
/// stable_cap = 10000
/// conflict_matrix = "matrix.json"
/// dependency_rules.consume_before_delete = false
/// ```
#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub port: u16,
    pub stable_cap: usize,
    pub dependency_rules: DependencyRules,
    pub conflict_matrix: Option<PathBuf>,
    pub ui_dir: Option<PathBuf>,
    pub snapshot_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            port: DEFAULT_PORT,
            stable_cap: DEFAULT_STABLE_CAP,
            dependency_rules: DependencyRules::default(),
            conflict_matrix: None,
            ui_dir: None,
            snapshot_dir: None,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, ServiceError> {
        toml::from_str(text).map_err(|e| ServiceError::Invalid(format!("config: {e}")))
    }

    /// Reads the file; relative paths inside it resolve against its directory.
    pub fn load(path: &Path) -> Result<Self, ServiceError> {
        let text = crate::read_file(path)?;
        let mut config = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [
            &mut config.conflict_matrix,
            &mut config.ui_dir,
            &mut config.snapshot_dir,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(config)
    }

    pub fn settings(&self) -> Result<Settings, ServiceError> {
        let matrix = match &self.conflict_matrix {
            Some(path) => ConflictMatrix::from_json(&crate::read_file(path)?)
                .map_err(|e| ServiceError::Invalid(format!("{}: {e}", path.display())))?,
            None => ConflictMatrix::default(),
        };
        Ok(Settings {
            matrix,
            rules: self.dependency_rules,
            stable_cap: self.stable_cap,
        })
    }
}

/// Everything the analysis pipeline needs besides its inputs.
#[derive(Clone, Debug)]
pub struct Settings {
    pub matrix: ConflictMatrix,
    pub rules: DependencyRules,
    pub stable_cap: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            matrix: ConflictMatrix::default(),
            rules: DependencyRules::default(),
            stable_cap: DEFAULT_STABLE_CAP,
        }
    }
}
