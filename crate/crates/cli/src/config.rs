//! Optional TOML run configuration. Every key mirrors a command-line flag;
//! flags given on the command line win.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

use crate::Usage;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub equation: Option<EquationList>,
    pub source: Option<String>,
    pub subset: Option<String>,
    pub seed: Option<u64>,
    #[serde(alias = "N", alias = "n")]
    pub samples: Option<usize>,
    pub intervals: Option<usize>,
    pub resamples: Option<usize>,
    pub length_ratio: Option<f64>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub data_dir: Option<PathBuf>,
    pub marginals: Option<String>,
    pub threads: Option<usize>,
}

/// `equation = "hec18"` or `equation = ["hec18", "tamu"]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum EquationList {
    One(String),
    Many(Vec<String>),
}

impl EquationList {
    pub fn into_vec(self) -> Vec<String> {
        match self {
            EquationList::One(s) => vec![s],
            EquationList::Many(v) => v,
        }
    }
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).map_err(|e| Usage(format!("config {}: {e}", path.display())).into())
    }
}
