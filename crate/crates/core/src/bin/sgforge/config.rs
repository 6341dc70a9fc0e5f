//! Optional TOML file with the same settings as the command-line flags.
//! Flags given on the command line win over file values.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use spectral_forge::Transformation;

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub sgf: SgfSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub preset: PresetSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SgfSection {
    pub alpha: Option<f64>,
    pub rule: Option<String>,
    pub logistic_k: Option<f64>,
    pub transformation: Option<Transformation>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub strategies: Option<Vec<String>>,
    pub runs: Option<usize>,
    pub graphs: Option<usize>,
    pub alphas: Option<String>,
    pub seed_fraction: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetSection {
    pub name: Option<String>,
    pub nodes: Option<usize>,
    pub communities: Option<usize>,
    pub p_in: Option<f64>,
    pub p_out: Option<f64>,
    pub out_degree: Option<f64>,
    pub mean_degree: Option<f64>,
    pub mean_community_size: Option<f64>,
    pub mixing: Option<f64>,
}

pub fn load(path: &Path) -> Result<CliConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    toml::from_str(&text).map_err(|e| CliError::Config {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
