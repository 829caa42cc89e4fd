//! JSON run configuration shared by `pc`, `ell`, `sweep` and `stats`.
//!
//! Every field is optional; command-line flags take precedence.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "template": "clique4",
//!   "n_list": [64, 128, 256, 512],
//!   "trials": 400,
//!   "levels": 15,
//!   "mode": "coupled",
//!   "k": 12,
//!   "alpha": 0.5,
//!   "alphas": [0.25, 0.5, 1.0],
//!   "samples": 1000,
//!   "seed": 1,
//!   "output_dir": "out"
//! }
//! ```

use std::path::{Path, PathBuf};

use hperc::threshold::SamplingMode;
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::output::SCHEMA_VERSION;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: Option<u32>,
    pub template: Option<String>,
    pub n_list: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub levels: Option<usize>,
    pub mode: Option<SamplingMode>,
    pub k: Option<usize>,
    pub alpha: Option<f64>,
    pub alphas: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
}

pub fn parse_config(text: &str, origin: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Parse(format!("{origin}: at `{path}`: {}", e.inner()))
    })?;
    if let Some(v) = config.schema_version {
        if v != SCHEMA_VERSION {
            return Err(CliError::Parse(format!("{origin}: at `schema_version`: unsupported version {v}, expected {SCHEMA_VERSION}")));
        }
    }
    Ok(config)
}

pub fn load(path: Option<&Path>) -> Result<RunConfig> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))?;
            parse_config(&text, &p.display().to_string())
        }
    }
}
