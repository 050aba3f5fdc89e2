//! Reproducibility bundles: a JSON file naming a subcommand, its
//! parameters, the seed and the output settings.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub subcommand: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, Value>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub format: Option<Format>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed manifest: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("parameter '{0}' must be a scalar or a list of scalars")]
    Nested(String),
}

impl RunManifest {
    pub fn load(path: &PathBuf) -> Result<Self, ManifestError> {
        let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Read {
            path: path.clone(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Command-line words equivalent to the manifest's subcommand and
    /// parameters. `true` becomes a bare flag; `false` and `null` are
    /// dropped; lists are comma-joined.
    pub fn argv(&self) -> Result<Vec<String>, ManifestError> {
        let mut out = vec![self.subcommand.clone()];
        for (k, v) in &self.parameters {
            let flag = format!("--{k}");
            match v {
                Value::Bool(true) => out.push(flag),
                Value::Bool(false) | Value::Null => {}
                Value::Array(xs) => {
                    let parts = xs.iter().map(|x| scalar(k, x)).collect::<Result<Vec<_>, _>>()?;
                    out.push(flag);
                    out.push(parts.join(","));
                }
                x => {
                    out.push(flag);
                    out.push(scalar(k, x)?);
                }
            }
        }
        Ok(out)
    }
}

fn scalar(key: &str, v: &Value) -> Result<String, ManifestError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(ManifestError::Nested(key.to_string())),
    }
}
