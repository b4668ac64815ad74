//! Run configuration, loadable from a simple `key = value` file.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpt::{DEFAULT_EPSILON, DEFAULT_MAX_HORIZON};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::InvalidField {
                field: "format",
                value: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

/// How an FS row without observed departures enters first-passage analysis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FallbackPolicy {
    /// Keep the uniform 1/7 row.
    #[default]
    Uniform,
    /// Make FS absorbing.
    AbsorbingFs,
}

impl FromStr for FallbackPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" => Ok(FallbackPolicy::Uniform),
            "absorbing_fs" | "absorbing-fs" => Ok(FallbackPolicy::AbsorbingFs),
            _ => Err(Error::InvalidField {
                field: "fallback policy",
                value: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for FallbackPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FallbackPolicy::Uniform => "uniform",
            FallbackPolicy::AbsorbingFs => "absorbing_fs",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub epsilon: f64,
    pub max_horizon: usize,
    /// Rows with fewer weighted departures than this trigger a warning.
    pub min_support: f64,
    pub format: OutputFormat,
    pub fallback_policy: FallbackPolicy,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            max_horizon: DEFAULT_MAX_HORIZON,
            min_support: 30.0,
            format: OutputFormat::Csv,
            fallback_policy: FallbackPolicy::Uniform,
        }
    }
}

impl RunConfig {
    /// Overrides fields from `key = value` lines. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| Error::Config {
                line: n + 1,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, found {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "epsilon" => {
                    self.epsilon = value
                        .parse()
                        .map_err(|_| err(format!("invalid epsilon {value:?}")))?
                }
                "max_horizon" => {
                    self.max_horizon = value
                        .parse()
                        .map_err(|_| err(format!("invalid max_horizon {value:?}")))?
                }
                "min_support" => {
                    self.min_support = value
                        .parse()
                        .map_err(|_| err(format!("invalid min_support {value:?}")))?
                }
                "format" => self.format = value.parse().map_err(|e: Error| err(e.to_string()))?,
                "fallback_policy" => {
                    self.fallback_policy = value.parse().map_err(|e: Error| err(e.to_string()))?
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        self.validate()
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::default();
        cfg.apply_str(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if self.max_horizon == 0 {
            return Err(Error::InvalidArgument("max_horizon must be >= 1".into()));
        }
        if self.min_support.is_nan() || self.min_support < 0.0 {
            return Err(Error::InvalidArgument("min_support must be >= 0".into()));
        }
        Ok(())
    }
}
