//! Session configuration, stored as TOML.
//!
//! ```toml
//! version = 0
//! dataset = "wine.csv"              # relative to the config file
//! attributes = ["alcohol", "hue"]   # empty: every column
//! epsilon = "auto"                  # or a number
//! mode = "edge-length"              # or "triangle-area"
//! colormap = "spectral"             # or "category10"
//!
//! [embedding]
//! source = "compute"                # or "file", with file = "coords.csv"
//! method = "classical-mds"          # or "metric-mds"
//!
//! [attribute.alcohol]
//! range = [11.0, 15.0]
//! bins = 5
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::binning::AttributeKind;
use crate::embedding::{EmbeddingMethod, DEFAULT_QUALITY_K};
use crate::filtration::FilterMode;
use crate::mst::QuantileMethod;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Filter threshold: a fixed value or the spanning-tree default.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum EpsilonSetting {
    #[default]
    Auto,
    Value(f64),
}

impl Serialize for EpsilonSetting {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            EpsilonSetting::Auto => s.serialize_str("auto"),
            EpsilonSetting::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for EpsilonSetting {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(EpsilonSetting::Value(v)),
            Raw::Int(v) => Ok(EpsilonSetting::Value(v as f64)),
            Raw::Text(t) if t == "auto" => Ok(EpsilonSetting::Auto),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("epsilon must be a number or \"auto\", got `{t}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Colormap {
    /// Blue to red through yellow, for ordered bins.
    #[default]
    Spectral,
    Category10,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingSource {
    #[default]
    Compute,
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingConfig {
    #[serde(default)]
    pub source: EmbeddingSource,
    /// Coordinates file when `source = "file"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    #[serde(default)]
    pub method: EmbeddingMethod,
    /// Columns fed to the embedding; empty means every continuous column.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub features: Vec<String>,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self { source: EmbeddingSource::Compute, file: None, method: EmbeddingMethod::ClassicalMds, features: Vec::new() }
    }
}

/// Per-attribute overrides of the inferred [`crate::binning::AttributeSpec`].
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<AttributeKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundaries: Option<Vec<f64>>,
}

fn default_quality_k() -> usize {
    DEFAULT_QUALITY_K
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    /// Bumped by every accepted `PUT /api/config`.
    #[serde(default)]
    pub version: u64,
    pub dataset: PathBuf,
    #[serde(default)]
    pub attributes: Vec<String>,
    #[serde(default)]
    pub epsilon: EpsilonSetting,
    #[serde(default)]
    pub mode: FilterMode,
    #[serde(default)]
    pub quantile: QuantileMethod,
    #[serde(default)]
    pub colormap: Colormap,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_quality_k")]
    pub quality_k: usize,
    #[serde(default)]
    pub embedding: EmbeddingConfig,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub attribute: BTreeMap<String, AttributeOverride>,
}

impl SessionConfig {
    pub fn new(dataset: impl Into<PathBuf>) -> Self {
        Self {
            version: 0,
            dataset: dataset.into(),
            attributes: Vec::new(),
            epsilon: EpsilonSetting::Auto,
            mode: FilterMode::EdgeLength,
            quantile: QuantileMethod::Linear,
            colormap: Colormap::Spectral,
            seed: 0,
            quality_k: DEFAULT_QUALITY_K,
            embedding: EmbeddingConfig::default(),
            attribute: BTreeMap::new(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: Self = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    /// Reads a config file. Relative paths inside it stay relative; resolve
    /// them against the file's directory with [`SessionConfig::resolve`].
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    /// Copy with dataset and embedding paths made relative to `base`.
    pub fn resolve(&self, base: &Path) -> Self {
        let mut out = self.clone();
        out.dataset = base.join(&self.dataset);
        out.embedding.file = self.embedding.file.as_ref().map(|f| base.join(f));
        out
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let EpsilonSetting::Value(v) = self.epsilon {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(ConfigError::Invalid(format!("epsilon must be finite and >= 0, got {v}")));
            }
        }
        if self.embedding.source == EmbeddingSource::File && self.embedding.file.is_none() {
            return Err(ConfigError::Invalid("embedding.source = \"file\" needs embedding.file".into()));
        }
        if self.quality_k == 0 {
            return Err(ConfigError::Invalid("quality_k must be at least 1".into()));
        }
        for (name, o) in &self.attribute {
            if o.bins == Some(0) {
                return Err(ConfigError::Invalid(format!("attribute `{name}`: bins must be at least 1")));
            }
            if let Some([lo, hi]) = o.range {
                if !(lo < hi) {
                    return Err(ConfigError::Invalid(format!("attribute `{name}`: range needs lo < hi")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = SessionConfig::from_toml("dataset = \"a.csv\"").unwrap();
        assert_eq!(c, SessionConfig::new("a.csv"));
    }

    #[test]
    fn full_config_round_trips() {
        let text = r#"
            version = 3
            dataset = "data/wine.csv"
            attributes = ["alcohol", "class"]
            epsilon = 0.5
            mode = "triangle-area"
            quantile = "nearest"
            colormap = "category10"
            seed = 42
            quality_k = 7

            [embedding]
            source = "file"
            file = "coords.csv"
            method = "classical-mds"
            features = ["alcohol", "hue"]

            [attribute.alcohol]
            range = [11.0, 15.0]
            bins = 4
            labels = ["a", "b", "c", "d"]

            [attribute.class]
            kind = "categorical"
        "#;
        let c = SessionConfig::from_toml(text).unwrap();
        assert_eq!(c.epsilon, EpsilonSetting::Value(0.5));
        assert_eq!(c.attribute["alcohol"].range, Some([11.0, 15.0]));
        assert_eq!(SessionConfig::from_toml(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn integer_epsilon_and_auto() {
        assert_eq!(SessionConfig::from_toml("dataset='a'\nepsilon=2").unwrap().epsilon, EpsilonSetting::Value(2.0));
        assert!(SessionConfig::from_toml("dataset='a'\nepsilon='big'").is_err());
        assert!(SessionConfig::from_toml("dataset='a'\nepsilon=-1.0").is_err());
    }

    #[test]
    fn typos_are_rejected() {
        assert!(SessionConfig::from_toml("dataset='a'\nepsilonn=2").is_err());
        assert!(SessionConfig::from_toml("dataset='a'\n[attribute.x]\nbin=2").is_err());
    }

    #[test]
    fn file_source_needs_a_file() {
        assert!(SessionConfig::from_toml("dataset='a'\n[embedding]\nsource='file'").is_err());
    }
}
