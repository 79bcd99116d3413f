use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::taxonomy::{parse_category, CategoryPath};

const DEFAULT_CONFIG: &str = include_str!("../config/default.toml");

/// Sampling, threshold and template settings for building and exporting.
#[derive(Debug, Clone, PartialEq)]
pub struct ExportConfig {
    /// Seen tails sampled per (object, category).
    pub m: usize,
    /// Leading unseen tails taken in sorted order.
    pub k: usize,
    /// Extra unseen tails sampled from the remainder.
    pub j: usize,
    /// Localization threshold on the overlap ratio.
    pub tau: f64,
    pub seed: u64,
    pub sep: String,
    pub dedup_against_seen: bool,
    pub template: String,
    pub descriptions: BTreeMap<CategoryPath, String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    m: Option<usize>,
    k: Option<usize>,
    j: Option<usize>,
    tau: Option<f64>,
    seed: Option<u64>,
    sep: Option<String>,
    dedup_against_seen: Option<bool>,
    template: Option<String>,
    descriptions: Option<BTreeMap<String, String>>,
}

impl Default for ExportConfig {
    fn default() -> Self {
        let raw: RawConfig = toml::from_str(DEFAULT_CONFIG).expect("bundled config parses");
        let mut cfg = ExportConfig {
            m: 0,
            k: 0,
            j: 0,
            tau: 0.0,
            seed: 0,
            sep: String::new(),
            dedup_against_seen: true,
            template: String::new(),
            descriptions: BTreeMap::new(),
        };
        cfg.apply(raw).expect("bundled config is valid");
        cfg
    }
}

impl ExportConfig {
    /// Parses TOML, with keys absent from `text` taken from the defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let mut cfg = ExportConfig::default();
        cfg.apply(raw)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    fn apply(&mut self, raw: RawConfig) -> Result<()> {
        if let Some(v) = raw.m {
            self.m = v;
        }
        if let Some(v) = raw.k {
            self.k = v;
        }
        if let Some(v) = raw.j {
            self.j = v;
        }
        if let Some(v) = raw.tau {
            self.tau = v;
        }
        if let Some(v) = raw.seed {
            self.seed = v;
        }
        if let Some(v) = raw.sep {
            self.sep = v;
        }
        if let Some(v) = raw.dedup_against_seen {
            self.dedup_against_seen = v;
        }
        if let Some(v) = raw.template {
            self.template = v;
        }
        for (key, text) in raw.descriptions.unwrap_or_default() {
            let category = parse_category(&key)?;
            self.descriptions.insert(category, text);
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::InvalidConfig("m must be at least 1".into()));
        }
        if self.k + self.j < 1 {
            return Err(Error::InvalidConfig("k + j must be at least 1".into()));
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(Error::InvalidConfig(format!("tau must be in (0, 1], got {}", self.tau)));
        }
        if self.sep.is_empty() {
            return Err(Error::InvalidConfig("separator must not be empty".into()));
        }
        if let Some(missing) = CategoryPath::ALL.iter().find(|c| !self.descriptions.contains_key(c)) {
            return Err(Error::InvalidConfig(format!("no description for {missing}")));
        }
        Ok(())
    }

    pub fn description(&self, category: CategoryPath) -> &str {
        self.descriptions.get(&category).map(String::as_str).unwrap_or("")
    }
}
