//! Run configuration: a JSON document plus command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ecurve::{build_curve, CurveData};
use crate::error::{Error, Result};
use crate::fqpoly::Poly;

/// Environment variable that overrides the default cache directory.
pub const CACHE_ENV: &str = "TWISTLAB_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".twistlab-cache";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Config(format!("unknown format {other:?}, expected json or csv"))),
        }
    }
}

/// Coefficient lists are ascending, comma separated: `"3,0,0,1"` is `t^3 + 3`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub p: u32,
    pub a: String,
    pub b: String,
    pub command: Option<String>,
    #[serde(rename = "N")]
    pub n: usize,
    pub class: Option<String>,
    pub n_max: usize,
    pub nu: f64,
    pub ell: Option<u32>,
    pub cache_dir: Option<PathBuf>,
    pub workers: usize,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    /// The reference curve `y^2 = x^3 + t x + 1` over F_5.
    fn default() -> Self {
        RunConfig {
            p: 5,
            a: "0,1".into(),
            b: "1".into(),
            command: None,
            n: 4,
            class: None,
            n_max: 4,
            nu: 0.75,
            ell: None,
            cache_dir: None,
            workers: 0,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn curve(&self) -> Result<CurveData> {
        build_curve(Poly::parse(self.p, &self.a)?, Poly::parse(self.p, &self.b)?)
    }

    pub fn class_poly(&self) -> Result<Option<Poly>> {
        self.class.as_deref().map(|c| Poly::parse(self.p, c)).transpose()
    }

    /// Config value, then the environment, then the default.
    pub fn resolved_cache_dir(&self) -> PathBuf {
        if let Some(d) = &self.cache_dir {
            return d.clone();
        }
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => PathBuf::from(d),
            _ => PathBuf::from(DEFAULT_CACHE_DIR),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_reference_curve() {
        let c = RunConfig::default().curve().unwrap();
        assert_eq!(c.finite_conductor.to_string(), "3,0,0,1");
    }

    #[test]
    fn json_round_trip_is_stable() {
        let cfg = RunConfig {
            class: Some("1,1".into()),
            ell: Some(3),
            format: OutputFormat::Csv,
            ..RunConfig::default()
        };
        let text = cfg.to_json();
        let back = RunConfig::from_json(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn partial_documents_take_defaults() {
        let cfg = RunConfig::from_json(r#"{"p": 7, "N": 2}"#).unwrap();
        assert_eq!((cfg.p, cfg.n, cfg.nu), (7, 2, 0.75));
        assert!(RunConfig::from_json(r#"{"q": 7}"#).is_err());
    }
}
