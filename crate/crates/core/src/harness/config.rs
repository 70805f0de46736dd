use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ModelSpec, Params};
use crate::Rational;

/// Version of the JSON experiment file format.
pub const CONFIG_SCHEMA: u32 = 1;
pub const MAX_SMAX: u32 = 6;
pub const DEFAULT_REPLICATES: u64 = 10_000;
pub const DEFAULT_SMAX: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    Mc,
    LimitCheck,
    OracleCheck,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// The on-disk experiment description.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema: u32,
    pub model: String,
    #[serde(default)]
    pub params: Params,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicates: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smax: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ConfigFile = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if file.schema != CONFIG_SCHEMA {
            return Err(Error::Config(format!("unsupported schema {}, expected {CONFIG_SCHEMA}", file.schema)));
        }
        Ok(file)
    }
}

/// A validated experiment.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub mode: Mode,
    /// Part indices to report; all valid ones when the part was left open.
    pub parts: Vec<u64>,
    pub replicates: u64,
    pub seed: u64,
    pub smax: u32,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Name of the parameter that selects the reported part, if the model has one.
fn part_param(tag: &str) -> Option<&'static str> {
    match tag {
        "dimurn" | "triangular" => None,
        "blocks" => Some("ell"),
        "branches" => Some("k"),
        _ => Some("j"),
    }
}

impl ExperimentConfig {
    /// Builds a config; a missing part parameter means "every valid part".
    pub fn new(tag: &str, params: &Params, mode: Mode) -> Result<Self> {
        let mut params = params.clone();
        let mut open = false;
        if let Some(name) = part_param(tag) {
            let given = params.get(name).is_some() || (tag == "blocks" && params.get("j").is_some());
            if !given {
                open = true;
                let first = if tag == "nodedeg" { 2 } else { 1 };
                params.set(name, Rational::from_integer(first.into()))?;
            }
        }
        let model = ModelSpec::from_params(tag, &params)?;
        let parts = if open { model.parts() } else { vec![model.part()] };
        Ok(Self {
            model,
            mode,
            parts,
            replicates: DEFAULT_REPLICATES,
            seed: 0,
            smax: DEFAULT_SMAX,
            out: None,
            format: Format::Csv,
        })
    }

    pub fn from_file(file: &ConfigFile) -> Result<Self> {
        let mut cfg = Self::new(&file.model, &file.params, file.mode)?;
        if let Some(r) = file.replicates {
            cfg.replicates = r;
        }
        if let Some(s) = file.seed {
            cfg.seed = s;
        }
        if let Some(s) = file.smax {
            cfg.smax = s;
        }
        cfg.out = file.out.clone();
        cfg.format = file.format.unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.smax == 0 || self.smax > MAX_SMAX {
            return Err(Error::Config(format!("smax must be in 1..={MAX_SMAX}, got {}", self.smax)));
        }
        if matches!(self.mode, Mode::Mc | Mode::LimitCheck) && self.replicates == 0 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if self.mode == Mode::LimitCheck && self.parts.len() != 1 {
            return Err(Error::Config("limit-check needs a single part; give the part parameter".into()));
        }
        Ok(())
    }
}
