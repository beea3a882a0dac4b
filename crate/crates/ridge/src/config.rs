//! TOML experiment configuration.
//!
//! A config file pins everything a `train` or `bench` invocation needs: the
//! data source (a file to ingest or a generator), the noise protocol, the
//! model settings, and the seed sweep. Unknown keys are rejected so a typo
//! cannot silently fall back to a default. Two environment variables may
//! override the file after parsing — `RIDGE_OUT_DIR` and `RIDGE_THREADS` —
//! because output location and parallelism are machine properties, not part
//! of the experiment's identity.

use crate::error::{Error, Result};
use crate::experiment::{ExperimentSpec, NoiseOrder};
use crate::noise::{NoiseKind, NoiseSpec, Polarity};
use crate::ssbm::SsbmConfig;
use crate::trainer::{RidgeConfig, Variant};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Where the training graph comes from: exactly one of the two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DatasetSection {
    /// Edge list to ingest (soc-sign rows or the canonical CSV format).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// Synthetic generator settings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ssbm: Option<SsbmSection>,
}

/// Signed stochastic block model parameters, seedless: the generator seed is
/// fixed so every run of a config sees the same synthetic graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SsbmSection {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    #[serde(default = "one")]
    pub rho: f64,
    #[serde(default)]
    pub sign_flip: f64,
    #[serde(default)]
    pub seed: u64,
}

impl SsbmSection {
    pub fn to_config(self) -> SsbmConfig {
        SsbmConfig {
            n: self.n,
            k: self.k,
            p: self.p,
            rho: self.rho,
            sign_flip: self.sign_flip,
            seed: self.seed,
        }
    }
}

/// Noise protocol, seedless: each run derives its own noise stream from the
/// run seed, so one config covers a whole seed sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    pub kind: NoiseKind,
    #[serde(default = "all_polarity")]
    pub polarity: Polarity,
    pub gamma: f64,
}

impl NoiseSection {
    pub fn to_spec(self) -> NoiseSpec {
        NoiseSpec {
            kind: self.kind,
            polarity: self.polarity,
            gamma: self.gamma,
            seed: 0, // replaced per run
        }
    }
}

/// Model settings, seedless for the same reason as [`NoiseSection`]. Every
/// field defaults, so `[model]` can be omitted entirely.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    pub hidden: usize,
    pub layers: usize,
    pub tau: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lr: f64,
    pub epochs: usize,
    pub variant: Variant,
}

impl Default for ModelSection {
    fn default() -> Self {
        let d = RidgeConfig::default();
        ModelSection {
            hidden: d.hidden,
            layers: d.layers,
            tau: d.tau,
            alpha: d.alpha,
            beta: d.beta,
            lr: d.lr,
            epochs: d.epochs,
            variant: d.variant,
        }
    }
}

impl ModelSection {
    pub fn to_config(self) -> RidgeConfig {
        RidgeConfig {
            hidden: self.hidden,
            layers: self.layers,
            tau: self.tau,
            alpha: self.alpha,
            beta: self.beta,
            lr: self.lr,
            epochs: self.epochs,
            seed: 0, // replaced per run
            variant: self.variant,
        }
    }
}

fn one() -> f64 {
    1.0
}
fn all_polarity() -> Polarity {
    Polarity::All
}
fn default_split() -> f64 {
    0.85
}
fn default_feature_dim() -> usize {
    64
}
fn default_seeds() -> Vec<u64> {
    vec![1, 2, 3, 4, 5]
}
fn default_threads() -> usize {
    1
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("runs")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSection>,
    pub order: NoiseOrder,
    #[serde(default = "default_split")]
    pub split_ratio: f64,
    #[serde(default = "default_feature_dim")]
    pub feature_dim: usize,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_threads")]
    pub threads: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    /// Parses TOML text. `origin` labels schema errors.
    pub fn parse(text: &str, origin: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Schema {
            path: origin.into(),
            msg: e.message().to_string(),
        })?;
        cfg.validate(origin)?;
        Ok(cfg)
    }

    /// Reads a config file, then applies `RIDGE_OUT_DIR` / `RIDGE_THREADS`
    /// overrides from the environment.
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::parse(&text, &path.display().to_string())?;
        if let Ok(dir) = std::env::var("RIDGE_OUT_DIR") {
            cfg.out_dir = PathBuf::from(dir);
        }
        if let Ok(threads) = std::env::var("RIDGE_THREADS") {
            cfg.threads = threads.parse().map_err(|_| {
                Error::InvalidInput(format!("RIDGE_THREADS must be an integer, got {threads:?}"))
            })?;
            if cfg.threads == 0 {
                return Err(Error::InvalidInput("RIDGE_THREADS must be >= 1".into()));
            }
        }
        Ok(cfg)
    }

    fn validate(&self, origin: &str) -> Result<()> {
        match (&self.dataset.path, &self.dataset.ssbm) {
            (Some(_), Some(_)) => Err(Error::Schema {
                path: origin.into(),
                msg: "dataset.path and dataset.ssbm are mutually exclusive".into(),
            }),
            (None, None) => Err(Error::Schema {
                path: origin.into(),
                msg: "dataset needs either path or ssbm".into(),
            }),
            _ => Ok(()),
        }
    }

    /// Lowers the config to a runnable spec (seeds/threads/model carried
    /// over; per-run seeds are injected by the runner).
    pub fn to_spec(&self) -> ExperimentSpec {
        ExperimentSpec {
            noise: self.noise.map(NoiseSection::to_spec),
            order: self.order,
            split_ratio: self.split_ratio,
            feature_dim: self.feature_dim,
            model: self.model.to_config(),
            seeds: self.seeds.clone(),
            threads: self.threads,
        }
    }

    /// Loads or generates the configured graph. File paths resolve relative
    /// to `base` (normally the config file's directory).
    pub fn load_graph(&self, base: &Path) -> Result<crate::graph::SignedGraph> {
        if let Some(p) = &self.dataset.path {
            let full = if p.is_absolute() { p.clone() } else { base.join(p) };
            Ok(crate::dataset::ingest_soc_sign(&full)?.graph)
        } else if let Some(s) = &self.dataset.ssbm {
            Ok(crate::ssbm::ssbm_generate(&s.to_config())?.graph)
        } else {
            unreachable!("validated: dataset has path xor ssbm")
        }
    }
}
