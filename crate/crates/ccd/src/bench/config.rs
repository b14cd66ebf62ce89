//! Sweep configuration: JSON with a top-level `version` field. Unknown keys
//! anywhere are a hard error rather than silently absorbed typos.

use std::path::{Path, PathBuf};

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::detectors::{
    DEFAULT_GC_ALPHA, DEFAULT_GC_THETA, DEFAULT_TE_BINS, DEFAULT_TE_SURROGATES,
    DEFAULT_VAR_EDGE_THRESHOLD, DEFAULT_VAR_RIDGE,
};
use crate::error::{CcdError, Result};
use crate::signals::DgpSpec;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Coupled,
    Independent,
}

/// One registered detector plus its hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub enum DetectorSpec {
    GcVar(GcVarParams),
    GcF(GcFParams),
    Te(TeParams),
    Ccm(CcmParams),
    VarGraph(VarGraphParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GcVarParams {
    #[serde(default = "default_theta")]
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GcFParams {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TeParams {
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default = "default_surrogates")]
    pub n_surrogates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CcmParams {
    /// Embedding dimension; when absent it defaults to min(Q, 10) per cell.
    #[serde(default)]
    pub embedding_dim: Option<usize>,
    #[serde(default = "default_tau")]
    pub tau_embed: usize,
    /// Library sizes; when absent a ladder is derived from the data length.
    #[serde(default)]
    pub library_sizes: Option<Vec<usize>>,
    /// Neighbor count; when absent the simplex convention E + 1 applies.
    #[serde(default)]
    pub n_neighbors: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarGraphParams {
    #[serde(default = "default_ridge")]
    pub ridge: f64,
    #[serde(default = "default_edge_threshold")]
    pub edge_threshold: f64,
}

fn default_theta() -> f64 {
    DEFAULT_GC_THETA
}
fn default_alpha() -> f64 {
    DEFAULT_GC_ALPHA
}
fn default_bins() -> usize {
    DEFAULT_TE_BINS
}
fn default_surrogates() -> usize {
    DEFAULT_TE_SURROGATES
}
fn default_tau() -> usize {
    1
}
fn default_ridge() -> f64 {
    DEFAULT_VAR_RIDGE
}
fn default_edge_threshold() -> f64 {
    DEFAULT_VAR_EDGE_THRESHOLD
}

impl Default for GcVarParams {
    fn default() -> Self {
        Self {
            theta: default_theta(),
        }
    }
}
impl Default for GcFParams {
    fn default() -> Self {
        Self {
            alpha: default_alpha(),
        }
    }
}
impl Default for TeParams {
    fn default() -> Self {
        Self {
            bins: default_bins(),
            n_surrogates: default_surrogates(),
        }
    }
}
impl Default for CcmParams {
    fn default() -> Self {
        Self {
            embedding_dim: None,
            tau_embed: default_tau(),
            library_sizes: None,
            n_neighbors: None,
        }
    }
}
impl Default for VarGraphParams {
    fn default() -> Self {
        Self {
            ridge: default_ridge(),
            edge_threshold: default_edge_threshold(),
        }
    }
}

impl DetectorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DetectorSpec::GcVar(_) => "gc_var",
            DetectorSpec::GcF(_) => "gc_f",
            DetectorSpec::Te(_) => "te",
            DetectorSpec::Ccm(_) => "ccm",
            DetectorSpec::VarGraph(_) => "var_graph",
        }
    }

    pub fn all_default() -> Vec<DetectorSpec> {
        vec![
            DetectorSpec::GcVar(GcVarParams::default()),
            DetectorSpec::GcF(GcFParams::default()),
            DetectorSpec::Te(TeParams::default()),
            DetectorSpec::Ccm(CcmParams::default()),
            DetectorSpec::VarGraph(VarGraphParams::default()),
        ]
    }

    pub fn from_name(name: &str) -> Result<DetectorSpec> {
        Self::from_name_and_params(name, serde_json::Value::Null)
    }

    pub fn from_name_and_params(name: &str, params: serde_json::Value) -> Result<DetectorSpec> {
        let params = if params.is_null() {
            serde_json::json!({})
        } else {
            params
        };
        let spec = match name {
            "gc_var" => DetectorSpec::GcVar(serde_json::from_value(params)?),
            "gc_f" => DetectorSpec::GcF(serde_json::from_value(params)?),
            "te" => DetectorSpec::Te(serde_json::from_value(params)?),
            "ccm" => DetectorSpec::Ccm(serde_json::from_value(params)?),
            "var_graph" => DetectorSpec::VarGraph(serde_json::from_value(params)?),
            other => {
                return Err(CcdError::Config(format!(
                    "unknown detector '{other}' (registered: gc_var, gc_f, te, ccm, var_graph)"
                )))
            }
        };
        Ok(spec)
    }

    fn params_value(&self) -> serde_json::Value {
        match self {
            DetectorSpec::GcVar(p) => serde_json::to_value(p).expect("serializable params"),
            DetectorSpec::GcF(p) => serde_json::to_value(p).expect("serializable params"),
            DetectorSpec::Te(p) => serde_json::to_value(p).expect("serializable params"),
            DetectorSpec::Ccm(p) => serde_json::to_value(p).expect("serializable params"),
            DetectorSpec::VarGraph(p) => serde_json::to_value(p).expect("serializable params"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DetectorSpec::GcVar(p) => {
                if !p.theta.is_finite() {
                    return Err(CcdError::Config(format!(
                        "gc_var theta must be finite, got {}",
                        p.theta
                    )));
                }
            }
            DetectorSpec::GcF(p) => {
                if !(p.alpha > 0.0 && p.alpha < 1.0) {
                    return Err(CcdError::Config(format!(
                        "gc_f alpha must lie strictly in (0,1), got {}",
                        p.alpha
                    )));
                }
            }
            DetectorSpec::Te(p) => {
                if !(2..=64).contains(&p.bins) {
                    return Err(CcdError::Config(format!(
                        "te bins must lie in 2..=64, got {}",
                        p.bins
                    )));
                }
            }
            DetectorSpec::Ccm(p) => {
                if p.tau_embed == 0 {
                    return Err(CcdError::Config("ccm tau_embed must be >= 1".into()));
                }
                if p.embedding_dim == Some(0) {
                    return Err(CcdError::Config("ccm embedding_dim must be >= 1".into()));
                }
                if let Some(libs) = &p.library_sizes {
                    if libs.is_empty() || libs.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(CcdError::Config(
                            "ccm library_sizes must be nonempty and strictly increasing".into(),
                        ));
                    }
                }
            }
            DetectorSpec::VarGraph(p) => {
                if !(p.ridge >= 0.0 && p.ridge.is_finite()) {
                    return Err(CcdError::Config(format!(
                        "var_graph ridge must be nonnegative, got {}",
                        p.ridge
                    )));
                }
                if p.edge_threshold.is_nan() || p.edge_threshold <= 0.0 {
                    return Err(CcdError::Config(format!(
                        "var_graph edge_threshold must be positive, got {}",
                        p.edge_threshold
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDetector {
    name: String,
    #[serde(default)]
    params: serde_json::Value,
}

impl Serialize for DetectorSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawDetector {
            name: self.name().to_string(),
            params: self.params_value(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DetectorSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawDetector::deserialize(deserializer)?;
        DetectorSpec::from_name_and_params(&raw.name, raw.params)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Full description of one sweep: the data recipe, the detector set, and the
/// (Q, k, seed) grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub version: u32,
    #[serde(default = "default_dgp")]
    pub dgp: DgpSpec,
    pub scenario: Scenario,
    pub detectors: Vec<DetectorSpec>,
    pub q_values: Vec<usize>,
    pub k_values: Vec<usize>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub anti_alias: bool,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_dgp() -> DgpSpec {
    DgpSpec::default_coupled(0)
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("ccd-out")
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(CcdError::Config(format!(
                "unsupported config version {} (this build reads {CONFIG_VERSION})",
                self.version
            )));
        }
        if self.detectors.is_empty() {
            return Err(CcdError::Config("no detectors configured".into()));
        }
        if self.q_values.is_empty() || self.k_values.is_empty() || self.seeds.is_empty() {
            return Err(CcdError::Config(
                "q_values, k_values, and seeds must all be nonempty".into(),
            ));
        }
        if self.q_values.contains(&0) {
            return Err(CcdError::Config("q_values must be >= 1".into()));
        }
        if self.k_values.contains(&0) {
            return Err(CcdError::Config("k_values must be >= 1".into()));
        }
        for d in &self.detectors {
            d.validate()?;
        }
        self.dgp.validate()?;
        Ok(())
    }

    /// The generating recipe with the scenario applied (independent clears
    /// the coupling taps) and the given seed installed.
    pub fn dgp_for_cell(&self, seed: u64) -> DgpSpec {
        let mut dgp = self.dgp.clone();
        dgp.seed = seed;
        if self.scenario == Scenario::Independent {
            dgp.coupling_taps = Vec::new();
        }
        dgp
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
