//! Experiment configuration, read from a single TOML file.
//!
//! ```toml
//! case = "auto"
//! seed = 42
//! replicates = 10000
//! t_ladder = [100.0, 1000.0, 10000.0]
//! u_points = [0.5, 1.0]
//!
//! [law]
//! family = "exponential"
//! rate = 1.0
//!
//! [response]
//! kind = "power"
//! beta = 1.0
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::renewal::{InterArrivalLaw, LimitCase, LimitCaseSpec};
use crate::response::{ResponseFunction, ResponseSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseSelector {
    Auto,
    A1,
    A2,
    A3,
    A4,
    A5,
}

impl CaseSelector {
    fn expected(self) -> Option<LimitCase> {
        match self {
            CaseSelector::Auto => None,
            CaseSelector::A1 => Some(LimitCase::A1),
            CaseSelector::A2 => Some(LimitCase::A2),
            CaseSelector::A3 => Some(LimitCase::A3),
            CaseSelector::A4 => Some(LimitCase::A4),
            CaseSelector::A5 => Some(LimitCase::A5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(Error::Config(format!("unknown output format '{other}'"))),
        }
    }
}

/// Pass/fail limits used by the verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// KS distance against a continuous limit law
    pub ks_distance: f64,
    /// ECF deviation in standard errors
    pub ecf_se: f64,
    /// moment and covariance gaps in standard errors
    pub moment_se: f64,
    /// minimum two-sample KS p-value
    pub ks_p_value: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { ks_distance: 0.02, ecf_se: 5.0, moment_se: 4.0, ks_p_value: 0.01 }
    }
}

/// Settings of the `moments` subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MomentsConfig {
    pub alpha: f64,
    pub beta: f64,
    pub u: f64,
    pub k: u32,
}

impl Default for MomentsConfig {
    fn default() -> Self {
        MomentsConfig { alpha: 0.5, beta: 1.0, u: 1.0, k: 5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelfSimProcess {
    /// fractionally integrated stable process, α ∈ (1, 2]
    Y,
    /// fractionally integrated inverse subordinator, α ∈ (0, 1)
    Z,
}

/// Settings of the `selfsim` subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelfSimConfig {
    pub process: SelfSimProcess,
    pub alpha: f64,
    pub beta: f64,
    pub u: f64,
    /// time dilation `c` in `X(cu) =d c^H X(u)`
    pub dilation: f64,
    pub paths: usize,
    pub repetitions: usize,
    /// repetitions that must reach the p-value threshold
    pub min_passes: usize,
    /// Lévy grid points for `Y`
    pub grid_points: usize,
    /// minimum subordinator steps for `Z`
    pub subordinator_steps: usize,
}

impl Default for SelfSimConfig {
    fn default() -> Self {
        SelfSimConfig {
            process: SelfSimProcess::Y,
            alpha: 1.5,
            beta: 1.0,
            u: 1.0,
            dilation: 2.0,
            paths: 100_000,
            repetitions: 5,
            min_passes: 4,
            grid_points: 257,
            subordinator_steps: 1024,
        }
    }
}

/// Settings of the `stable-check` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StableCheckConfig {
    pub alphas: Vec<f64>,
    pub z: Vec<f64>,
    pub draws: usize,
    /// allowed componentwise deviation in standard errors
    pub se_limit: f64,
}

impl Default for StableCheckConfig {
    fn default() -> Self {
        StableCheckConfig { alphas: vec![1.2, 1.5, 1.8], z: vec![0.5, 1.0, 2.0], draws: 1_000_000, se_limit: 4.0 }
    }
}

/// One complete experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub case: CaseSelector,
    pub seed: u64,
    pub replicates: usize,
    pub t_ladder: Vec<f64>,
    pub u_points: Vec<f64>,
    /// points per path written by `simulate`
    pub grid_points: usize,
    /// paths written by `simulate`
    pub simulate_paths: usize,
    /// arguments of the empirical characteristic function checks
    pub ecf_z: Vec<f64>,
    pub out_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
    /// worker threads; 0 means available parallelism
    pub threads: usize,
    pub law: InterArrivalLaw,
    pub response: ResponseSpec,
    pub thresholds: Thresholds,
    pub moments: MomentsConfig,
    pub selfsim: SelfSimConfig,
    pub stable_check: StableCheckConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            case: CaseSelector::Auto,
            seed: 1,
            replicates: 10_000,
            t_ladder: vec![100.0, 1_000.0, 10_000.0],
            u_points: vec![0.5, 1.0],
            grid_points: 201,
            simulate_paths: 8,
            ecf_z: vec![0.5, 1.0, 2.0],
            out_dir: PathBuf::from("out"),
            formats: vec![OutputFormat::Csv, OutputFormat::Json],
            threads: 0,
            law: InterArrivalLaw::Exponential { rate: 1.0 },
            response: ResponseSpec::Constant { c: 1.0, left_tail: None },
            thresholds: Thresholds::default(),
            moments: MomentsConfig::default(),
            selfsim: SelfSimConfig::default(),
            stable_check: StableCheckConfig::default(),
        }
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// The resolved config as embedded in outputs. Worker count and output
    /// directory are left out: they do not change any result.
    pub fn provenance(&self) -> Result<serde_json::Value> {
        let mut v = serde_json::to_value(self)?;
        if let Some(map) = v.as_object_mut() {
            map.remove("threads");
            map.remove("out_dir");
        }
        Ok(v)
    }

    pub fn response_function(&self) -> Result<ResponseFunction> {
        self.response.build()
    }

    /// The regime for `law` and `response`, checked against `case`.
    pub fn limit_spec(&self) -> Result<LimitCaseSpec> {
        let h = self.response_function().map_err(|e| config_err(format!("response: {e}")))?;
        let spec = LimitCaseSpec::build(&self.law, &h).map_err(|e| config_err(format!("law: {e}")))?;
        if let Some(expected) = self.case.expected() {
            if expected != spec.case() {
                return Err(config_err(format!(
                    "case {} requested but law and response select {}",
                    expected.label(),
                    spec.case().label()
                )));
            }
        }
        Ok(spec)
    }

    /// Structural checks shared by every subcommand.
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(config_err("replicates must be >= 1"));
        }
        if self.t_ladder.is_empty() {
            return Err(config_err("t_ladder must not be empty"));
        }
        if self.t_ladder.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(config_err("t_ladder entries must be finite and > 0"));
        }
        if self.t_ladder.windows(2).any(|w| w[1] <= w[0]) {
            return Err(config_err("t_ladder must be strictly increasing"));
        }
        if self.u_points.is_empty() || self.u_points.iter().any(|u| !(u.is_finite() && *u > 0.0)) {
            return Err(config_err("u_points must be nonempty, finite and > 0"));
        }
        if self.u_points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(config_err("u_points must be strictly increasing"));
        }
        if self.grid_points < 2 {
            return Err(config_err("grid_points must be >= 2"));
        }
        if self.ecf_z.iter().any(|z| !(z.is_finite() && *z != 0.0)) {
            return Err(config_err("ecf_z entries must be finite and nonzero"));
        }
        let t = &self.thresholds;
        if !(t.ks_distance > 0.0 && t.ecf_se > 0.0 && t.moment_se > 0.0 && t.ks_p_value > 0.0 && t.ks_p_value < 1.0) {
            return Err(config_err("thresholds must be positive (ks_p_value in (0, 1))"));
        }
        if self.moments.k == 0 || !(self.moments.u > 0.0) {
            return Err(config_err("moments needs k >= 1 and u > 0"));
        }
        let s = &self.selfsim;
        if s.paths == 0 || s.repetitions == 0 || s.min_passes > s.repetitions {
            return Err(config_err("selfsim needs paths >= 1 and min_passes <= repetitions >= 1"));
        }
        if !(s.dilation > 0.0 && s.u > 0.0 && s.beta >= 0.0) || s.grid_points < 2 || s.subordinator_steps == 0 {
            return Err(config_err("selfsim needs dilation, u > 0, beta >= 0, grid_points >= 2"));
        }
        let sc = &self.stable_check;
        if sc.alphas.is_empty() || sc.z.is_empty() || sc.draws < 2 || !(sc.se_limit > 0.0) {
            return Err(config_err("stable_check needs alphas, z, draws >= 2 and se_limit > 0"));
        }
        self.law.validate().map_err(|e| config_err(format!("law: {e}")))?;
        self.response_function().map_err(|e| config_err(format!("response: {e}")))?;
        Ok(())
    }
}
