use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequality::DEFAULT_K_SIGMA;
use crate::models::{ModelKind, ModelOptions};
use crate::qcore::LabKind;
use crate::scenario::{Measurement, PreparedState, ScenarioKind, ScenarioSpec, SettingsSampler};

/// Which files a campaign writes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Both,
}

impl OutputFormat {
    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }
}

fn default_k() -> f64 {
    DEFAULT_K_SIGMA
}

/// One (scenario × model × trials) campaign.
///
/// ```toml
/// scenario = "ewfs"
/// model = "lhv"
/// trials = 100000
/// seed = 7
/// settings = "z,x;z,x"
/// out_dir = "runs/lhv"
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub scenario: ScenarioKind,
    pub model: ModelKind,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    /// Prepared state; the scenario's default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<PreparedState>,
    /// Angle spec, see [`parse_settings`]; the scenario's default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub settings: Option<String>,
    /// Setting sampler; uniform with the master seed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<SettingsSampler>,
    #[serde(default)]
    pub model_options: ModelOptions,
    #[serde(default = "default_k")]
    pub k_sigma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Worker threads; rayon's default when absent. Never affects results.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl CampaignConfig {
    pub fn new(scenario: ScenarioKind, model: ModelKind, trials: u64, seed: u64) -> Self {
        CampaignConfig {
            scenario,
            model,
            trials,
            seed,
            state: None,
            settings: None,
            sampler: None,
            model_options: ModelOptions::default(),
            k_sigma: DEFAULT_K_SIGMA,
            out_dir: None,
            format: OutputFormat::Both,
            threads: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&read_config(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Resolved, validated scenario.
    pub fn scenario_spec(&self) -> Result<ScenarioSpec> {
        let mut spec = ScenarioSpec::default_for(self.scenario, self.trials);
        if let Some(state) = self.state {
            spec.state = state;
        }
        if let Some(text) = &self.settings {
            let (alice, bob) = parse_settings(text)?;
            spec.alice_settings = alice;
            spec.bob_settings = bob;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn settings_sampler(&self) -> SettingsSampler {
        self.sampler
            .clone()
            .unwrap_or(SettingsSampler::UniformIid { seed: self.seed })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_sigma.is_finite() && self.k_sigma > 0.0) {
            return Err(Error::Config(format!("k_sigma must be positive, got {}", self.k_sigma)));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        self.scenario_spec().map(|_| ())
    }
}

/// A list of campaigns for side-by-side comparison.
///
/// ```toml
/// [[campaign]]
/// scenario = "bell"
/// model = "toy-theta"
/// trials = 100000
///
/// [[campaign]]
/// scenario = "ewfs"
/// model = "toy-theta"
/// trials = 100000
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub campaign: Vec<CampaignConfig>,
}

impl CompareConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&read_config(path)?)
    }
}

fn read_config(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read `{}`: {e}", path.display())))
}

/// Parse `"<alice>;<bob>"`, each a comma-separated list of measurements.
/// A measurement is `z` or `x` (lab bases) or a spin angle in radians:
/// a number, or a multiple of pi such as `pi/4`, `3pi/4`, `-0.5*pi`.
pub fn parse_settings(text: &str) -> Result<(Vec<Measurement>, Vec<Measurement>)> {
    let (alice, bob) = text
        .split_once(';')
        .ok_or_else(|| Error::Config(format!("settings `{text}` need the form `<alice>;<bob>`")))?;
    let side = |s: &str| s.split(',').map(parse_measurement).collect::<Result<Vec<_>>>();
    Ok((side(alice)?, side(bob)?))
}

pub fn parse_measurement(token: &str) -> Result<Measurement> {
    let t = token.trim().to_ascii_lowercase();
    match t.as_str() {
        "z" => Ok(Measurement::Lab(LabKind::Z)),
        "x" => Ok(Measurement::Lab(LabKind::X)),
        _ => parse_angle(&t).map(Measurement::Spin),
    }
}

fn parse_angle(t: &str) -> Result<f64> {
    let bad = || Error::Config(format!("cannot parse measurement `{t}`"));
    let Some((coef, rest)) = t.split_once("pi") else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let coef = coef.trim().trim_end_matches('*').trim();
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = rest.trim();
    let den = if rest.is_empty() {
        1.0
    } else {
        rest.strip_prefix('/').ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())?
    };
    if den == 0.0 {
        return Err(bad());
    }
    Ok(coef * PI / den)
}
