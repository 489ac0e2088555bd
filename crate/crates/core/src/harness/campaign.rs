use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{CampaignConfig, OutputFormat};
use super::log::write_log;
use crate::assumptions::{check_all, AssumptionReport};
use crate::error::{Error, Result};
use crate::inequality::{tabulate, ExpectationMatrix, InequalityReport, PolytopeVerdict};
use crate::models::{build_model, ModelKind, ModelOptions, RunRecord};
use crate::rng::substream;
use crate::scenario::{sample_settings, ScenarioKind, ScenarioSpec, SettingsSampler};

/// The configuration fields that determine results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub scenario: ScenarioKind,
    pub model: ModelKind,
    pub trials: u64,
    pub seed: u64,
    pub sampler: SettingsSampler,
    pub model_options: ModelOptions,
    pub k_sigma: f64,
    pub scenario_spec: ScenarioSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub standard_error: f64,
}

/// Headline verdict on the CHSH bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub violated: bool,
    pub bound: f64,
    pub k_sigma: f64,
    pub variant: String,
    pub s_canonical: f64,
    pub local_polytope_member: bool,
}

/// Summary written as `report.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config_echo: ConfigEcho,
    /// Trials per setting pair, keyed `"XY"`.
    pub per_setting_counts: BTreeMap<String, u64>,
    /// Correlators keyed `"E11"` … `"E22"`.
    pub expectations: BTreeMap<String, Estimate>,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "SE")]
    pub se: f64,
    pub verdict: BoundVerdict,
    pub assumptions: AssumptionReport,
    pub certificate: PolytopeVerdict,
}

impl CampaignReport {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// A finished campaign: the log and everything derived from it.
#[derive(Clone, Debug)]
pub struct Campaign {
    pub records: Vec<RunRecord>,
    pub expectations: ExpectationMatrix,
    pub inequality: InequalityReport,
    pub assumptions: AssumptionReport,
    pub report: CampaignReport,
}

impl Campaign {
    /// Write `runs.csv` and/or `report.json` into `dir`, creating it.
    pub fn write(&self, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
        let out_err = |path: &Path| {
            let path = path.display().to_string();
            move |source| Error::Output { path, source }
        };
        fs::create_dir_all(dir).map_err(out_err(dir))?;
        let mut written = Vec::new();
        if format.csv() {
            let path = dir.join("runs.csv");
            let file = fs::File::create(&path).map_err(out_err(&path))?;
            write_log(file, &self.records).map_err(|e| match e {
                Error::Log(msg) => Error::Output {
                    path: path.display().to_string(),
                    source: std::io::Error::other(msg),
                },
                e => e,
            })?;
            written.push(path);
        }
        if format.json() {
            let path = dir.join("report.json");
            fs::write(&path, self.report.to_json()).map_err(out_err(&path))?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Run every trial of a campaign. Trial `t` draws its settings from the
/// sampler and its model randomness from the substream
/// `(seed, model name, t)`, so results do not depend on scheduling.
pub fn simulate(config: &CampaignConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let spec = config.scenario_spec()?;
    let model = build_model(config.model, &spec, &config.model_options)?;
    let sampler = config.settings_sampler();
    let run = || {
        (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let (x, y) = sample_settings(&spec, &sampler, t)?;
                let mut rng = substream(config.seed, config.model.name(), t);
                model.run_trial(t, x, y, &mut rng)
            })
            .collect::<Result<Vec<_>>>()
    };
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(run),
        None => run(),
    }
}

/// Simulate and analyse a campaign. Nothing is written to disk.
pub fn run_campaign(config: &CampaignConfig) -> Result<Campaign> {
    let records = simulate(config)?;
    analyse(config, records)
}

/// Simulate, analyse, and write outputs when `out_dir` is set.
pub fn execute(config: &CampaignConfig) -> Result<(Campaign, Vec<PathBuf>)> {
    let campaign = run_campaign(config)?;
    let written = match &config.out_dir {
        Some(dir) => campaign.write(dir, config.format)?,
        None => Vec::new(),
    };
    Ok((campaign, written))
}

/// Analyse an existing log under a configuration.
pub fn analyse(config: &CampaignConfig, records: Vec<RunRecord>) -> Result<Campaign> {
    let table = tabulate(&records)?;
    let expectations = ExpectationMatrix::from_table(&table);
    let inequality = InequalityReport::from_table(&table, config.k_sigma)?;
    let assumptions = check_all(&records, config.k_sigma);

    let mut per_setting_counts = BTreeMap::new();
    let mut estimates = BTreeMap::new();
    for x in 1..=2u8 {
        for y in 1..=2u8 {
            per_setting_counts.insert(format!("{x}{y}"), table.trials(x, y).unwrap_or(0));
            let (xi, yi) = (usize::from(x) - 1, usize::from(y) - 1);
            estimates.insert(
                format!("E{x}{y}"),
                Estimate {
                    value: expectations.values[xi][yi],
                    standard_error: expectations.standard_errors[xi][yi],
                },
            );
        }
    }
    let report = CampaignReport {
        config_echo: ConfigEcho {
            scenario: config.scenario,
            model: config.model,
            trials: config.trials,
            seed: config.seed,
            sampler: config.settings_sampler(),
            model_options: config.model_options.clone(),
            k_sigma: config.k_sigma,
            scenario_spec: config.scenario_spec()?,
        },
        per_setting_counts,
        expectations: estimates,
        s: inequality.s,
        se: inequality.standard_error,
        verdict: BoundVerdict {
            violated: inequality.violated,
            bound: inequality.bound,
            k_sigma: inequality.k_sigma,
            variant: inequality.variant.to_string(),
            s_canonical: inequality.s_canonical,
            local_polytope_member: inequality.membership.member,
        },
        assumptions: assumptions.clone(),
        certificate: inequality.membership.clone(),
    };
    Ok(Campaign {
        records,
        expectations,
        inequality,
        assumptions,
        report,
    })
}
