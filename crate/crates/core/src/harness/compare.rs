use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::campaign::run_campaign;
use super::config::CampaignConfig;
use crate::assumptions::Verdict;
use crate::error::{Error, Result};
use crate::models::ModelKind;
use crate::scenario::{PreparedState, ScenarioKind};

/// One line of the model-separation table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model: ModelKind,
    pub scenario: ScenarioKind,
    pub state: PreparedState,
    pub trials: u64,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "SE")]
    pub se: f64,
    pub violated: bool,
    pub aoe_i: Verdict,
    pub aoe_ii: Verdict,
    pub aoe_iii: Verdict,
    pub nsd: Verdict,
    pub locality: Verdict,
}

/// Run each campaign and tabulate the headline results.
pub fn compare_models(configs: &[CampaignConfig]) -> Result<Vec<ComparisonRow>> {
    if configs.len() < 2 {
        return Err(Error::Config(format!(
            "comparison needs at least two campaigns, got {}",
            configs.len()
        )));
    }
    configs
        .iter()
        .map(|config| {
            let c = run_campaign(config)?;
            let a = &c.assumptions;
            Ok(ComparisonRow {
                model: config.model,
                scenario: config.scenario,
                state: c.report.config_echo.scenario_spec.state,
                trials: config.trials,
                s: c.inequality.s,
                se: c.inequality.standard_error,
                violated: c.inequality.violated,
                aoe_i: a.aoe.defined.verdict,
                aoe_ii: a.aoe.alice_agrees.verdict,
                aoe_iii: a.aoe.bob_agrees.verdict,
                nsd: a.nsd.verdict,
                locality: a.locality.verdict,
            })
        })
        .collect()
}

fn short(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "FAIL",
        Verdict::Inconclusive => "inconcl",
        Verdict::NotApplicable => "n/a",
    }
}

/// Fixed-width text rendering.
pub fn render_table(rows: &[ComparisonRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<11} {:<5} {:<8} {:>8} {:>7} {:>7} {:<9} {:<7} {:<7} {:<7} {:<7} {:<7}",
        "model", "scen", "state", "trials", "S", "SE", "verdict", "aoe-i", "aoe-ii", "aoe-iii", "nsd", "L"
    );
    for r in rows {
        let state = match r.state {
            PreparedState::Brukner => "brukner",
            PreparedState::Singlet => "singlet",
        };
        let _ = writeln!(
            out,
            "{:<11} {:<5} {:<8} {:>8} {:>7.4} {:>7.4} {:<9} {:<7} {:<7} {:<7} {:<7} {:<7}",
            r.model.name(),
            r.scenario.name(),
            state,
            r.trials,
            r.s,
            r.se,
            if r.violated { "VIOLATES" } else { "within" },
            short(r.aoe_i),
            short(r.aoe_ii),
            short(r.aoe_iii),
            short(r.nsd),
            short(r.locality),
        );
    }
    out
}
