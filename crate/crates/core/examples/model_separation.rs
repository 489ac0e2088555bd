//! Every model in both scenarios, side by side.
//!
//! cargo run --release --example model_separation

use ewfs::harness::{compare_models, render_table, CampaignConfig};
use ewfs::models::ModelKind;
use ewfs::scenario::ScenarioKind;

fn main() -> ewfs::Result<()> {
    let mut configs = Vec::new();
    for model in ModelKind::ALL {
        for scenario in [ScenarioKind::StandardBell, ScenarioKind::BruknerEwfs] {
            // unitary-qm has no standard-Bell realization
            if model == ModelKind::UnitaryQm && scenario == ScenarioKind::StandardBell {
                continue;
            }
            configs.push(CampaignConfig::new(scenario, model, 100_000, 11));
        }
    }
    print!("{}", render_table(&compare_models(&configs)?));
    Ok(())
}
