//! Audit AOE, NSD, L and settings independence on model logs.
//!
//! cargo run --release --example assumption_audit

use ewfs::assumptions::check_all;
use ewfs::harness::{simulate, CampaignConfig};
use ewfs::models::ModelKind;
use ewfs::scenario::ScenarioKind;

fn main() -> ewfs::Result<()> {
    for model in ModelKind::ALL {
        let config = CampaignConfig::new(ScenarioKind::BruknerEwfs, model, 100_000, 5);
        let report = check_all(&simulate(&config)?, config.k_sigma);
        println!("{model}");
        for (name, check) in report.checks() {
            print!("  {name:<22} {:<14} {:.4}", check.verdict.to_string(), check.statistic);
            match &check.note {
                Some(note) => println!("  ({note})"),
                None => println!(),
            }
        }
    }
    Ok(())
}
