//! Which identification step between the friends' and the superobservers'
//! correlators breaks, per model.
//!
//! cargo run --release --example derivation_chain

use ewfs::harness::{simulate, CampaignConfig};
use ewfs::inequality::verify_derivation_chain;
use ewfs::models::ModelKind;
use ewfs::scenario::{PreparedState, ScenarioKind};

fn main() -> ewfs::Result<()> {
    for model in [ModelKind::Lhv, ModelKind::Collapse, ModelKind::ToyTheta] {
        let mut config = CampaignConfig::new(ScenarioKind::BruknerEwfs, model, 100_000, 8);
        config.state = Some(PreparedState::Singlet);
        let chain = verify_derivation_chain(&simulate(&config)?, 3.0)?;
        println!("{model} (four-observer CHSH {:.4})", chain.four_observer_chsh);
        for s in &chain.steps {
            println!(
                "  {:<6} {} = {:+.4}  vs  {} = {:+.4}  delta {:+.4} ± {:.4}  {}",
                s.justification,
                s.left.label,
                s.left.value,
                s.right.label,
                s.right.value,
                s.delta,
                s.standard_error,
                if s.holds { "holds" } else { "BROKEN" }
            );
        }
    }
    Ok(())
}
