//! Exact and sampled CHSH value of the Brukner state in the lab bases.
//!
//! cargo run --release --example brukner_violation

use ewfs::harness::{run_campaign, CampaignConfig};
use ewfs::inequality::analytic_quantum_s;
use ewfs::models::ModelKind;
use ewfs::qcore::{brukner_raw_coefficients, brukner_state, LabKind};
use ewfs::scenario::{Measurement, ScenarioKind};

fn main() -> ewfs::Result<()> {
    let raw = brukner_raw_coefficients();
    let norm = raw.iter().map(|c| c * c).sum::<f64>().sqrt();
    println!("raw coefficients {raw:.4?} (norm {norm:.4}, renormalized)");

    let lab = [Measurement::Lab(LabKind::Z), Measurement::Lab(LabKind::X)];
    let exact = analytic_quantum_s(&brukner_state(), lab, lab)?;
    println!("exact correlators {:.4?}", exact.expectations);
    println!("exact S = {:.6} (2√2 = {:.6})", exact.max, 2.0 * std::f64::consts::SQRT_2);

    let config = CampaignConfig::new(ScenarioKind::BruknerEwfs, ModelKind::UnitaryQm, 200_000, 1);
    let c = run_campaign(&config)?;
    println!(
        "unitary-qm, {} trials: S = {:.4} ± {:.4}, violated: {}",
        config.trials, c.inequality.s, c.inequality.standard_error, c.inequality.violated
    );
    Ok(())
}
