//! State-vector view of one lab: the friend's measurement as a unitary,
//! then a superobserver measurement with collapse.
//!
//! cargo run --example friends_in_labs

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ewfs::qcore::{
    born_probabilities, entangle_friends, lab_projectors_on_ewfs, project_and_collapse, singlet, LabKind,
    LabSide,
};

fn main() -> ewfs::Result<()> {
    let labs = entangle_friends(&singlet())?;
    let support: Vec<String> = labs
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-12)
        .map(|(i, a)| format!("{:+.4}|{i:04b}>", a.re))
        .collect();
    println!("labs after the friends measure: {}", support.join(" "));

    for kind in [LabKind::Z, LabKind::X] {
        let p = born_probabilities(&labs, &lab_projectors_on_ewfs(LabSide::One, kind))?;
        println!("Alice {kind:?}: P(+) = {:.3}, P(-) = {:.3}, P(other) = {:.1e}", p[0], p[1], p[2]);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (k, after) = project_and_collapse(&labs, &lab_projectors_on_ewfs(LabSide::One, LabKind::Z), &mut rng)?;
    let bob = born_probabilities(&after, &lab_projectors_on_ewfs(LabSide::Two, LabKind::Z))?;
    println!("Alice Z gave outcome {k}; Bob Z now: P(+) = {:.3}, P(-) = {:.3}", bob[0], bob[1]);
    Ok(())
}
