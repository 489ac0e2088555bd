use serde::{Deserialize, Serialize};

use super::{ChshSummary, ExpectationMatrix};
use crate::error::Result;
use crate::models::{joint_table, spin_joint_table};
use crate::qcore::{entangle_friends, lab_projectors_on_ewfs, LabSide, StateVector};
use crate::scenario::Measurement;

/// Exact quantum CHSH evaluation for a two-particle state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticChsh {
    pub expectations: [[f64; 2]; 2],
    pub canonical: f64,
    pub max: f64,
}

/// Born-rule correlator for one setting pair. Lab measurements on both
/// sides go through the friends' entangled 16-dim state; anything else is
/// evaluated as spin measurements on the particles.
pub fn quantum_correlator(state: &StateVector, alice: Measurement, bob: Measurement) -> Result<f64> {
    let table = match (alice, bob) {
        (Measurement::Lab(ka), Measurement::Lab(kb)) => {
            let labs = entangle_friends(state)?;
            let t = joint_table(
                &labs,
                &lab_projectors_on_ewfs(LabSide::One, ka),
                &lab_projectors_on_ewfs(LabSide::Two, kb),
            )?;
            [[t[0][0], t[0][1]], [t[1][0], t[1][1]]]
        }
        _ => spin_joint_table(state, alice.angle(), bob.angle())?,
    };
    Ok(table[0][0] - table[0][1] - table[1][0] + table[1][1])
}

/// Exact CHSH values from Born probabilities; no sampling.
pub fn analytic_quantum_s(
    state: &StateVector,
    alice: [Measurement; 2],
    bob: [Measurement; 2],
) -> Result<AnalyticChsh> {
    let mut expectations = [[0.0; 2]; 2];
    for (xi, &ma) in alice.iter().enumerate() {
        for (yi, &mb) in bob.iter().enumerate() {
            expectations[xi][yi] = quantum_correlator(state, ma, mb)?;
        }
    }
    let summary = ChshSummary::from_expectations(&ExpectationMatrix::exact(expectations))?;
    Ok(AnalyticChsh {
        expectations,
        canonical: summary.canonical,
        max: summary.max,
    })
}
