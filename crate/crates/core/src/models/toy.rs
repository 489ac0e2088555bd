use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::{sample_outcome, sample_pair, spin_joint_table, HiddenState, ModelKind, Outcome, PhysicalModel, RunRecord};
use crate::error::{Error, Result};
use crate::scenario::{ScenarioKind, ScenarioSpec};

/// Hidden angles carried alongside the quantum state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToyHiddenState {
    pub theta1: f64,
    pub theta2: f64,
}

/// `P(+1) = cos²θ`.
pub fn plus_probability(theta: f64) -> f64 {
    theta.cos().powi(2)
}

/// Angle after a direct spin measurement returned `outcome`: 0 after `+1`,
/// π/2 after `−1`, so an immediate repeat gives the same result.
pub fn updated_angle(outcome: Outcome) -> f64 {
    match outcome {
        Outcome::Plus => 0.0,
        Outcome::Minus => FRAC_PI_2,
    }
}

/// How the hidden angles are prepared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ThetaPrior {
    /// Independent uniform angles on `[0, π)`.
    #[default]
    Uniform,
    /// Fixed angles every run.
    Fixed { theta1: f64, theta2: f64 },
}

impl ThetaPrior {
    fn draw(self, rng: &mut dyn RngCore) -> ToyHiddenState {
        match self {
            ThetaPrior::Uniform => ToyHiddenState {
                theta1: rng.gen_range(0.0..PI),
                theta2: rng.gen_range(0.0..PI),
            },
            ThetaPrior::Fixed { theta1, theta2 } => ToyHiddenState { theta1, theta2 },
        }
    }
}

/// Hidden-angle model: direct spin measurements are governed by the angles
/// and uncorrelated across wings, while superobserver measurements on the
/// friends' labs behave like a collapse model acting on the prepared state.
#[derive(Clone, Debug)]
pub struct ToyTheta {
    spec: ScenarioSpec,
    prior: ThetaPrior,
    /// Superobserver Born tables per setting pair (EWFS only).
    tables: Vec<Vec<[[f64; 2]; 2]>>,
}

impl ToyTheta {
    pub fn new(spec: ScenarioSpec, prior: ThetaPrior) -> Result<Self> {
        if let ThetaPrior::Fixed { theta1, theta2 } = prior {
            if !(0.0..PI).contains(&theta1) || !(0.0..PI).contains(&theta2) {
                return Err(Error::Config("fixed θ must lie in [0, π)".into()));
            }
        }
        let mut tables = Vec::new();
        if spec.kind == ScenarioKind::BruknerEwfs {
            let state = spec.state.state();
            for ma in &spec.alice_settings {
                let row = spec
                    .bob_settings
                    .iter()
                    .map(|mb| spin_joint_table(&state, ma.angle(), mb.angle()))
                    .collect::<Result<Vec<_>>>()?;
                tables.push(row);
            }
        }
        Ok(ToyTheta { spec, prior, tables })
    }

    /// Hidden state after both friends measured, given their results.
    pub fn after_friends(c: Outcome, d: Outcome) -> ToyHiddenState {
        ToyHiddenState {
            theta1: updated_angle(c),
            theta2: updated_angle(d),
        }
    }
}

impl PhysicalModel for ToyTheta {
    fn kind(&self) -> ModelKind {
        ModelKind::ToyTheta
    }

    fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }

    fn run_trial(&self, trial: u64, x: u8, y: u8, rng: &mut dyn RngCore) -> Result<RunRecord> {
        // θ is fixed before the settings are looked at
        let lambda = self.prior.draw(rng);
        let first = sample_outcome(plus_probability(lambda.theta1), rng);
        let second = sample_outcome(plus_probability(lambda.theta2), rng);
        match self.spec.kind {
            ScenarioKind::StandardBell => Ok(RunRecord {
                trial,
                x,
                y,
                a: first,
                b: second,
                c: None,
                d: None,
                lambda: HiddenState::Theta(lambda),
            }),
            ScenarioKind::BruknerEwfs => {
                let table = &self.tables[usize::from(x) - 1][usize::from(y) - 1];
                let (a, b) = sample_pair(table, rng)?;
                Ok(RunRecord {
                    trial,
                    x,
                    y,
                    a,
                    b,
                    c: Some(first),
                    d: Some(second),
                    lambda: HiddenState::Theta(lambda),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn zero_angle_forces_plus() {
        let prior = ThetaPrior::Fixed { theta1: 0.0, theta2: 0.0 };
        for kind in [ScenarioKind::StandardBell, ScenarioKind::BruknerEwfs] {
            let m = ToyTheta::new(ScenarioSpec::default_for(kind, 1), prior).unwrap();
            for t in 0..2000 {
                let r = m.run_trial(t, 1, 2, &mut substream(5, "toy-theta", t)).unwrap();
                let direct = r.c.unwrap_or(r.a);
                assert_eq!(direct, Outcome::Plus);
            }
        }
    }

    #[test]
    fn update_makes_repeat_deterministic() {
        for o in [Outcome::Plus, Outcome::Minus] {
            let p = plus_probability(updated_angle(o));
            let expected = if o == Outcome::Plus { 1.0 } else { 0.0 };
            assert!((p - expected).abs() < 1e-15);
        }
        let h = ToyTheta::after_friends(Outcome::Minus, Outcome::Plus);
        assert_eq!((h.theta1, h.theta2), (FRAC_PI_2, 0.0));
    }

    #[test]
    fn prepared_angles_in_range() {
        let m = ToyTheta::new(ScenarioSpec::ewfs(1), ThetaPrior::Uniform).unwrap();
        for t in 0..1000 {
            let r = m.run_trial(t, 2, 1, &mut substream(5, "toy-theta", t)).unwrap();
            let HiddenState::Theta(h) = r.lambda else { panic!("no θ payload") };
            assert!((0.0..PI).contains(&h.theta1) && (0.0..PI).contains(&h.theta2));
        }
    }

    #[test]
    fn rejects_out_of_range_fixed_prior() {
        let prior = ThetaPrior::Fixed { theta1: 4.0, theta2: 0.0 };
        assert!(ToyTheta::new(ScenarioSpec::ewfs(1), prior).is_err());
    }
}
