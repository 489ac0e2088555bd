use rand::RngCore;

use super::{HiddenState, ModelKind, Outcome, PhysicalModel, RunRecord};
use crate::error::Result;
use crate::qcore::{
    lab_measurement_basis, spin_measurement_basis, LabKind, Projector, ProjectiveMeasurement,
    StateVector,
};
use crate::scenario::{Measurement, ScenarioKind, ScenarioSpec};

/// Every measurement, including a friend's, collapses the state.
///
/// In the EWFS the friends' z measurements leave each lab in a product
/// eigenstate `|Z±⟩`, so a later Z measurement by the superobserver
/// returns the friend's value and an X measurement is a fair coin.
#[derive(Clone, Debug)]
pub struct Collapse {
    spec: ScenarioSpec,
    prepared: StateVector,
    /// Spin measurements on particle 1 / 2 (EWFS: the friends' z).
    first: Vec<ProjectiveMeasurement>,
    second: Vec<ProjectiveMeasurement>,
    /// Lab measurements indexed by setting, EWFS only.
    alice_lab: Vec<ProjectiveMeasurement>,
    bob_lab: Vec<ProjectiveMeasurement>,
    /// `|Z+⟩`, `|Z−⟩` lab states.
    lab_states: [StateVector; 2],
}

fn lifted_spin(angle: f64, target: usize) -> Result<ProjectiveMeasurement> {
    let set = spin_measurement_basis(angle)
        .iter()
        .map(|p| p.lift(&[2, 2], &[target]))
        .collect::<Result<Vec<Projector>>>()?;
    ProjectiveMeasurement::new(set)
}

fn lab_set(m: Measurement) -> Result<ProjectiveMeasurement> {
    let kind = match m {
        Measurement::Lab(k) => k,
        Measurement::Spin(_) => LabKind::Z,
    };
    ProjectiveMeasurement::new(lab_measurement_basis(kind))
}

impl Collapse {
    pub fn new(spec: ScenarioSpec) -> Result<Self> {
        let (first, second, alice_lab, bob_lab) = match spec.kind {
            ScenarioKind::BruknerEwfs => (
                vec![lifted_spin(0.0, 0)?],
                vec![lifted_spin(0.0, 1)?],
                spec.alice_settings.iter().map(|&m| lab_set(m)).collect::<Result<_>>()?,
                spec.bob_settings.iter().map(|&m| lab_set(m)).collect::<Result<_>>()?,
            ),
            ScenarioKind::StandardBell => (
                spec.alice_settings
                    .iter()
                    .map(|m| lifted_spin(m.angle(), 0))
                    .collect::<Result<_>>()?,
                spec.bob_settings
                    .iter()
                    .map(|m| lifted_spin(m.angle(), 1))
                    .collect::<Result<_>>()?,
                Vec::new(),
                Vec::new(),
            ),
        };
        let lab_states = [
            StateVector::from_real(&[1.0, 0.0, 0.0, 0.0], vec![2, 2])?,
            StateVector::from_real(&[0.0, 0.0, 0.0, 1.0], vec![2, 2])?,
        ];
        Ok(Collapse {
            prepared: spec.state.state(),
            spec,
            first,
            second,
            alice_lab,
            bob_lab,
            lab_states,
        })
    }

    /// Exact distribution of the friends' results `P(C, D)` when the
    /// collapses happen in the given order (`charlie_first`).
    pub fn friend_distribution(&self, charlie_first: bool) -> Result<[[f64; 2]; 2]> {
        let (m1, m2) = if charlie_first {
            (&self.first[0], &self.second[0])
        } else {
            (&self.second[0], &self.first[0])
        };
        let mut out = [[0.0; 2]; 2];
        let p1 = m1.probabilities(&self.prepared)?;
        for (i, &pi) in p1.iter().enumerate() {
            if pi < 1e-15 {
                continue;
            }
            let mut post = self.prepared.map_unnormalized(m1.projectors()[i].matrix());
            post.normalize()?;
            for (j, pj) in m2.probabilities(&post)?.into_iter().enumerate() {
                let (c, d) = if charlie_first { (i, j) } else { (j, i) };
                out[c][d] += pi * pj;
            }
        }
        Ok(out)
    }
}

impl PhysicalModel for Collapse {
    fn kind(&self) -> ModelKind {
        ModelKind::Collapse
    }

    fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }

    fn run_trial(&self, trial: u64, x: u8, y: u8, rng: &mut dyn RngCore) -> Result<RunRecord> {
        let (xi, yi) = (usize::from(x) - 1, usize::from(y) - 1);
        match self.spec.kind {
            ScenarioKind::BruknerEwfs => {
                let (ci, s1) = self.first[0].collapse(&self.prepared, rng)?;
                let (di, _) = self.second[0].collapse(&s1, rng)?;
                let (ai, _) = self.alice_lab[xi].collapse(&self.lab_states[ci], rng)?;
                let (bi, _) = self.bob_lab[yi].collapse(&self.lab_states[di], rng)?;
                Ok(RunRecord {
                    trial,
                    x,
                    y,
                    a: Outcome::from_index(ai)?,
                    b: Outcome::from_index(bi)?,
                    c: Some(Outcome::from_index(ci)?),
                    d: Some(Outcome::from_index(di)?),
                    lambda: HiddenState::None,
                })
            }
            ScenarioKind::StandardBell => {
                let (ai, s1) = self.first[xi].collapse(&self.prepared, rng)?;
                let (bi, _) = self.second[yi].collapse(&s1, rng)?;
                Ok(RunRecord {
                    trial,
                    x,
                    y,
                    a: Outcome::from_index(ai)?,
                    b: Outcome::from_index(bi)?,
                    c: None,
                    d: None,
                    lambda: HiddenState::None,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::scenario::PreparedState;

    #[test]
    fn singlet_ewfs_copies_and_anticorrelates() {
        let m = Collapse::new(ScenarioSpec::ewfs(1).with_state(PreparedState::Singlet)).unwrap();
        for t in 0..5000 {
            let r = m.run_trial(t, 1, 1, &mut substream(11, "collapse", t)).unwrap();
            assert_eq!(r.c, Some(r.a));
            assert_eq!(r.d, Some(r.b));
            assert_ne!(r.c, r.d);
        }
    }

    #[test]
    fn collapse_order_is_irrelevant() {
        for state in [PreparedState::Singlet, PreparedState::Brukner] {
            let m = Collapse::new(ScenarioSpec::ewfs(1).with_state(state)).unwrap();
            let cd = m.friend_distribution(true).unwrap();
            let dc = m.friend_distribution(false).unwrap();
            let amps = state.state();
            for c in 0..2 {
                for d in 0..2 {
                    assert!((cd[c][d] - dc[c][d]).abs() < 1e-12);
                    assert!((cd[c][d] - amps.amplitude(2 * c + d).norm_sqr()).abs() < 1e-12);
                }
            }
        }
    }
}
