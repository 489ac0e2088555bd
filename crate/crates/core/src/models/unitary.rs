use rand::RngCore;

use super::{joint_table, ModelKind, Outcome, PhysicalModel, RunRecord, HiddenState};
use crate::error::{Error, Result};
use crate::qcore::{entangle_friends, lab_projectors_on_ewfs, sample_index, LabKind, LabSide};
use crate::scenario::{Measurement, ScenarioKind, ScenarioSpec};

/// Friends' measurements are unitary entanglement with their memories;
/// Alice and Bob sample jointly from the Born rule on the 16-dim lab state.
///
/// Charlie's result is only recorded when Alice opens the lab (`X = 1`);
/// otherwise the model assigns none.
#[derive(Clone, Debug)]
pub struct UnitaryQm {
    spec: ScenarioSpec,
    /// `tables[x-1][y-1][i*3 + j]` over lab outcomes (+, −, inconsistent).
    tables: Vec<Vec<Vec<f64>>>,
}

fn lab_kind(m: Measurement) -> Result<LabKind> {
    match m {
        Measurement::Lab(k) => Ok(k),
        Measurement::Spin(_) => Err(Error::UnsupportedScenario(
            "unitary-qm needs lab measurements".into(),
        )),
    }
}

impl UnitaryQm {
    pub fn new(spec: ScenarioSpec) -> Result<Self> {
        if spec.kind != ScenarioKind::BruknerEwfs {
            return Err(Error::UnsupportedScenario(
                "unitary-qm is only defined for the ewfs scenario".into(),
            ));
        }
        let labs = entangle_friends(&spec.state.state())?;
        let mut tables = Vec::new();
        for &ma in &spec.alice_settings {
            let pa = lab_projectors_on_ewfs(LabSide::One, lab_kind(ma)?);
            let mut row = Vec::new();
            for &mb in &spec.bob_settings {
                let pb = lab_projectors_on_ewfs(LabSide::Two, lab_kind(mb)?);
                row.push(joint_table(&labs, &pa, &pb)?.concat());
            }
            tables.push(row);
        }
        Ok(UnitaryQm { spec, tables })
    }

    /// Exact `P(A, B | x, y)` with index 0 = `+`.
    pub fn joint_probabilities(&self, x: u8, y: u8) -> [[f64; 2]; 2] {
        let t = &self.tables[usize::from(x) - 1][usize::from(y) - 1];
        [[t[0], t[1]], [t[3], t[4]]]
    }
}

impl PhysicalModel for UnitaryQm {
    fn kind(&self) -> ModelKind {
        ModelKind::UnitaryQm
    }

    fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }

    fn run_trial(&self, trial: u64, x: u8, y: u8, rng: &mut dyn RngCore) -> Result<RunRecord> {
        let weights = &self.tables[usize::from(x) - 1][usize::from(y) - 1];
        let i = sample_index(weights, rng)?;
        let a = Outcome::from_index(i / 3)?;
        let b = Outcome::from_index(i % 3)?;
        Ok(RunRecord {
            trial,
            x,
            y,
            a,
            b,
            c: (x == 1).then_some(a),
            d: (y == 1).then_some(b),
            lambda: HiddenState::None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn rejects_standard_bell() {
        assert!(matches!(
            UnitaryQm::new(ScenarioSpec::standard_bell(10)),
            Err(Error::UnsupportedScenario(_))
        ));
    }

    #[test]
    fn friend_copy_is_exact() {
        let m = UnitaryQm::new(ScenarioSpec::ewfs(10)).unwrap();
        for t in 0..2000 {
            let mut rng = substream(3, "unitary-qm", t);
            let r = m.run_trial(t, 1, 1, &mut rng).unwrap();
            assert_eq!(r.c, Some(r.a));
            assert_eq!(r.d, Some(r.b));
            let r = m.run_trial(t, 2, 2, &mut rng).unwrap();
            assert_eq!((r.c, r.d), (None, None));
        }
    }

    #[test]
    fn tables_are_normalized() {
        let m = UnitaryQm::new(ScenarioSpec::ewfs(10)).unwrap();
        for x in 1..=2 {
            for y in 1..=2 {
                let p = m.joint_probabilities(x, y);
                let total: f64 = p.iter().flatten().sum();
                assert!((total - 1.0).abs() < 1e-12);
            }
        }
    }
}
