use rand::distributions::{Distribution, WeightedIndex};
use rand::RngCore;

use super::{HiddenState, ModelKind, Outcome, PhysicalModel, RunRecord};
use crate::error::{Error, Result};
use crate::scenario::{ScenarioKind, ScenarioSpec};
use crate::strategy::Strategy;

/// Local hidden variables: each run draws one deterministic strategy.
///
/// In the EWFS the friends' results are the setting-1 values, so AOE
/// consistency holds by construction.
#[derive(Clone, Debug)]
pub struct Lhv {
    spec: ScenarioSpec,
    weights: Vec<f64>,
    dist: WeightedIndex<f64>,
}

impl Lhv {
    pub fn new(spec: ScenarioSpec, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != Strategy::COUNT {
            return Err(Error::Config(format!(
                "lhv needs {} strategy weights, got {}",
                Strategy::COUNT,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Config("lhv weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "lhv weights sum to {total}, expected 1"
            )));
        }
        let dist = WeightedIndex::new(&weights)
            .map_err(|e| Error::Config(format!("lhv weights: {e}")))?;
        Ok(Lhv { spec, weights, dist })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Exact correlators `E[x-1][y-1]` by weighted enumeration.
    pub fn exact_correlators(&self) -> [[f64; 2]; 2] {
        exact_correlators(&self.weights)
    }
}

/// `E(x, y) = Σ_λ w_λ A_x(λ) B_y(λ)` over the 16 strategies.
pub fn exact_correlators(weights: &[f64]) -> [[f64; 2]; 2] {
    let mut e = [[0.0; 2]; 2];
    for (s, w) in Strategy::all().zip(weights) {
        for x in 1..=2u8 {
            for y in 1..=2u8 {
                e[usize::from(x) - 1][usize::from(y) - 1] += w * f64::from(s.a(x) * s.b(y));
            }
        }
    }
    e
}

impl PhysicalModel for Lhv {
    fn kind(&self) -> ModelKind {
        ModelKind::Lhv
    }

    fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }

    fn run_trial(&self, trial: u64, x: u8, y: u8, rng: &mut dyn RngCore) -> Result<RunRecord> {
        let s = Strategy::new(self.dist.sample(rng) as u8).expect("index below 16");
        let val = |v: i8| Outcome::from_value(v).expect("strategies hold ±1");
        let friends = self.spec.kind == ScenarioKind::BruknerEwfs;
        Ok(RunRecord {
            trial,
            x,
            y,
            a: val(s.a(x)),
            b: val(s.b(y)),
            c: friends.then(|| val(s.a(1))),
            d: friends.then(|| val(s.b(1))),
            lambda: HiddenState::Strategy(s),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn weights_must_sum_to_one() {
        let spec = ScenarioSpec::ewfs(1);
        assert!(Lhv::new(spec.clone(), vec![0.1; 16]).is_err());
        assert!(Lhv::new(spec.clone(), vec![0.5; 2]).is_err());
        let mut w = vec![0.0; 16];
        w[0] = 1.0 + 5e-10;
        assert!(Lhv::new(spec, w).is_ok());
    }

    #[test]
    fn point_mass_all_plus() {
        let mut w = vec![0.0; 16];
        w[0] = 1.0;
        let m = Lhv::new(ScenarioSpec::ewfs(1), w).unwrap();
        assert_eq!(m.exact_correlators(), [[1.0, 1.0], [1.0, 1.0]]);
        let r = m.run_trial(0, 2, 2, &mut substream(1, "lhv", 0)).unwrap();
        assert_eq!((r.a, r.b, r.c, r.d), (Outcome::Plus, Outcome::Plus, Some(Outcome::Plus), Some(Outcome::Plus)));
    }

    #[test]
    fn uniform_correlators_vanish() {
        let e = exact_correlators(&[1.0 / 16.0; 16]);
        assert!(e.iter().flatten().all(|v| v.abs() < 1e-15));
    }
}
