//! Physical models: given a scenario and a trial's settings, produce one
//! [`RunRecord`].
//!
//! | model        | standard Bell        | EWFS                           |
//! |--------------|----------------------|--------------------------------|
//! | `unitary-qm` | unsupported          | Born rule on the friends' labs |
//! | `collapse`   | nonlocal collapse    | friends collapse the particles |
//! | `toy-theta`  | outcomes set by θ    | friends by θ, Alice/Bob quantum |
//! | `lhv`        | deterministic tables | deterministic tables           |

mod collapse;
mod lhv;
mod toy;
mod unitary;

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

pub use collapse::Collapse;
pub use lhv::{exact_correlators, Lhv};
pub use toy::{ThetaPrior, ToyHiddenState, ToyTheta};
pub use unitary::UnitaryQm;

use crate::error::{Error, Result};
use crate::qcore::{Projector, ProjectiveMeasurement, StateVector};
use crate::scenario::ScenarioSpec;
use crate::strategy::Strategy;

/// A ±1 measurement result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn value(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn from_value(v: i8) -> Option<Self> {
        match v {
            1 => Some(Outcome::Plus),
            -1 => Some(Outcome::Minus),
            _ => None,
        }
    }

    /// Projector index 0 is `+`, 1 is `−`.
    pub(crate) fn from_index(i: usize) -> Result<Self> {
        match i {
            0 => Ok(Outcome::Plus),
            1 => Ok(Outcome::Minus),
            _ => Err(Error::Degenerate(format!(
                "measurement landed in the inconsistent-record subspace (index {i})"
            ))),
        }
    }

    /// 0 for `+`, 1 for `−`.
    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }
}

/// Model-specific hidden data attached to a trial.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum HiddenState {
    None,
    Strategy(Strategy),
    Theta(ToyHiddenState),
}

impl HiddenState {
    /// Coarse binning used by the settings-independence check:
    /// `(bin, bin count)`, or `None` when there is no payload.
    pub fn bin(&self) -> Option<(usize, usize)> {
        match self {
            HiddenState::None => None,
            HiddenState::Strategy(s) => Some((usize::from(s.id()), Strategy::COUNT)),
            HiddenState::Theta(t) => {
                let quadrant = |theta: f64| {
                    ((theta / std::f64::consts::FRAC_PI_4).floor() as usize).min(3)
                };
                Some((quadrant(t.theta1) * 4 + quadrant(t.theta2), 16))
            }
        }
    }

    /// Text form used in the CSV `lambda_tag` column.
    pub fn tag(&self) -> String {
        match self {
            HiddenState::None => String::new(),
            HiddenState::Strategy(s) => format!("s{}", s.id()),
            HiddenState::Theta(t) => format!("t{}:{}", t.theta1, t.theta2),
        }
    }

    pub fn parse_tag(tag: &str) -> Result<Self> {
        let bad = || Error::Log(format!("malformed lambda tag `{tag}`"));
        if tag.is_empty() {
            return Ok(HiddenState::None);
        }
        if let Some(id) = tag.strip_prefix('s') {
            let id: u8 = id.parse().map_err(|_| bad())?;
            return Strategy::new(id).map(HiddenState::Strategy).ok_or_else(bad);
        }
        if let Some(rest) = tag.strip_prefix('t') {
            let (a, b) = rest.split_once(':').ok_or_else(bad)?;
            return Ok(HiddenState::Theta(ToyHiddenState {
                theta1: a.parse().map_err(|_| bad())?,
                theta2: b.parse().map_err(|_| bad())?,
            }));
        }
        Err(bad())
    }
}

/// One experimental trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub trial: u64,
    pub x: u8,
    pub y: u8,
    pub a: Outcome,
    pub b: Outcome,
    /// Charlie's result; `None` when the model assigns no absolute value.
    pub c: Option<Outcome>,
    /// Debbie's result.
    pub d: Option<Outcome>,
    pub lambda: HiddenState,
}

/// Model selector by CLI name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "unitary-qm")]
    UnitaryQm,
    #[serde(rename = "collapse")]
    Collapse,
    #[serde(rename = "toy-theta")]
    ToyTheta,
    #[serde(rename = "lhv")]
    Lhv,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::UnitaryQm,
        ModelKind::Collapse,
        ModelKind::ToyTheta,
        ModelKind::Lhv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::UnitaryQm => "unitary-qm",
            ModelKind::Collapse => "collapse",
            ModelKind::ToyTheta => "toy-theta",
            ModelKind::Lhv => "lhv",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownModel(s.to_string()))
    }
}

/// A model bound to a scenario. Implementations hold no per-trial state.
pub trait PhysicalModel: Send + Sync {
    fn kind(&self) -> ModelKind;

    fn spec(&self) -> &ScenarioSpec;

    /// Run trial `trial` with settings `(x, y)`, drawing only from `rng`.
    fn run_trial(&self, trial: u64, x: u8, y: u8, rng: &mut dyn RngCore) -> Result<RunRecord>;
}

/// Knobs for the models that have any.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelOptions {
    /// Distribution over the 16 strategies for `lhv`; uniform when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhv_weights: Option<Vec<f64>>,
    #[serde(default)]
    pub theta_prior: ThetaPrior,
}

/// Instantiate a model by kind for a scenario.
pub fn build_model(
    kind: ModelKind,
    spec: &ScenarioSpec,
    options: &ModelOptions,
) -> Result<Box<dyn PhysicalModel>> {
    spec.validate()?;
    Ok(match kind {
        ModelKind::UnitaryQm => Box::new(UnitaryQm::new(spec.clone())?),
        ModelKind::Collapse => Box::new(Collapse::new(spec.clone())?),
        ModelKind::ToyTheta => Box::new(ToyTheta::new(spec.clone(), options.theta_prior)?),
        ModelKind::Lhv => {
            let weights = match &options.lhv_weights {
                Some(w) => w.clone(),
                None => vec![1.0 / Strategy::COUNT as f64; Strategy::COUNT],
            };
            Box::new(Lhv::new(spec.clone(), weights)?)
        }
    })
}

/// Joint outcome table `p[i][j] = ⟨s|Pᵢ ⊗ Qⱼ|s⟩` for two commuting
/// measurements acting on disjoint subsystems.
pub(crate) fn joint_table(
    s: &StateVector,
    alice: &[Projector],
    bob: &[Projector],
) -> Result<Vec<Vec<f64>>> {
    let mut products = Vec::with_capacity(alice.len() * bob.len());
    for p in alice {
        for q in bob {
            products.push(Projector::new(p.matrix() * q.matrix())?);
        }
    }
    let probs = ProjectiveMeasurement::new(products)?.probabilities(s)?;
    Ok(probs.chunks(bob.len()).map(<[f64]>::to_vec).collect())
}

/// Exact joint Born table for spin measurements at `(alpha, beta)` on a
/// two-qubit state: `p[a][b]` with index 0 = `+`.
pub(crate) fn spin_joint_table(s: &StateVector, alpha: f64, beta: f64) -> Result<[[f64; 2]; 2]> {
    use crate::qcore::spin_measurement_basis;
    let lift = |angle: f64, target: usize| -> Result<Vec<Projector>> {
        spin_measurement_basis(angle)
            .iter()
            .map(|p| p.lift(&[2, 2], &[target]))
            .collect()
    };
    let t = joint_table(s, &lift(alpha, 0)?, &lift(beta, 1)?)?;
    Ok([[t[0][0], t[0][1]], [t[1][0], t[1][1]]])
}

/// Flatten a 2×2 joint table into sampling weights in `(++, +−, −+, −−)` order.
pub(crate) fn sample_pair(table: &[[f64; 2]; 2], rng: &mut dyn RngCore) -> Result<(Outcome, Outcome)> {
    let w = [table[0][0], table[0][1], table[1][0], table[1][1]];
    let i = crate::qcore::sample_index(&w, rng)?;
    Ok((Outcome::from_index(i / 2)?, Outcome::from_index(i % 2)?))
}

/// Bernoulli outcome with `P(+1) = p_plus`.
pub(crate) fn sample_outcome(p_plus: f64, rng: &mut dyn RngCore) -> Outcome {
    use rand::Rng;
    if rng.gen::<f64>() < p_plus {
        Outcome::Plus
    } else {
        Outcome::Minus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_names_parse() {
        for k in ModelKind::ALL {
            assert_eq!(k.name().parse::<ModelKind>().unwrap(), k);
        }
        assert!(matches!("bohm".parse::<ModelKind>(), Err(Error::UnknownModel(_))));
    }

    #[test]
    fn lambda_tags_round_trip() {
        for h in [
            HiddenState::None,
            HiddenState::Strategy(Strategy::new(13).unwrap()),
            HiddenState::Theta(ToyHiddenState { theta1: 0.1234567891, theta2: 3.0 }),
        ] {
            assert_eq!(HiddenState::parse_tag(&h.tag()).unwrap(), h);
        }
        assert!(HiddenState::parse_tag("q1").is_err());
        assert!(HiddenState::parse_tag("s16").is_err());
    }

    #[test]
    fn theta_bins() {
        let h = HiddenState::Theta(ToyHiddenState { theta1: 0.1, theta2: 3.1 });
        assert_eq!(h.bin(), Some((3, 16)));
        assert_eq!(HiddenState::None.bin(), None);
    }
}
