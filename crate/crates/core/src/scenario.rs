//! Declarative experiment descriptions and setting sampling.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{brukner_state, singlet, LabKind, StateVector};
use crate::rng::{substream, SETTINGS_STREAM};

/// Which concrete realization of the two-party experiment is run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// Particles sent directly to Alice and Bob, who measure spin.
    #[serde(rename = "bell")]
    StandardBell,
    /// Friends measure z inside sealed labs; superobservers then measure the labs.
    #[serde(rename = "ewfs")]
    BruknerEwfs,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::StandardBell => "bell",
            ScenarioKind::BruknerEwfs => "ewfs",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bell" => Ok(ScenarioKind::StandardBell),
            "ewfs" => Ok(ScenarioKind::BruknerEwfs),
            other => Err(Error::UnknownScenario(other.to_string())),
        }
    }
}

/// One measurement option of a party.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measurement {
    /// Superobserver measurement on a whole lab.
    Lab(LabKind),
    /// Spin measurement at an angle (radians from +z, x–z plane).
    Spin(f64),
}

impl Measurement {
    /// Equivalent spin angle on the particle: Z ↦ 0, X ↦ π/2.
    pub fn angle(self) -> f64 {
        match self {
            Measurement::Lab(LabKind::Z) => 0.0,
            Measurement::Lab(LabKind::X) => FRAC_PI_2,
            Measurement::Spin(a) => a,
        }
    }
}

/// Two-particle state handed to the labs (or to Alice and Bob).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreparedState {
    Brukner,
    Singlet,
}

impl PreparedState {
    pub fn state(self) -> StateVector {
        match self {
            PreparedState::Brukner => brukner_state(),
            PreparedState::Singlet => singlet(),
        }
    }
}

/// Full description of an experiment. The friends always measure along z.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub alice_settings: Vec<Measurement>,
    pub bob_settings: Vec<Measurement>,
    pub state: PreparedState,
    pub trials: u64,
}

impl ScenarioSpec {
    /// Lab-basis scenario: Alice and Bob each choose {1: Z, 2: X} on the
    /// Brukner state.
    pub fn ewfs(trials: u64) -> Self {
        ScenarioSpec {
            kind: ScenarioKind::BruknerEwfs,
            alice_settings: vec![Measurement::Lab(LabKind::Z), Measurement::Lab(LabKind::X)],
            bob_settings: vec![Measurement::Lab(LabKind::Z), Measurement::Lab(LabKind::X)],
            state: PreparedState::Brukner,
            trials,
        }
    }

    /// Singlet with the CHSH-optimal angles {0, π/2} × {π/4, 3π/4}.
    pub fn standard_bell(trials: u64) -> Self {
        ScenarioSpec {
            kind: ScenarioKind::StandardBell,
            alice_settings: vec![Measurement::Spin(0.0), Measurement::Spin(FRAC_PI_2)],
            bob_settings: vec![
                Measurement::Spin(FRAC_PI_4),
                Measurement::Spin(3.0 * FRAC_PI_4),
            ],
            state: PreparedState::Singlet,
            trials,
        }
    }

    pub fn default_for(kind: ScenarioKind, trials: u64) -> Self {
        match kind {
            ScenarioKind::StandardBell => Self::standard_bell(trials),
            ScenarioKind::BruknerEwfs => Self::ewfs(trials),
        }
    }

    pub fn with_state(mut self, state: PreparedState) -> Self {
        self.state = state;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        for (who, settings) in [("alice", &self.alice_settings), ("bob", &self.bob_settings)] {
            if settings.len() < 2 {
                return Err(Error::Config(format!("{who} needs at least two settings")));
            }
            if settings.len() > 2 {
                return Err(Error::UnsupportedScenario(format!(
                    "{who} has {} settings; only two-setting scenarios are supported",
                    settings.len()
                )));
            }
            match self.kind {
                ScenarioKind::BruknerEwfs => {
                    if settings[0] != Measurement::Lab(LabKind::Z) {
                        return Err(Error::Config(format!(
                            "{who} setting 1 must be the lab Z measurement in ewfs"
                        )));
                    }
                    if settings.iter().any(|m| !matches!(m, Measurement::Lab(_))) {
                        return Err(Error::Config(format!(
                            "{who} settings must be lab measurements in ewfs"
                        )));
                    }
                }
                ScenarioKind::StandardBell => {
                    if settings.iter().any(|m| !matches!(m, Measurement::Spin(_))) {
                        return Err(Error::Config(format!(
                            "{who} settings must be spin angles in bell"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn alice(&self, x: u8) -> Measurement {
        self.alice_settings[usize::from(x) - 1]
    }

    pub fn bob(&self, y: u8) -> Measurement {
        self.bob_settings[usize::from(y) - 1]
    }
}

/// How setting pairs are chosen per trial. Settings are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum SettingsSampler {
    UniformIid { seed: u64 },
    FixedSequence { pairs: Vec<(u8, u8)> },
}

/// Setting pair `(X, Y)` for a trial; a pure function of the sampler's seed
/// and the trial index.
pub fn sample_settings(
    spec: &ScenarioSpec,
    sampler: &SettingsSampler,
    trial_index: u64,
) -> Result<(u8, u8)> {
    if trial_index >= spec.trials {
        return Err(Error::TrialOutOfRange {
            index: trial_index,
            trials: spec.trials,
        });
    }
    let na = spec.alice_settings.len() as u8;
    let nb = spec.bob_settings.len() as u8;
    match sampler {
        SettingsSampler::UniformIid { seed } => {
            let mut rng = substream(*seed, SETTINGS_STREAM, trial_index);
            Ok((rng.gen_range(1..=na), rng.gen_range(1..=nb)))
        }
        SettingsSampler::FixedSequence { pairs } => {
            if pairs.is_empty() {
                return Err(Error::Config("empty fixed setting sequence".into()));
            }
            let (x, y) = pairs[(trial_index % pairs.len() as u64) as usize];
            if !(1..=na).contains(&x) || !(1..=nb).contains(&y) {
                return Err(Error::Config(format!("setting pair ({x}, {y}) out of range")));
            }
            Ok((x, y))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_sequence_repeats() {
        let spec = ScenarioSpec::ewfs(10);
        let s = SettingsSampler::FixedSequence { pairs: vec![(1, 1)] };
        for t in 0..10 {
            assert_eq!(sample_settings(&spec, &s, t).unwrap(), (1, 1));
        }
    }

    #[test]
    fn out_of_range_index() {
        let spec = ScenarioSpec::ewfs(10);
        let s = SettingsSampler::UniformIid { seed: 1 };
        assert!(matches!(
            sample_settings(&spec, &s, 10),
            Err(Error::TrialOutOfRange { index: 10, trials: 10 })
        ));
    }

    #[test]
    fn uniform_is_deterministic() {
        let spec = ScenarioSpec::ewfs(1000);
        let s = SettingsSampler::UniformIid { seed: 42 };
        for t in [0, 17, 999] {
            assert_eq!(
                sample_settings(&spec, &s, t).unwrap(),
                sample_settings(&spec, &s, t).unwrap()
            );
        }
    }

    #[test]
    fn validation() {
        ScenarioSpec::ewfs(1).validate().unwrap();
        ScenarioSpec::standard_bell(1).validate().unwrap();
        let mut bad = ScenarioSpec::ewfs(1);
        bad.alice_settings.swap(0, 1);
        assert!(bad.validate().is_err());
        let mut three = ScenarioSpec::standard_bell(1);
        three.bob_settings.push(Measurement::Spin(0.3));
        assert!(matches!(three.validate(), Err(Error::UnsupportedScenario(_))));
        assert!(ScenarioSpec::ewfs(0).validate().is_err());
        assert!("bellx".parse::<ScenarioKind>().is_err());
    }
}
