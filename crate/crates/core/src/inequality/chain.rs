//! Audit of the chain that turns the four-observer CHSH expression at
//! `X = Y = 2` into the Alice–Bob CHSH expression:
//!
//! ```text
//! ⟨C₂D₂⟩ =NSD= ⟨C₁D₁⟩ =AOE= ⟨A₁B₁⟩
//! ⟨C₂B₂⟩ =L,NSD= ⟨C₁B₂⟩ =AOE= ⟨A₁B₂⟩
//! ⟨A₂D₂⟩ =L,NSD= ⟨A₂D₁⟩ =AOE= ⟨A₂B₁⟩
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{Outcome, RunRecord};

/// Which observer's result enters a correlator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Observer {
    Alice,
    Bob,
    Charlie,
    Debbie,
}

impl Observer {
    fn value(self, r: &RunRecord) -> Option<i8> {
        match self {
            Observer::Alice => Some(r.a),
            Observer::Bob => Some(r.b),
            Observer::Charlie => r.c,
            Observer::Debbie => r.d,
        }
        .map(Outcome::value)
    }

    fn letter(self) -> char {
        match self {
            Observer::Alice => 'A',
            Observer::Bob => 'B',
            Observer::Charlie => 'C',
            Observer::Debbie => 'D',
        }
    }
}

/// Empirical `⟨first · second | X = x, Y = y⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correlator {
    pub label: String,
    pub value: f64,
    pub standard_error: f64,
    pub trials: u64,
}

/// Correlator of two observers' results on the records with settings `(x, y)`.
pub fn correlator(records: &[RunRecord], first: Observer, second: Observer, x: u8, y: u8) -> Result<Correlator> {
    let mut sum = 0i64;
    let mut n = 0u64;
    for r in records.iter().filter(|r| r.x == x && r.y == y) {
        let (Some(u), Some(v)) = (first.value(r), second.value(r)) else {
            return Err(Error::Log(format!(
                "trial {} lacks a defined {} or {} result",
                r.trial,
                first.letter(),
                second.letter()
            )));
        };
        sum += i64::from(u * v);
        n += 1;
    }
    let label = format!("<{}{}|X={x},Y={y}>", first.letter(), second.letter());
    if n == 0 {
        return Err(Error::MissingCoverage(format!("no trials for {label}")));
    }
    let value = sum as f64 / n as f64;
    Ok(Correlator {
        label,
        value,
        standard_error: ((1.0 - value * value).max(0.0) / n as f64).sqrt(),
        trials: n,
    })
}

/// One identification step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    /// Assumptions licensing the step, e.g. `"NSD"` or `"AOE"`.
    pub justification: String,
    pub left: Correlator,
    pub right: Correlator,
    pub delta: f64,
    pub standard_error: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub steps: Vec<ChainStep>,
    /// `⟨C₂D₂⟩ + ⟨C₂B₂⟩ + ⟨A₂D₂⟩ − ⟨A₂B₂⟩`, bounded by 2 whenever all four
    /// results exist jointly.
    pub four_observer_chsh: f64,
    pub k_sigma: f64,
}

impl ChainReport {
    pub fn all_hold(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }

    /// Steps licensed by AOE (friend ↔ superobserver substitution).
    pub fn aoe_steps(&self) -> impl Iterator<Item = &ChainStep> {
        self.steps.iter().filter(|s| s.justification == "AOE")
    }

    pub fn max_aoe_gap(&self) -> f64 {
        self.aoe_steps().map(|s| s.delta.abs()).fold(0.0, f64::max)
    }
}

fn step(justification: &str, left: Correlator, right: Correlator, k: f64) -> ChainStep {
    let delta = left.value - right.value;
    let standard_error = left.standard_error.hypot(right.standard_error);
    let holds = delta.abs() <= k * standard_error + 1e-12;
    ChainStep {
        justification: justification.to_string(),
        left,
        right,
        delta,
        standard_error,
        holds,
    }
}

/// Check each identification within `k` combined standard errors.
pub fn verify_derivation_chain(records: &[RunRecord], k: f64) -> Result<ChainReport> {
    use Observer::*;
    let corr = |p, q, x, y| correlator(records, p, q, x, y);

    let cd22 = corr(Charlie, Debbie, 2, 2)?;
    let cd11 = corr(Charlie, Debbie, 1, 1)?;
    let ab11 = corr(Alice, Bob, 1, 1)?;
    let cb22 = corr(Charlie, Bob, 2, 2)?;
    let cb12 = corr(Charlie, Bob, 1, 2)?;
    let ab12 = corr(Alice, Bob, 1, 2)?;
    let ad22 = corr(Alice, Debbie, 2, 2)?;
    let ad21 = corr(Alice, Debbie, 2, 1)?;
    let ab21 = corr(Alice, Bob, 2, 1)?;
    let ab22 = corr(Alice, Bob, 2, 2)?;

    let four_observer_chsh = cd22.value + cb22.value + ad22.value - ab22.value;
    let steps = vec![
        step("NSD", cd22, cd11.clone(), k),
        step("AOE", cd11, ab11, k),
        step("L,NSD", cb22, cb12.clone(), k),
        step("AOE", cb12, ab12, k),
        step("L,NSD", ad22, ad21.clone(), k),
        step("AOE", ad21, ab21, k),
    ];
    Ok(ChainReport {
        steps,
        four_observer_chsh,
        k_sigma: k,
    })
}
