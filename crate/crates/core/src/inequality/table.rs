use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::RunRecord;

/// `P(a, b | x, y)` for binary settings and outcomes, indexed
/// `[x-1][y-1][a][b]` with outcome index 0 = `+1`, 1 = `−1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BehaviorTable {
    probabilities: [[[[f64; 2]; 2]; 2]; 2],
    /// Raw counts when the table came from a log.
    counts: Option<[[[[u64; 2]; 2]; 2]; 2]>,
}

fn check_setting(v: u8, who: &str) -> Result<usize> {
    match v {
        1 | 2 => Ok(usize::from(v) - 1),
        other => Err(Error::Log(format!(
            "{who} setting {other} outside {{1, 2}}; records mix incompatible scenarios"
        ))),
    }
}

impl BehaviorTable {
    /// Exact table from probabilities; each populated cell must sum to 1.
    pub fn from_probabilities(probabilities: [[[[f64; 2]; 2]; 2]; 2]) -> Result<Self> {
        for (x, row) in probabilities.iter().enumerate() {
            for (y, cell) in row.iter().enumerate() {
                let total: f64 = cell.iter().flatten().sum();
                if cell.iter().flatten().any(|p| !(0.0..=1.0 + 1e-12).contains(p))
                    || (total - 1.0).abs() > 1e-9
                {
                    return Err(Error::Contract(format!(
                        "cell ({}, {}) is not a probability distribution (sum {total})",
                        x + 1,
                        y + 1
                    )));
                }
            }
        }
        Ok(BehaviorTable {
            probabilities,
            counts: None,
        })
    }

    /// Table of a deterministic-strategy mixture (or any) from `P(a,b|x,y)` given
    /// as a closure over `(x, y, a, b)` with ±1 values.
    pub fn from_fn(mut f: impl FnMut(u8, u8, i8, i8) -> f64) -> Result<Self> {
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for x in 1..=2u8 {
            for y in 1..=2u8 {
                for (ai, a) in [1i8, -1].into_iter().enumerate() {
                    for (bi, b) in [1i8, -1].into_iter().enumerate() {
                        p[usize::from(x) - 1][usize::from(y) - 1][ai][bi] = f(x, y, a, b);
                    }
                }
            }
        }
        Self::from_probabilities(p)
    }

    pub fn probabilities(&self) -> &[[[[f64; 2]; 2]; 2]; 2] {
        &self.probabilities
    }

    pub fn counts(&self) -> Option<&[[[[u64; 2]; 2]; 2]; 2]> {
        self.counts.as_ref()
    }

    /// `P(a, b | x, y)` with ±1 outcomes and 1-based settings.
    pub fn p(&self, x: u8, y: u8, a: i8, b: i8) -> f64 {
        let oi = |v: i8| usize::from(v < 0);
        self.probabilities[usize::from(x) - 1][usize::from(y) - 1][oi(a)][oi(b)]
    }

    /// Trials behind cell `(x, y)`; `None` for exact tables.
    pub fn trials(&self, x: u8, y: u8) -> Option<u64> {
        self.counts
            .map(|c| c[usize::from(x) - 1][usize::from(y) - 1].iter().flatten().sum())
    }

    pub fn is_empty(&self, x: u8, y: u8) -> bool {
        self.trials(x, y) == Some(0)
    }

    /// All setting pairs with no trials.
    pub fn empty_cells(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for x in 1..=2 {
            for y in 1..=2 {
                if self.is_empty(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Smallest per-cell trial count (`None` for exact tables).
    pub fn min_trials(&self) -> Option<u64> {
        (1..=2u8)
            .flat_map(|x| (1..=2u8).map(move |y| (x, y)))
            .map(|(x, y)| self.trials(x, y))
            .min()
            .flatten()
    }

    /// `P(a | x, y)` for Alice.
    pub fn alice_marginal(&self, x: u8, y: u8, a: i8) -> f64 {
        self.p(x, y, a, 1) + self.p(x, y, a, -1)
    }

    /// `P(b | x, y)` for Bob.
    pub fn bob_marginal(&self, x: u8, y: u8, b: i8) -> f64 {
        self.p(x, y, 1, b) + self.p(x, y, -1, b)
    }
}

/// Count `(A, B)` per setting pair.
pub fn tabulate(records: &[RunRecord]) -> Result<BehaviorTable> {
    let mut counts = [[[[0u64; 2]; 2]; 2]; 2];
    for r in records {
        let x = check_setting(r.x, "alice")?;
        let y = check_setting(r.y, "bob")?;
        counts[x][y][r.a.index()][r.b.index()] += 1;
    }
    let mut probabilities = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            let n: u64 = counts[x][y].iter().flatten().sum();
            if n == 0 {
                continue;
            }
            for a in 0..2 {
                for b in 0..2 {
                    probabilities[x][y][a][b] = counts[x][y][a][b] as f64 / n as f64;
                }
            }
        }
    }
    Ok(BehaviorTable {
        probabilities,
        counts: Some(counts),
    })
}

/// Correlators `E(x, y)` with standard errors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectationMatrix {
    /// `values[x-1][y-1]`; NaN marks an empty cell.
    pub values: [[f64; 2]; 2],
    pub standard_errors: [[f64; 2]; 2],
}

impl ExpectationMatrix {
    /// Exact correlators (zero standard error).
    pub fn exact(values: [[f64; 2]; 2]) -> Self {
        ExpectationMatrix {
            values,
            standard_errors: [[0.0; 2]; 2],
        }
    }

    /// `E = Σ ab P(a,b|x,y)`; standard error `√((1 − E²)/n)` per cell.
    pub fn from_table(table: &BehaviorTable) -> Self {
        let mut values = [[0.0; 2]; 2];
        let mut standard_errors = [[0.0; 2]; 2];
        for x in 1..=2u8 {
            for y in 1..=2u8 {
                let (xi, yi) = (usize::from(x) - 1, usize::from(y) - 1);
                if table.is_empty(x, y) {
                    values[xi][yi] = f64::NAN;
                    standard_errors[xi][yi] = f64::NAN;
                    continue;
                }
                let e = table.p(x, y, 1, 1) - table.p(x, y, 1, -1) - table.p(x, y, -1, 1)
                    + table.p(x, y, -1, -1);
                values[xi][yi] = e;
                if let Some(n) = table.trials(x, y) {
                    standard_errors[xi][yi] = ((1.0 - e * e).max(0.0) / n as f64).sqrt();
                }
            }
        }
        ExpectationMatrix {
            values,
            standard_errors,
        }
    }

    pub fn get(&self, x: u8, y: u8) -> f64 {
        self.values[usize::from(x) - 1][usize::from(y) - 1]
    }

    pub(crate) fn check_populated(&self) -> Result<()> {
        for x in 1..=2u8 {
            for y in 1..=2u8 {
                if !self.get(x, y).is_finite() {
                    return Err(Error::EmptyCell { x, y });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{HiddenState, Outcome};

    fn rec(x: u8, y: u8, a: Outcome, b: Outcome) -> RunRecord {
        RunRecord {
            trial: 0,
            x,
            y,
            a,
            b,
            c: None,
            d: None,
            lambda: HiddenState::None,
        }
    }

    #[test]
    fn one_record_per_cell() {
        let recs: Vec<_> = [(1, 1), (1, 2), (2, 1), (2, 2)]
            .into_iter()
            .map(|(x, y)| rec(x, y, Outcome::Plus, Outcome::Plus))
            .collect();
        let t = tabulate(&recs).unwrap();
        for x in 1..=2 {
            for y in 1..=2 {
                assert_eq!(t.p(x, y, 1, 1), 1.0);
                assert_eq!(t.trials(x, y), Some(1));
            }
        }
        assert!(t.empty_cells().is_empty());
    }

    #[test]
    fn empty_log_flags_every_cell() {
        let t = tabulate(&[]).unwrap();
        assert_eq!(t.empty_cells().len(), 4);
        let e = ExpectationMatrix::from_table(&t);
        assert!(matches!(e.check_populated(), Err(Error::EmptyCell { x: 1, y: 1 })));
    }

    #[test]
    fn foreign_setting_rejected() {
        assert!(tabulate(&[rec(3, 1, Outcome::Plus, Outcome::Minus)]).is_err());
    }

    #[test]
    fn rejects_unnormalized_probabilities() {
        assert!(BehaviorTable::from_fn(|_, _, _, _| 0.3).is_err());
        assert!(BehaviorTable::from_fn(|_, _, _, _| 0.25).is_ok());
    }
}
