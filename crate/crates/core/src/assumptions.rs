//! Empirical audits of the assumptions behind the friends' CHSH bound:
//! absoluteness of observed events (AOE, items i–iii), no-superdeterminism
//! (NSD), locality (L) and settings independence of the hidden variable.
//!
//! Every check works on an immutable log. A conditioning cell with fewer
//! than [`MIN_CELL_COUNT`] records never produces a pass or a fail.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::models::{Outcome, RunRecord};

/// Records a conditioning cell needs before it gets a verdict.
pub const MIN_CELL_COUNT: u64 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    NotApplicable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NotApplicable => "not-applicable",
        })
    }
}

impl Verdict {
    fn combine(cells: &[CellCheck]) -> Verdict {
        if cells.iter().any(|c| c.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if cells.iter().any(|c| c.verdict == Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else if cells.is_empty() {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }
}

/// Verdict on one conditioning cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellCheck {
    pub cell: String,
    /// Sample sizes of the distributions compared in this cell.
    pub samples: Vec<u64>,
    pub statistic: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// Verdict on one assumption.
///
/// For agreement checks `statistic` is the agreement frequency and
/// `tolerance` the accepted shortfall from 1 (always 0). For distance
/// checks `statistic` is the largest TV distance over cells and
/// `tolerance` the bound of that same cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub statistic: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub cells: Vec<CellCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    fn from_cells(cells: Vec<CellCheck>) -> Self {
        let worst = cells
            .iter()
            .filter(|c| c.verdict != Verdict::Inconclusive)
            .max_by(|a, b| a.statistic.total_cmp(&b.statistic));
        let (statistic, tolerance) = worst.map_or((0.0, 0.0), |c| (c.statistic, c.tolerance));
        CheckReport {
            statistic,
            tolerance,
            verdict: Verdict::combine(&cells),
            cells,
            note: None,
        }
    }

    fn without_cells(verdict: Verdict, note: &str) -> Self {
        CheckReport {
            statistic: 0.0,
            tolerance: 0.0,
            verdict,
            cells: Vec::new(),
            note: Some(note.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

/// The three AOE items.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AoeReport {
    /// C and D are defined on every trial.
    pub defined: CheckReport,
    /// A = C whenever X = 1.
    pub alice_agrees: CheckReport,
    /// B = D whenever Y = 1.
    pub bob_agrees: CheckReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub aoe: AoeReport,
    pub nsd: CheckReport,
    pub locality: CheckReport,
    pub settings_independence: CheckReport,
    pub k_sigma: f64,
    pub min_cell_count: u64,
}

impl AssumptionReport {
    /// Named checks in report order.
    pub fn checks(&self) -> [(&'static str, &CheckReport); 6] {
        [
            ("aoe-i", &self.aoe.defined),
            ("aoe-ii", &self.aoe.alice_agrees),
            ("aoe-iii", &self.aoe.bob_agrees),
            ("nsd", &self.nsd),
            ("locality", &self.locality),
            ("settings-independence", &self.settings_independence),
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.passed())
    }

    /// Does any assumption that feeds the friends' CHSH bound fail
    /// (AOE ii/iii, NSD, L)?
    pub fn bound_assumption_fails(&self) -> bool {
        [&self.aoe.alice_agrees, &self.aoe.bob_agrees, &self.nsd, &self.locality]
            .iter()
            .any(|c| c.failed())
    }
}

/// Run every check.
pub fn check_all(records: &[RunRecord], k: f64) -> AssumptionReport {
    AssumptionReport {
        aoe: check_aoe(records),
        nsd: check_nsd(records, k),
        locality: check_locality(records, k),
        settings_independence: check_settings_independence(records, k),
        k_sigma: k,
        min_cell_count: MIN_CELL_COUNT,
    }
}

fn agreement(cell: &str, n: u64, agree: u64) -> CheckReport {
    let statistic = if n == 0 { 0.0 } else { agree as f64 / n as f64 };
    let verdict = if n < MIN_CELL_COUNT {
        Verdict::Inconclusive
    } else if agree == n {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let mut report = CheckReport::from_cells(vec![CellCheck {
        cell: cell.to_string(),
        samples: vec![n],
        statistic,
        tolerance: 0.0,
        verdict,
    }]);
    // agreement is a frequency even when the cell is sparse
    report.statistic = statistic;
    report
}

/// AOE items i–iii. Items ii and iii use the records where the friend's
/// result is defined. Logs without any friend results are not applicable.
pub fn check_aoe(records: &[RunRecord]) -> AoeReport {
    if no_friends(records) {
        let na = || CheckReport::without_cells(Verdict::NotApplicable, NO_FRIENDS);
        return AoeReport {
            defined: na(),
            alice_agrees: na(),
            bob_agrees: na(),
        };
    }
    let n = records.len() as u64;
    let defined = records.iter().filter(|r| r.c.is_some() && r.d.is_some()).count() as u64;

    let (mut na, mut agree_a, mut nb, mut agree_b) = (0, 0, 0, 0);
    for r in records {
        if r.x == 1 {
            if let Some(c) = r.c {
                na += 1;
                agree_a += u64::from(c == r.a);
            }
        }
        if r.y == 1 {
            if let Some(d) = r.d {
                nb += 1;
                agree_b += u64::from(d == r.b);
            }
        }
    }
    AoeReport {
        defined: agreement("all trials", n, defined),
        alice_agrees: agreement("X=1", na, agree_a),
        bob_agrees: agreement("Y=1", nb, agree_b),
    }
}

/// Empirical distribution over `bins` categories.
#[derive(Clone, Debug)]
struct Histogram {
    counts: Vec<u64>,
    total: u64,
}

impl Histogram {
    fn new(bins: usize) -> Self {
        Histogram {
            counts: vec![0; bins],
            total: 0,
        }
    }

    fn add(&mut self, bin: usize) {
        self.counts[bin] += 1;
        self.total += 1;
    }

    fn merge(&mut self, other: &Histogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
    }

    fn freq(&self, bin: usize) -> f64 {
        self.counts[bin] as f64 / self.total as f64
    }
}

fn tv_distance(p: &Histogram, q: &Histogram) -> f64 {
    0.5 * (0..p.counts.len()).map(|i| (p.freq(i) - q.freq(i)).abs()).sum::<f64>()
}

/// Compare each cell's distribution with the pooled one. The bound is
/// `k/2 · Σ_o √(q_o(1−q_o)(1/n_cell + 1/n_pool))`, `q` the pooled
/// frequencies.
fn against_pool(cells: &BTreeMap<(u8, u8), Histogram>, bins: usize, k: f64) -> Vec<CellCheck> {
    let mut pool = Histogram::new(bins);
    cells.values().for_each(|h| pool.merge(h));
    cells
        .iter()
        .map(|(&(x, y), h)| {
            let cell = format!("X={x},Y={y}");
            if h.total < MIN_CELL_COUNT {
                return CellCheck {
                    cell,
                    samples: vec![h.total, pool.total],
                    statistic: if h.total == 0 { 0.0 } else { tv_distance(h, &pool) },
                    tolerance: 0.0,
                    verdict: Verdict::Inconclusive,
                };
            }
            let scale = 1.0 / h.total as f64 + 1.0 / pool.total as f64;
            let tolerance = 0.5
                * k
                * (0..bins)
                    .map(|i| {
                        let q = pool.freq(i);
                        (q * (1.0 - q) * scale).sqrt()
                    })
                    .sum::<f64>();
            let statistic = tv_distance(h, &pool);
            CellCheck {
                cell,
                samples: vec![h.total, pool.total],
                statistic,
                tolerance,
                verdict: if statistic <= tolerance + 1e-12 { Verdict::Pass } else { Verdict::Fail },
            }
        })
        .collect()
}

fn all_setting_pairs(bins: usize) -> BTreeMap<(u8, u8), Histogram> {
    [(1, 1), (1, 2), (2, 1), (2, 2)]
        .into_iter()
        .map(|k| (k, Histogram::new(bins)))
        .collect()
}

const NO_FRIENDS: &str = "no friend results in the log";

fn no_friends(records: &[RunRecord]) -> bool {
    !records.is_empty() && records.iter().all(|r| r.c.is_none() && r.d.is_none())
}

/// Verdict for logs where the friends' results are not all defined.
fn undefined_friends(records: &[RunRecord]) -> Option<CheckReport> {
    if no_friends(records) {
        Some(CheckReport::without_cells(Verdict::NotApplicable, NO_FRIENDS))
    } else if records.iter().any(|r| r.c.is_none() || r.d.is_none()) {
        Some(CheckReport::without_cells(Verdict::Inconclusive, "C or D undefined on some trials"))
    } else {
        None
    }
}

/// NSD: `P(C, D | x, y)` against the distribution pooled over settings.
pub fn check_nsd(records: &[RunRecord], k: f64) -> CheckReport {
    if let Some(report) = undefined_friends(records) {
        return report;
    }
    let mut cells = all_setting_pairs(4);
    for r in records {
        let (Some(c), Some(d)) = (r.c, r.d) else { unreachable!() };
        if let Some(h) = cells.get_mut(&(r.x, r.y)) {
            h.add(c.index() * 2 + d.index());
        }
    }
    CheckReport::from_cells(against_pool(&cells, 4, k))
}

/// Binary comparison `|p₁ − p₂|` with bound `k·√(p(1−p)(1/n₁ + 1/n₂))`,
/// `p` pooled.
fn two_sample(cell: String, (k1, n1): (u64, u64), (k2, n2): (u64, u64), k: f64) -> Option<CellCheck> {
    if n1 == 0 && n2 == 0 {
        return None;
    }
    let samples = vec![n1, n2];
    if n1 < MIN_CELL_COUNT || n2 < MIN_CELL_COUNT {
        let statistic = if n1 > 0 && n2 > 0 {
            (k1 as f64 / n1 as f64 - k2 as f64 / n2 as f64).abs()
        } else {
            0.0
        };
        return Some(CellCheck {
            cell,
            samples,
            statistic,
            tolerance: 0.0,
            verdict: Verdict::Inconclusive,
        });
    }
    let (p1, p2) = (k1 as f64 / n1 as f64, k2 as f64 / n2 as f64);
    let p = (k1 + k2) as f64 / (n1 + n2) as f64;
    let tolerance = k * (p * (1.0 - p) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
    let statistic = (p1 - p2).abs();
    Some(CellCheck {
        cell,
        samples,
        statistic,
        tolerance,
        verdict: if statistic <= tolerance + 1e-12 { Verdict::Pass } else { Verdict::Fail },
    })
}

/// L: `P(A | C, D, X, Y=1)` against `P(A | C, D, X, Y=2)`, and the same
/// for B under a change of X. Cells never observed are skipped.
pub fn check_locality(records: &[RunRecord], k: f64) -> CheckReport {
    if let Some(report) = undefined_friends(records) {
        return report;
    }
    // [c][d][own setting][distant setting] -> (plus count, total)
    let mut alice = [[[[(0u64, 0u64); 2]; 2]; 2]; 2];
    let mut bob = alice;
    for r in records {
        let (Some(c), Some(d)) = (r.c, r.d) else { unreachable!() };
        if !(1..=2).contains(&r.x) || !(1..=2).contains(&r.y) {
            continue;
        }
        let (xi, yi) = (usize::from(r.x - 1), usize::from(r.y - 1));
        let ea = &mut alice[c.index()][d.index()][xi][yi];
        ea.0 += u64::from(r.a == Outcome::Plus);
        ea.1 += 1;
        let eb = &mut bob[c.index()][d.index()][yi][xi];
        eb.0 += u64::from(r.b == Outcome::Plus);
        eb.1 += 1;
    }
    let sign = |i: usize| if i == 0 { '+' } else { '-' };
    let mut cells = Vec::new();
    for (party, own, table) in [("A", 'X', &alice), ("B", 'Y', &bob)] {
        for c in 0..2 {
            for d in 0..2 {
                for s in 0..2 {
                    let e = table[c][d][s];
                    let label = format!("{party}|C={},D={},{own}={}", sign(c), sign(d), s + 1);
                    cells.extend(two_sample(label, e[0], e[1], k));
                }
            }
        }
    }
    CheckReport::from_cells(cells)
}

/// Binned hidden-variable distribution per setting pair against the pool.
/// Logs without a hidden-variable payload are not applicable.
pub fn check_settings_independence(records: &[RunRecord], k: f64) -> CheckReport {
    let bins: Vec<Option<(usize, usize)>> = records.iter().map(|r| r.lambda.bin()).collect();
    if bins.iter().all(Option::is_none) {
        return CheckReport::without_cells(Verdict::NotApplicable, "no hidden-variable payload");
    }
    let Some(&Some((_, nbins))) = bins.iter().find(|b| b.is_some()) else { unreachable!() };
    if bins.iter().any(|b| b.map(|(_, n)| n) != Some(nbins)) {
        return CheckReport::without_cells(Verdict::Inconclusive, "inconsistent hidden-variable payloads");
    }
    let mut cells = all_setting_pairs(nbins);
    for (r, b) in records.iter().zip(&bins) {
        if let (Some(h), Some((bin, _))) = (cells.get_mut(&(r.x, r.y)), b) {
            h.add(*bin);
        }
    }
    CheckReport::from_cells(against_pool(&cells, nbins, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::HiddenState;
    use crate::strategy::Strategy;

    fn o(v: bool) -> Outcome {
        if v { Outcome::Plus } else { Outcome::Minus }
    }

    /// 4000 trials cycling the setting pairs; friends and parties from `f`.
    fn log(f: impl Fn(u64, u8, u8) -> (bool, bool, Option<bool>, Option<bool>, HiddenState)) -> Vec<RunRecord> {
        (0..4000u64)
            .map(|t| {
                let (x, y) = ((t % 2) as u8 + 1, ((t / 2) % 2) as u8 + 1);
                let (a, b, c, d, lambda) = f(t, x, y);
                RunRecord { trial: t, x, y, a: o(a), b: o(b), c: c.map(o), d: d.map(o), lambda }
            })
            .collect()
    }

    // pseudo-random but setting-independent bit
    fn bit(t: u64, salt: u64) -> bool {
        (t.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt).count_ones() % 2 == 0
    }

    #[test]
    fn consistent_log_passes_everything() {
        let recs = log(|t, x, y| {
            let (c, d) = (bit(t, 1), bit(t, 2));
            let s = Strategy::from_values(if c { 1 } else { -1 }, 1, if d { 1 } else { -1 }, 1);
            let a = if x == 1 { c } else { true };
            let b = if y == 1 { d } else { true };
            (a, b, Some(c), Some(d), HiddenState::Strategy(s))
        });
        let r = check_all(&recs, 3.0);
        assert!(r.all_pass(), "{r:#?}");
        assert_eq!(r.aoe.alice_agrees.statistic, 1.0);
    }

    #[test]
    fn friend_copying_setting_fails_nsd() {
        let recs = log(|t, x, _| (x == 1, bit(t, 3), Some(x == 1), Some(bit(t, 3)), HiddenState::None));
        let r = check_nsd(&recs, 3.0);
        assert_eq!(r.verdict, Verdict::Fail);
        assert!((r.statistic - 0.5).abs() < 0.05, "{}", r.statistic);
    }

    #[test]
    fn alice_copying_distant_setting_fails_locality() {
        let recs = log(|t, _, y| (y == 1, bit(t, 4), Some(bit(t, 5)), Some(bit(t, 6)), HiddenState::None));
        let r = check_locality(&recs, 3.0);
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.statistic, 1.0);
    }

    #[test]
    fn peeking_hidden_variable_fails_independence() {
        let recs = log(|t, x, _| {
            let id = if x == 1 { 0 } else { 15 };
            (bit(t, 7), bit(t, 8), Some(true), Some(true), HiddenState::Strategy(Strategy::new(id).unwrap()))
        });
        let r = check_settings_independence(&recs, 3.0);
        assert_eq!(r.verdict, Verdict::Fail);
        assert!((r.statistic - 0.5).abs() < 1e-12);
    }

    #[test]
    fn undefined_friends() {
        let recs = log(|t, x, _| (bit(t, 9), bit(t, 10), (x == 1).then_some(bit(t, 9)), Some(true), HiddenState::None));
        let r = check_all(&recs, 3.0);
        assert_eq!(r.aoe.defined.verdict, Verdict::Fail);
        assert_eq!(r.aoe.alice_agrees.verdict, Verdict::Pass);
        assert_eq!(r.nsd.verdict, Verdict::Inconclusive);
        assert_eq!(r.locality.verdict, Verdict::Inconclusive);
        assert_eq!(r.settings_independence.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn logs_without_friends() {
        let recs = log(|t, _, _| (bit(t, 11), bit(t, 12), None, None, HiddenState::None));
        let r = check_all(&recs, 3.0);
        for (_, c) in r.checks() {
            assert_eq!(c.verdict, Verdict::NotApplicable);
        }
    }

    #[test]
    fn sparse_cells_are_inconclusive() {
        let recs: Vec<_> = log(|_, x, _| (x == 1, true, Some(x == 1), Some(true), HiddenState::None))
            .into_iter()
            .take(40)
            .collect();
        let r = check_all(&recs, 3.0);
        for (_, c) in r.checks() {
            assert_ne!(c.verdict, Verdict::Pass);
            assert_ne!(c.verdict, Verdict::Fail);
        }
    }
}
