use serde::{Deserialize, Serialize};

use super::simplex::{solve, LpSolution};
use super::BehaviorTable;
use crate::error::{Error, Result};
use crate::strategy::Strategy;

/// Why a table is outside the local set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonMembership {
    /// A party's marginal depends on the distant setting.
    Signaling,
    /// No mixture of deterministic strategies reproduces the table.
    OutsidePolytope,
}

/// Tolerances for the membership decision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipOptions {
    /// Largest accepted L∞ distance to the closest strategy mixture.
    pub tolerance: f64,
    /// Largest accepted dependence of a marginal on the distant setting.
    pub signaling_tolerance: f64,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        MembershipOptions {
            tolerance: 1e-7,
            signaling_tolerance: 1e-6,
        }
    }
}

impl MembershipOptions {
    /// Tolerances scaled to sampling noise: `k` binomial standard errors
    /// (worst case `p = 1/2`) of the sparsest cell.
    pub fn statistical(table: &BehaviorTable, k: f64) -> Self {
        match table.min_trials() {
            Some(n) if n > 0 => {
                let n = n as f64;
                MembershipOptions {
                    tolerance: k * 0.5 / n.sqrt(),
                    signaling_tolerance: k * 0.5 * (2.0 / n).sqrt(),
                }
            }
            _ => MembershipOptions::default(),
        }
    }
}

/// Local-polytope membership verdict with its certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeVerdict {
    pub member: bool,
    pub cause: Option<NonMembership>,
    /// L∞ distance from the table to the closest strategy mixture.
    pub residual: f64,
    /// Largest marginal shift under a change of the distant setting.
    pub signaling_gap: f64,
    /// Weights over the 16 strategies reproducing the table (members only).
    pub weights: Option<Vec<f64>>,
    pub options: MembershipOptions,
}

/// `max |P(a|x,y) − P(a|x,y')|` over both parties.
pub fn signaling_gap(table: &BehaviorTable) -> f64 {
    let mut gap: f64 = 0.0;
    for s in 1..=2u8 {
        for v in [1i8, -1] {
            gap = gap.max((table.alice_marginal(s, 1, v) - table.alice_marginal(s, 2, v)).abs());
            gap = gap.max((table.bob_marginal(1, s, v) - table.bob_marginal(2, s, v)).abs());
        }
    }
    gap
}

/// Closest mixture of deterministic strategies in L∞ norm:
/// minimize `t` subject to `|Σ_λ w_λ D_λ(c) − P(c)| ≤ t` on every cell
/// `c = (x, y, a, b)`, `Σ w = 1`, `w ≥ 0`.
pub fn closest_local_mixture(table: &BehaviorTable) -> (f64, Vec<f64>) {
    let strategies: Vec<Strategy> = Strategy::all().collect();
    let mut cells = Vec::with_capacity(16);
    for x in 1..=2u8 {
        for y in 1..=2u8 {
            for a in [1i8, -1] {
                for b in [1i8, -1] {
                    cells.push((x, y, a, b));
                }
            }
        }
    }
    let nw = strategies.len();
    let nc = cells.len();
    // variables: w (16), t, upper slacks (16), lower slacks (16)
    let nvars = nw + 1 + 2 * nc;
    let t_col = nw;
    let mut rows = Vec::with_capacity(2 * nc + 1);
    let mut rhs = Vec::with_capacity(2 * nc + 1);
    for (ci, &(x, y, a, b)) in cells.iter().enumerate() {
        let p = table.p(x, y, a, b);
        let mut base = vec![0.0; nvars];
        for (j, s) in strategies.iter().enumerate() {
            if s.a(x) == a && s.b(y) == b {
                base[j] = 1.0;
            }
        }
        let mut upper = base.clone();
        upper[t_col] = -1.0;
        upper[nw + 1 + ci] = 1.0;
        rows.push(upper);
        rhs.push(p);
        let mut lower = base;
        lower[t_col] = 1.0;
        lower[nw + 1 + nc + ci] = -1.0;
        rows.push(lower);
        rhs.push(p);
    }
    let mut norm = vec![0.0; nvars];
    norm[..nw].iter_mut().for_each(|v| *v = 1.0);
    rows.push(norm);
    rhs.push(1.0);

    let mut cost = vec![0.0; nvars];
    cost[t_col] = 1.0;
    match solve(&rows, &rhs, &cost, 1e-9) {
        LpSolution::Optimal { x, objective } => (objective.max(0.0), x[..nw].to_vec()),
        // t large enough is always feasible and t ≥ 0 bounds the objective
        other => unreachable!("closest-mixture LP is always solvable: {other:?}"),
    }
}

/// Membership at the given tolerances.
pub fn local_polytope_membership(
    table: &BehaviorTable,
    options: MembershipOptions,
) -> Result<PolytopeVerdict> {
    if let Some(&(x, y)) = table.empty_cells().first() {
        return Err(Error::EmptyCell { x, y });
    }
    let gap = signaling_gap(table);
    let (residual, weights) = closest_local_mixture(table);
    let (member, cause) = if gap > options.signaling_tolerance {
        (false, Some(NonMembership::Signaling))
    } else if residual > options.tolerance {
        (false, Some(NonMembership::OutsidePolytope))
    } else {
        (true, None)
    };
    Ok(PolytopeVerdict {
        member,
        cause,
        residual,
        signaling_gap: gap,
        weights: member.then_some(weights),
        options,
    })
}

/// Does a joint distribution `p(A₁, A₂, B₁, B₂)` reproduce the table
/// (tolerance 1e-7, no-signaling within 1e-6)?
pub fn local_polytope_feasible(table: &BehaviorTable) -> Result<PolytopeVerdict> {
    local_polytope_membership(table, MembershipOptions::default())
}
