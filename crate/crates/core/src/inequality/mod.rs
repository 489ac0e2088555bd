//! Correlation statistics, CHSH evaluation and local-polytope membership.
//!
//! All eight CHSH facets bound the local set by 2; reports compare the
//! largest facet value with that bound and also carry the canonical
//! `E11 + E12 + E21 − E22`.

mod analytic;
mod chain;
mod chsh;
mod polytope;
pub mod simplex;
mod table;

pub use analytic::{analytic_quantum_s, quantum_correlator, AnalyticChsh};
pub use chain::{correlator, verify_derivation_chain, ChainReport, ChainStep, Correlator, Observer};
pub use chsh::{chsh_max_variant, chsh_value, ChshSummary, ChshVariant, CHSH_BOUND};
pub use polytope::{
    closest_local_mixture, local_polytope_feasible, local_polytope_membership, signaling_gap,
    MembershipOptions, NonMembership, PolytopeVerdict,
};
pub use table::{tabulate, BehaviorTable, ExpectationMatrix};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::models::RunRecord;

/// Default number of standard errors for violation and consistency verdicts.
pub const DEFAULT_K_SIGMA: f64 = 3.0;

/// CHSH verdict for one run log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    /// Largest CHSH facet value.
    pub s: f64,
    pub variant: ChshVariant,
    pub s_canonical: f64,
    pub standard_error: f64,
    pub bound: f64,
    pub k_sigma: f64,
    /// `s > bound + k · standard_error`.
    pub violated: bool,
    pub membership: PolytopeVerdict,
}

impl InequalityReport {
    pub fn from_table(table: &BehaviorTable, k_sigma: f64) -> Result<Self> {
        let e = ExpectationMatrix::from_table(table);
        let chsh = ChshSummary::from_expectations(&e)?;
        let options = if table.counts().is_some() {
            MembershipOptions::statistical(table, k_sigma)
        } else {
            MembershipOptions::default()
        };
        let membership = local_polytope_membership(table, options)?;
        Ok(InequalityReport {
            s: chsh.max,
            variant: chsh.variant,
            s_canonical: chsh.canonical,
            standard_error: chsh.standard_error,
            bound: CHSH_BOUND,
            k_sigma,
            violated: chsh.max > CHSH_BOUND + k_sigma * chsh.standard_error,
            membership,
        })
    }
}

/// Tabulate a log and evaluate it.
pub fn evaluate(records: &[RunRecord], k_sigma: f64) -> Result<(BehaviorTable, ExpectationMatrix, InequalityReport)> {
    let table = tabulate(records)?;
    let e = ExpectationMatrix::from_table(&table);
    let report = InequalityReport::from_table(&table, k_sigma)?;
    Ok((table, e, report))
}
