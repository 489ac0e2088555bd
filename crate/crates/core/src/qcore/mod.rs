//! Exact finite-dimensional quantum state engine.
//!
//! Pure states up to 16 complex dimensions, unitaries, projective
//! measurements and Born probabilities, plus the specific states and
//! laboratory measurement bases used by the Wigner's-friend scenarios.
//!
//! The 16-dimensional two-lab space is laid out as
//! `particle₁ ⊗ particle₂ ⊗ memory₁ ⊗ memory₂` (see [`EWFS_DIMS`]).

mod lab;
mod measure;
mod operator;
mod state;

pub use lab::{
    brukner_state, entangle_friends, friend_entangler, lab_measurement_basis,
    lab_projectors_on_ewfs, singlet, spin_measurement_basis, LabKind, LabSide,
    brukner_raw_coefficients, EWFS_DIMS,
};
pub use measure::{born_probabilities, project_and_collapse, sample_index, ProjectiveMeasurement};
pub use operator::{embed, CMatrix, Projector, Unitary};
pub use state::{tensor, StateVector};

/// Largest supported total Hilbert-space dimension.
pub const MAX_DIM: usize = 16;

/// Tolerance for structural checks (hermiticity, idempotence, completeness).
pub const STRUCT_TOL: f64 = 1e-10;

/// Tolerance on the norm of normalized states.
pub const NORM_TOL: f64 = 1e-12;
