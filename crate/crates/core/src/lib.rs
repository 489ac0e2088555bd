//! Simulation and analysis toolkit for extended Wigner's-friend scenarios.

pub mod assumptions;
pub mod error;
pub mod harness;
pub mod inequality;
pub mod models;
pub mod qcore;
pub mod rng;
pub mod scenario;
pub mod strategy;

pub use error::{Error, Result};
