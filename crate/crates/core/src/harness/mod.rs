//! Seeded campaigns, report files and the command-line front end.
//!
//! A campaign is fully determined by its [`CampaignConfig`]: every output
//! byte is the same across repeated runs and thread counts.

mod campaign;
pub mod cli;
mod compare;
mod config;
mod log;

pub use campaign::{
    analyse, execute, run_campaign, simulate, BoundVerdict, Campaign, CampaignReport, ConfigEcho, Estimate,
};
pub use compare::{compare_models, render_table, ComparisonRow};
pub use config::{parse_measurement, parse_settings, CampaignConfig, CompareConfig, OutputFormat};
pub use log::{read_log, write_log};

use crate::error::Error;

/// Process exit code for an error: 2 for usage and configuration
/// problems, 3 for unwritable outputs, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Output { .. } => 3,
        Error::UnknownModel(_) | Error::UnknownScenario(_) | Error::Config(_) | Error::UnsupportedScenario(_) => 2,
        _ => 1,
    }
}
