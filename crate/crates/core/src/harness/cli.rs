//! Command-line front end used by the `ewfs` binary.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::Parser;

use super::campaign::{execute, Campaign};
use super::compare::{compare_models, render_table};
use super::config::{CampaignConfig, CompareConfig, OutputFormat};
use super::exit_code;
use crate::error::{Error, Result};
use crate::inequality::DEFAULT_K_SIGMA;
use crate::models::ModelKind;
use crate::scenario::{PreparedState, ScenarioKind};

#[derive(Debug, Parser)]
#[command(name = "ewfs", version, about = "Run Bell and extended Wigner's-friend campaigns")]
pub struct Cli {
    #[arg(long, value_parser = PossibleValuesParser::new(["bell", "ewfs"])
        .map(|s| s.parse::<ScenarioKind>().expect("listed value")))]
    pub scenario: Option<ScenarioKind>,

    #[arg(long, value_parser = PossibleValuesParser::new(ModelKind::ALL.map(ModelKind::name))
        .map(|s| s.parse::<ModelKind>().expect("listed value")))]
    pub model: Option<ModelKind>,

    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Measurement settings `<alice>;<bob>`, e.g. `z,x;z,x` or `0,pi/2;pi/4,3pi/4`.
    #[arg(long)]
    pub settings: Option<String>,

    #[arg(long, value_parser = PossibleValuesParser::new(["brukner", "singlet"])
        .map(|s| if s == "brukner" { PreparedState::Brukner } else { PreparedState::Singlet }))]
    pub state: Option<PreparedState>,

    /// Output directory for `runs.csv` and `report.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,

    /// Print the assumption audit.
    #[arg(long)]
    pub check_assumptions: bool,

    /// Compare the campaigns listed in a TOML file.
    #[arg(long, conflicts_with_all = ["scenario", "model", "config"])]
    pub compare: Option<PathBuf>,

    /// Run the campaign described in a TOML file.
    #[arg(long, conflicts_with_all = ["scenario", "model"])]
    pub config: Option<PathBuf>,

    #[arg(long)]
    pub threads: Option<usize>,

    #[arg(long, default_value_t = DEFAULT_K_SIGMA)]
    pub k_sigma: f64,
}

impl Cli {
    /// Campaign described by the flags, or by `--config` with the output
    /// flags layered on top.
    pub fn campaign_config(&self) -> Result<CampaignConfig> {
        let mut config = match &self.config {
            Some(path) => CampaignConfig::load(path)?,
            None => {
                let (Some(scenario), Some(model)) = (self.scenario, self.model) else {
                    return Err(Error::Config(
                        "--scenario and --model are required unless --config or --compare is given".into(),
                    ));
                };
                let mut c = CampaignConfig::new(scenario, model, self.trials, self.seed);
                c.settings = self.settings.clone();
                c.state = self.state;
                c.k_sigma = self.k_sigma;
                c
            }
        };
        if self.out.is_some() {
            config.out_dir = self.out.clone();
        }
        if let Some(f) = self.format {
            config.format = f;
        }
        if self.threads.is_some() {
            config.threads = self.threads;
        }
        config.validate()?;
        Ok(config)
    }
}

fn print_summary(c: &Campaign, assumptions: bool) {
    let r = &c.report;
    println!(
        "{} / {}: {} trials, seed {}",
        r.config_echo.model, r.config_echo.scenario, r.config_echo.trials, r.config_echo.seed
    );
    for (k, e) in &r.expectations {
        println!("  {k} = {:+.4} ± {:.4}", e.value, e.standard_error);
    }
    println!("  S = {:.4} ± {:.4}  [{}]", r.s, r.se, r.verdict.variant);
    println!(
        "  verdict: {} (bound {} + {}·SE), local polytope member: {}",
        if r.verdict.violated { "violated" } else { "within bound" },
        r.verdict.bound,
        r.verdict.k_sigma,
        r.verdict.local_polytope_member
    );
    if assumptions {
        for (name, check) in c.assumptions.checks() {
            println!(
                "  {name:<22} {:<14} statistic {:.4} tolerance {:.4}",
                check.verdict.to_string(),
                check.statistic,
                check.tolerance
            );
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(path) = &cli.compare {
        let mut configs = CompareConfig::load(path)?.campaign;
        if cli.threads.is_some() {
            configs.iter_mut().for_each(|c| c.threads = cli.threads);
        }
        let rows = compare_models(&configs)?;
        print!("{}", render_table(&rows));
        if let Some(dir) = &cli.out {
            let out_err = |source| Error::Output {
                path: dir.display().to_string(),
                source,
            };
            fs::create_dir_all(dir).map_err(out_err)?;
            let mut text = serde_json::to_string_pretty(&rows).expect("rows serialize");
            text.push('\n');
            fs::write(dir.join("comparison.json"), text).map_err(out_err)?;
        }
        return Ok(());
    }
    let config = cli.campaign_config()?;
    let (campaign, written) = execute(&config)?;
    print_summary(&campaign, cli.check_assumptions);
    for path in written {
        println!("  wrote {}", path.display());
    }
    Ok(())
}

/// Parse arguments, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
