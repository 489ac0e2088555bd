//! A campaign from a TOML description, written to disk and read back.
//!
//! cargo run --release --example campaign -- [out-dir]

use std::fs::File;
use std::path::PathBuf;

use ewfs::harness::{execute, read_log, CampaignConfig};

const CONFIG: &str = r#"
scenario = "ewfs"
model = "lhv"
trials = 50000
seed = 7
settings = "z,x;z,x"
format = "both"

[model_options]
lhv_weights = [0.2, 0.0, 0.0, 0.1, 0.0, 0.1, 0.0, 0.0, 0.0, 0.0, 0.1, 0.0, 0.3, 0.0, 0.0, 0.2]
"#;

fn main() -> ewfs::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("ewfs-campaign"));
    let mut config = CampaignConfig::from_toml(CONFIG)?;
    config.out_dir = Some(out.clone());

    let (campaign, written) = execute(&config)?;
    for path in &written {
        println!("wrote {}", path.display());
    }
    let r = &campaign.report;
    println!("S = {:.4} ± {:.4}, violated: {}", r.s, r.se, r.verdict.violated);
    println!("all assumptions pass: {}", campaign.assumptions.all_pass());

    let path = out.join("runs.csv");
    let file = File::open(&path).map_err(|source| ewfs::Error::Output {
        path: path.display().to_string(),
        source,
    })?;
    let back = read_log(file)?;
    println!("read back {} records, identical: {}", back.len(), back == campaign.records);
    Ok(())
}
