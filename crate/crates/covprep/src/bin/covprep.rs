//! Thin CLI over the library pipelines: load/merge configuration, dispatch
//! to the requested pipeline, and print where the artifacts landed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use covprep::pipeline::{self, PipelineConfig, PipelineKind};

#[derive(Parser, Debug)]
#[command(name = "covprep", version, about = "Run the standard or custom COVID preprocessing pipeline, or compare both")]
struct Cli {
    /// OWID-style input CSV. Required unless given in --config.
    #[arg(long)]
    input: Option<PathBuf>,

    /// JSON config file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,

    /// ISO code of the location to extract (e.g. IND).
    #[arg(long)]
    location: Option<String>,

    /// Which pipeline to run: standard, custom, or compare.
    #[arg(long)]
    pipeline: Option<String>,

    /// Target column to predict.
    #[arg(long)]
    target: Option<String>,

    /// Base RNG seed; the same seed reproduces artifacts byte for byte.
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory for reports and processed data.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn build_config(cli: Cli) -> covprep::Result<PipelineConfig> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => {
            let input = cli.input.clone().ok_or_else(|| {
                covprep::Error::InvalidConfig("--input is required without --config".into())
            })?;
            let location = cli.location.clone().ok_or_else(|| {
                covprep::Error::InvalidConfig("--location is required without --config".into())
            })?;
            let out = cli.out.clone().ok_or_else(|| {
                covprep::Error::InvalidConfig("--out is required without --config".into())
            })?;
            let stub = serde_json::json!({
                "input": input, "location": location, "out": out,
            });
            serde_json::from_value(stub)?
        }
    };
    if let Some(v) = cli.input {
        cfg.input = v;
    }
    if let Some(v) = cli.location {
        cfg.location = v;
    }
    if let Some(v) = cli.pipeline {
        cfg.pipeline = v.parse::<PipelineKind>()?;
    }
    if let Some(v) = cli.target {
        cfg.target = v;
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = cli.out {
        cfg.out = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cfg: &PipelineConfig) -> covprep::Result<()> {
    match cfg.pipeline {
        PipelineKind::Standard => {
            let art = pipeline::run_standard(cfg)?;
            println!(
                "standard pipeline done: {} features selected, artifacts in {}",
                art.selected_features.len(),
                art.out_dir.display()
            );
        }
        PipelineKind::Custom => {
            let art = pipeline::run_custom(cfg)?;
            println!(
                "custom pipeline done: {} features selected, artifacts in {}",
                art.selected_features.len(),
                art.out_dir.display()
            );
        }
        PipelineKind::Compare => {
            pipeline::compare(cfg)?;
            println!(
                "comparison done: see {} and {}",
                cfg.out.join("compare.csv").display(),
                cfg.out.join("compare.md").display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("covprep: configuration error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = run(&cfg) {
        eprintln!("covprep: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
