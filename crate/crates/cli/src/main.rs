//! `forge`: generate graph-reasoning datasets, score predictions, check
//! datasets against the exhaustive oracles and summarize them.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use graphforge::dataset::{self, ForgeConfig, SplitConfig, PRESETS};
use graphforge::gdl::{GdlKind, LabelScheme};
use graphforge::generate::SizeClass;
use graphforge::verifier;

#[derive(Parser)]
#[command(name = "forge", version, about = "Procedural graph-reasoning benchmark generator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate dataset splits and a manifest into a directory.
    Generate(GenerateArgs),
    /// Score a predictions file against a dataset split.
    Score {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        predictions: PathBuf,
        /// Where to write the JSON report; printed to stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Re-check every small-graph sample with the exhaustive oracles.
    Validate {
        #[arg(long)]
        dataset: PathBuf,
    },
    /// Print counts, label balance and prompt length for a dataset split.
    Stats {
        #[arg(long)]
        dataset: PathBuf,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct GenerateArgs {
    /// JSON config file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named config.
    #[arg(long, value_parser = PRESETS)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    /// Task names or groups (all, in-domain, ood), comma separated.
    #[arg(long, value_delimiter = ',')]
    tasks: Option<Vec<String>>,
    #[arg(long)]
    gdl: Option<GdlKind>,
    #[arg(long)]
    scheme: Option<LabelScheme>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Size classes, comma separated; the per-task count is divided evenly.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<SizeClass>>,
    /// Samples per task in every split.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    no_traces: bool,
    #[arg(long)]
    no_masks: bool,
}

const DEFAULT_COUNT: usize = 100;

fn build_config(a: &GenerateArgs) -> Result<ForgeConfig> {
    let seed = a.seed.unwrap_or(0);
    let mut cfg = if let Some(path) = &a.config {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
    } else if let Some(name) = &a.preset {
        ForgeConfig::preset(name, seed).context("unknown preset")?
    } else {
        ForgeConfig {
            splits: vec![SplitConfig {
                name: "data".into(),
                tasks: vec!["all".into()],
                count_per_task: DEFAULT_COUNT,
                sizes: vec![SizeClass::Mini, SizeClass::Small],
            }],
            ..ForgeConfig::paper_default(seed)
        }
    };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    for split in &mut cfg.splits {
        if let Some(tasks) = &a.tasks {
            split.tasks = tasks.clone();
        }
        if let Some(sizes) = &a.sizes {
            split.sizes = sizes.clone();
        }
        if let Some(count) = a.count {
            split.count_per_task = count;
        }
    }
    if let Some(gdl) = a.gdl {
        cfg.gdl = gdl;
    }
    if let Some(scheme) = a.scheme {
        cfg.scheme = scheme;
    }
    if let Some(gamma) = a.gamma {
        cfg.gamma = gamma;
    }
    if a.no_traces {
        cfg.include_traces = false;
        cfg.include_masks = false;
    }
    if a.no_masks {
        cfg.include_masks = false;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate(args) => {
            let cfg = build_config(&args)?;
            let manifest = dataset::write_dataset(&cfg, &args.out)?;
            for s in &manifest.splits {
                println!("{}: {} samples -> {}", s.split, s.samples, args.out.join(&s.file).display());
            }
        }
        Command::Score { dataset: path, predictions, report } => {
            let records = dataset::read_records(&path)?;
            let preds =
                fs::read_to_string(&predictions).with_context(|| format!("reading {}", predictions.display()))?;
            let result = verifier::score_run(&records, &preds);
            let text = serde_json::to_string_pretty(&result)?;
            match report {
                Some(p) => {
                    fs::write(&p, text + "\n").with_context(|| format!("writing {}", p.display()))?;
                    println!(
                        "accuracy {:.4} ({}/{}), {} unparseable, {} missing, {} line errors",
                        result.overall.accuracy,
                        result.overall.correct,
                        result.overall.total,
                        result.overall.unparseable,
                        result.missing_ids.len(),
                        result.line_errors.len()
                    );
                }
                None => println!("{text}"),
            }
        }
        Command::Validate { dataset: path } => {
            let records = dataset::read_records(&path)?;
            let report = dataset::validate_records(&records);
            if report.checked == 0 {
                println!("no checkable samples (the oracle needs graphs of at most 8 nodes)");
                return Ok(ExitCode::SUCCESS);
            }
            for (task, a) in &report.per_task {
                println!("{task}: {}/{} agree", a.agree, a.checked);
            }
            println!("checked {}, skipped {} larger graphs", report.checked, report.skipped);
            if !report.failures.is_empty() {
                for (id, why) in &report.failures {
                    eprintln!("disagreement {id}: {why}");
                }
                bail!("{} samples disagree with the oracle", report.failures.len());
            }
        }
        Command::Stats { dataset: path, json } => {
            let records = dataset::read_records(&path)?;
            let stats = dataset::stats(&records);
            if json {
                println!("{}", serde_json::to_string_pretty(&stats)?);
            } else {
                println!("{stats}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
