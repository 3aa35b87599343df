use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dagbandit::config::{load_config, CheckpointPolicy, ExperimentConfig};
use dagbandit::experiment::{
    compute_oracle, describe_oracle, run_experiment, write_reports, BoundsSpec, RunOptions,
};
use dagbandit::Result;

#[derive(Parser)]
#[command(
    name = "dagbandit",
    version,
    about = "Tsallis-INF learners on DAG bandit games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate every seed and write cumulative and time-averaged regret CSVs.
    Run {
        /// Experiment config (TOML), or `taxation-v1` for the built-in preset.
        config: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print the regret bound on a horizon grid as `T,bound` CSV.
    Bounds {
        /// Inline sizes such as `9,3,3,3`, a bounds spec file or an experiment config.
        spec: String,
        #[arg(long)]
        horizon: Option<u64>,
        /// `log` or a comma-separated list of rounds.
        #[arg(long)]
        checkpoints: Option<String>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the best pure joint action and its value.
    Oracle {
        config: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    horizon: Option<u64>,
    /// Output directory for the CSVs.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run seeds serially on one thread.
    #[arg(long)]
    serial: bool,
    /// `log` or a comma-separated list of rounds.
    #[arg(long)]
    checkpoints: Option<String>,
}

fn load(config: &str, common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = if config == "taxation-v1" && !Path::new(config).exists() {
        ExperimentConfig::taxation_preset(100_000, 20, 7)
    } else {
        load_config(Path::new(config))?
    };
    if let Some(s) = common.seeds {
        cfg.seeds = s.max(1);
    }
    if let Some(t) = common.horizon {
        cfg.horizon = t.max(1);
    }
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
    if let Some(c) = &common.checkpoints {
        cfg.checkpoints = CheckpointPolicy::parse(c)?;
    }
    Ok(cfg)
}

fn options(common: &Common) -> RunOptions {
    RunOptions {
        serial: common.serial,
        workers: None,
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, common } => {
            let cfg = load(&config, &common)?;
            let output = run_experiment(&cfg, &options(&common))?;
            let [cumulative, average] = write_reports(&output.report, &cfg.out)?;
            println!("{}", output.summary());
            println!("wrote {} and {}", cumulative.display(), average.display());
        }
        Command::Bounds {
            spec,
            horizon,
            checkpoints,
            out,
        } => {
            let text = if Path::new(&spec).is_file() {
                std::fs::read_to_string(&spec)?
            } else if spec == "taxation-v1" {
                "9,3,3,3".to_string()
            } else {
                spec
            };
            let mut bounds = BoundsSpec::parse(&text, horizon.unwrap_or(1_000_000))?;
            if let Some(t) = horizon {
                bounds.horizon = t.max(1);
            }
            if let Some(c) = checkpoints {
                bounds.checkpoints = CheckpointPolicy::parse(&c)?;
            }
            match out {
                Some(path) => std::fs::write(path, bounds.csv())?,
                None => print!("{}", bounds.csv()),
            }
        }
        Command::Oracle { config, common } => {
            let cfg = load(&config, &common)?;
            let oracle = compute_oracle(&cfg, &options(&common))?;
            print!("{}", describe_oracle(&cfg, &oracle));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
