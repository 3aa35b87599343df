//! The taxation game: one step by hand, then a short multi-seed experiment.

use dagbandit::config::ExperimentConfig;
use dagbandit::experiment::{average_csv, run_experiment, RunOptions};
use dagbandit::taxation::{build_experiment, collected_tax};

fn main() -> dagbandit::Result<()> {
    let exp = build_experiment();
    println!("action sizes {:?}", exp.graph.action_sizes());
    println!(
        "tax on 10 at rates (0.1, 0.3): {}",
        collected_tax(10.0, &[14.0], &[0.1, 0.3])
    );

    let mut env = exp.env();
    // Lowest rates, every worker at action 1.
    let step = env.advance(0, &[0, 0, 0])?;
    println!(
        "round 1: taxes {:?}, utilities {:.3?}, reward {:.4}",
        step.tax, step.utility, step.reward
    );
    println!("state after one round: {:?}", env.state());

    let config = ExperimentConfig::taxation_preset(10_000, 4, 7);
    let out = run_experiment(&config, &RunOptions::default())?;
    println!("{}", out.summary());
    print!("{}", average_csv(&out.report));
    Ok(())
}
