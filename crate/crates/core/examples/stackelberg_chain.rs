//! Leader-follower game: pseudo-regret over 20 seeds against the two-player bound.

use dagbandit::config::parse_config;
use dagbandit::experiment::{run_experiment, RunOptions};
use dagbandit::regret::bound_two;

fn main() -> dagbandit::Result<()> {
    let config = parse_config(include_str!("../configs/stackelberg.toml"))?;
    let out = run_experiment(&config, &RunOptions::default())?;
    println!("best joint action {:?}", out.oracle.best_action.actions());
    for row in &out.report.rows {
        println!(
            "T = {:>6}  regret = {:>7.1} [{:>7.1}, {:>7.1}]  bound = {:>7.1}",
            row.t, row.cumulative.mean, row.cumulative.lo, row.cumulative.hi, row.bound
        );
    }
    assert_eq!(
        out.report.last().unwrap().bound,
        bound_two(2, 2, config.horizon)
    );
    Ok(())
}
