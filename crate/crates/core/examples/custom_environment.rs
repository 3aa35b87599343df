//! Plugging a hand-written environment into the game engine.

use dagbandit::game::run_game;
use dagbandit::graph::{GameGraph, JointAction};
use dagbandit::regret::{best_pure_joint_action, bound_two, log_checkpoints, pseudo_regret};
use dagbandit::reward::Environment;

/// Coordination game that drifts: matching actions pay, and action 1 pays more after round 500.
struct Drifting;

impl Environment for Drifting {
    fn reset(&mut self, _seed: u64) {}

    fn step(&mut self, round: u64, action: &JointAction) -> dagbandit::Result<f64> {
        let (a, b) = (action[0], action[1]);
        Ok(match (a == b, a, round > 500) {
            (false, _, _) => 0.0,
            (true, 0, _) => 0.6,
            (true, _, false) => 0.3,
            (true, _, true) => 0.9,
        })
    }

    fn is_deterministic(&self) -> bool {
        true
    }
}

fn main() -> dagbandit::Result<()> {
    let graph = GameGraph::chain(vec![2, 2])?;
    let horizon = 5000;
    let oracle = best_pure_joint_action(|| Drifting, &graph, horizon, &[0], u128::MAX, false)?;
    let runs: Vec<_> = (0..8)
        .map(|seed| run_game(&graph, &mut Drifting, horizon, seed).map(|t| t.rewards().to_vec()))
        .collect::<dagbandit::Result<_>>()?;
    let report = pseudo_regret(&runs, &oracle, &log_checkpoints(horizon), |t| {
        bound_two(2, 2, t)
    })?;
    println!("best joint action {:?}", oracle.best_action.actions());
    for row in &report.rows {
        println!(
            "T = {:>5}  regret = {:>8.2}  bound = {:>8.1}",
            row.t, row.cumulative.mean, row.bound
        );
    }
    Ok(())
}
