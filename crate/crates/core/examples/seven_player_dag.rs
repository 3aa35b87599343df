//! Seven players, four reward cliques: play order, contexts and the weighted bound.

use dagbandit::config::parse_config;
use dagbandit::experiment::{bound_structure, build_environment, run_experiment, RunOptions};
use dagbandit::game::Game;

fn main() -> dagbandit::Result<()> {
    let config = parse_config(include_str!("../configs/seven_player.toml"))?;
    let graph = &config.graph;
    println!("play order: {:?}", graph.order());
    for p in 0..graph.players() {
        println!("player {p} observes {:?}", graph.parents(p));
    }

    let mut game = Game::new(graph.clone(), 1)?;
    let mut env = build_environment(&config)?;
    env.reset(0);
    let round = game.play_round(&mut env, 1)?;
    println!(
        "round 1: actions {:?}, reward {:.2}",
        round.action.actions(),
        round.reward
    );
    for (p, key) in round.contexts.iter().enumerate() {
        println!("  player {p} acted in context {:?}", key.actions());
    }

    let (sizes, weights) = bound_structure(&config);
    println!("cliques {sizes:?} with weights {weights:?}");
    let out = run_experiment(&config, &RunOptions::default())?;
    println!("{}", out.summary());
    Ok(())
}
