//! Regret bounds for single players, chains and weighted clique structures.

use dagbandit::experiment::BoundsSpec;
use dagbandit::regret::{bound_clique, bound_dag, bound_single, bound_two};

fn main() -> dagbandit::Result<()> {
    println!("single, A = 9, T = 1e4: {}", bound_single(9, 10_000));
    println!("chain 2x2, T = 1e4: {:.3}", bound_two(2, 2, 10_000));
    println!(
        "clique (9,3,3,3), T = 1e6: {:.3}",
        bound_clique(&[9, 3, 3, 3], 1_000_000)
    );
    let cliques = [vec![2, 2, 2], vec![2, 2], vec![2], vec![2]];
    println!(
        "seven-player DAG, T = 1e6: {:.3}",
        bound_dag(&cliques, &[0.4, 0.3, 0.2, 0.1], 1_000_000)
    );
    print!(
        "{}",
        BoundsSpec::parse(include_str!("../configs/bounds.toml"), 1)?.csv()
    );
    Ok(())
}
