//! A follower keeps one learner per leader action and learns a different best
//! response in each context.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dagbandit::bank::{ContextKey, LearnerBank};

fn main() -> dagbandit::Result<()> {
    // Three follower actions; the leader has two actions.
    let mut bank = LearnerBank::new(1, 3, vec![2])?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let best = [2usize, 0];
    for t in 0..4000 {
        let leader = t % 2;
        let action = bank.act(ContextKey::new(vec![leader]), &mut rng)?;
        bank.update(if action == best[leader] { 1.0 } else { 0.2 })?;
    }
    for (key, learner) in bank.contexts() {
        let mut learner = learner.clone();
        let p = learner.next_strategy()?;
        println!(
            "leader played {:?}: {} rounds, strategy {:.3?}",
            key.actions(),
            learner.rounds() - 1,
            p.probs()
        );
    }
    println!("total rounds: {}", bank.total_rounds());
    Ok(())
}
