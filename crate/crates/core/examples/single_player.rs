//! One Tsallis-INF learner against nine Bernoulli arms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dagbandit::regret::bound_single;
use dagbandit::tsallis::TsallisInf;

fn main() -> dagbandit::Result<()> {
    let means = [0.9, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5];
    let horizon = 20_000u64;
    let mut learner = TsallisInf::new(means.len())?;
    let mut policy = ChaCha8Rng::seed_from_u64(1);
    let mut env = ChaCha8Rng::seed_from_u64(2);
    let mut regret = 0.0;
    for t in 1..=horizon {
        let (arm, prob) = learner.act(&mut policy)?;
        let reward = if env.gen::<f64>() < means[arm] {
            1.0
        } else {
            0.0
        };
        learner.observe(arm, prob, reward)?;
        regret += means[0] - means[arm];
        if t.is_power_of_two() || t == horizon {
            println!(
                "t = {t:>6}  pseudo-regret = {regret:>8.1}  bound = {:>8.1}",
                bound_single(9, t)
            );
        }
    }
    let p = learner.next_strategy()?;
    println!("final probability of the best arm: {:.4}", p.prob(0));
    Ok(())
}
