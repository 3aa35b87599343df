//! Single-context Tsallis-INF learner.
//!
//! The strategy at round `t` is `p_j = 4 / (eta * (L_j - x))^2` with
//! `eta = 2 / sqrt(t)`, where `L` holds importance-weighted cumulative losses
//! and `x` is the unique normalizing point below `min_j L_j`. Rewards are
//! converted to losses as `1 - r`.

use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance on `|sum(p) - 1|` at which the solver stops.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Newton iterations before switching to plain bisection.
pub const MAX_NEWTON_ITERATIONS: usize = 50;
/// Bracket width at which bisection stops.
pub const BISECTION_WIDTH: f64 = 1e-12;
/// A warm start closer than this to `min_j L_j` is discarded.
pub const WARM_START_MARGIN: f64 = 1e-12;

/// `eta = 2 * sqrt(1 / t)` for a 1-based round counter.
pub fn learning_rate(t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::ZeroRound);
    }
    Ok(2.0 * (1.0 / t as f64).sqrt())
}

/// Importance-weighted cumulative losses, one entry per arm.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmLosses(Vec<f64>);

impl ArmLosses {
    pub fn zeros(arms: usize) -> Result<Self> {
        if arms == 0 {
            return Err(Error::EmptyLosses);
        }
        Ok(Self(vec![0.0; arms]))
    }

    pub fn from_vec(losses: Vec<f64>) -> Result<Self> {
        if losses.is_empty() {
            return Err(Error::EmptyLosses);
        }
        if let Some((index, &value)) = losses
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidLoss { index, value });
        }
        Ok(Self(losses))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn arms(&self) -> usize {
        self.0.len()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Adds `(1 - reward) / prob` to the played arm.
    pub fn record(&mut self, arm: usize, reward: f64, prob: f64) -> Result<()> {
        if arm >= self.0.len() {
            return Err(Error::ArmOutOfRange {
                arm,
                arms: self.0.len(),
            });
        }
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::RewardOutOfRange(reward));
        }
        // The solver's probabilities may exceed 1 by its own tolerance.
        if !(prob > 0.0 && prob <= 1.0 + NORMALIZATION_TOL) {
            return Err(Error::InvalidProbability(prob));
        }
        self.0[arm] += (1.0 - reward) / prob;
        Ok(())
    }
}

/// Returns a copy of `losses` with the played arm's importance-weighted loss added.
pub fn loss_update(losses: &ArmLosses, arm: usize, reward: f64, prob: f64) -> Result<ArmLosses> {
    let mut next = losses.clone();
    next.record(arm, reward, prob)?;
    Ok(next)
}

/// Unnormalized weights `4 / (eta * (L_j - x))^2`.
pub fn tsallis_weights(losses: &ArmLosses, x: f64, eta: f64) -> Result<Vec<f64>> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidLearningRate(eta));
    }
    let min_loss = losses.min();
    if x.is_nan() || x >= min_loss {
        return Err(Error::FixedPointTooLarge { x, min_loss });
    }
    Ok(losses
        .as_slice()
        .iter()
        .map(|&l| weight(l, x, eta))
        .collect())
}

#[inline]
fn weight(loss: f64, x: f64, eta: f64) -> f64 {
    let d = eta * (loss - x);
    4.0 / (d * d)
}

/// A mixed strategy over one player's arms.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy(Vec<f64>);

impl Strategy {
    pub fn uniform(arms: usize) -> Self {
        Self(vec![1.0 / arms as f64; arms])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn arms(&self) -> usize {
        self.0.len()
    }

    pub fn prob(&self, arm: usize) -> f64 {
        self.0[arm]
    }

    /// Inverse-CDF draw using one `f64` from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (arm, &p) in self.0.iter().enumerate() {
            acc += p;
            if u < acc {
                return arm;
            }
        }
        // u landed in the rounding gap above the accumulated mass.
        self.0.len() - 1
    }
}

/// Output of [`solve_fixed_point`].
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub strategy: Strategy,
    pub fixed_point: f64,
    /// Newton-phase iterations (safeguarded steps included).
    pub iterations: usize,
    /// Whether the bisection fallback ran.
    pub bisected: bool,
}

fn mass(losses: &[f64], x: f64, eta: f64) -> (f64, f64) {
    losses.iter().fold((0.0, 0.0), |(s, s32), &l| {
        let p = weight(l, x, eta);
        (s + p, s32 + p * p.sqrt())
    })
}

/// Finds `x < min_j L_j` with `sum_j 4 / (eta (L_j - x))^2 = 1`.
///
/// Newton steps `x <- x - (sum p - 1) / (eta * sum p^{3/2})` run inside a
/// bracket `[lo, hi)` that always contains the root; a step leaving the
/// bracket is replaced by its midpoint. The sum is convex and increasing in
/// `x`, so `lo = min L - 2 sqrt(A) / eta` (where the sum is at most 1) and
/// `hi = min L` bracket the root from the start.
pub fn solve_fixed_point(losses: &ArmLosses, eta: f64, x_init: f64) -> Result<Solution> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidLearningRate(eta));
    }
    let l = losses.as_slice();
    let min_loss = losses.min();
    let lower = min_loss - 2.0 * (l.len() as f64).sqrt() / eta;

    let mut x = if x_init.is_finite() && x_init < min_loss - WARM_START_MARGIN {
        x_init
    } else {
        lower
    };
    let mut lo = lower;
    let mut hi = min_loss;

    for iterations in 0..=MAX_NEWTON_ITERATIONS {
        let (sum, sum32) = mass(l, x, eta);
        if (sum - 1.0).abs() <= NORMALIZATION_TOL {
            return Ok(finish(l, x, eta, iterations, false));
        }
        if iterations == MAX_NEWTON_ITERATIONS {
            break;
        }
        if sum < 1.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let next = x - (sum - 1.0) / (eta * sum32);
        x = if next.is_finite() && next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
    }

    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mass(l, mid, eta).0 < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // `hi` may still be the pole when the bracket never moved up.
    let x = if hi < min_loss { 0.5 * (lo + hi) } else { lo };
    Ok(finish(l, x, eta, MAX_NEWTON_ITERATIONS, true))
}

fn finish(l: &[f64], x: f64, eta: f64, iterations: usize, bisected: bool) -> Solution {
    let mut probs: Vec<f64> = l.iter().map(|&li| weight(li, x, eta)).collect();
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    Solution {
        strategy: Strategy(probs),
        fixed_point: x,
        iterations,
        bisected,
    }
}

/// One Tsallis-INF learner: cumulative losses, carried fixed point and a
/// round counter.
#[derive(Debug, Clone, PartialEq)]
pub struct TsallisInf {
    losses: ArmLosses,
    fixed_point: f64,
    rounds: u64,
}

impl TsallisInf {
    pub fn new(arms: usize) -> Result<Self> {
        Ok(Self {
            losses: ArmLosses::zeros(arms)?,
            fixed_point: 0.0,
            rounds: 0,
        })
    }

    pub fn losses(&self) -> &ArmLosses {
        &self.losses
    }

    pub fn fixed_point(&self) -> f64 {
        self.fixed_point
    }

    /// Number of strategies produced so far.
    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn arms(&self) -> usize {
        self.losses.arms()
    }

    /// Advances the counter and returns this round's strategy, carrying the
    /// fixed point forward as the next warm start.
    pub fn next_strategy(&mut self) -> Result<Strategy> {
        let eta = learning_rate(self.rounds + 1)?;
        let solution = solve_fixed_point(&self.losses, eta, self.fixed_point)?;
        self.rounds += 1;
        self.fixed_point = solution.fixed_point;
        Ok(solution.strategy)
    }

    /// Samples an arm from the next strategy; returns the arm and its probability.
    pub fn act<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<(usize, f64)> {
        let strategy = self.next_strategy()?;
        let arm = strategy.sample(rng);
        Ok((arm, strategy.prob(arm)))
    }

    pub fn observe(&mut self, arm: usize, prob: f64, reward: f64) -> Result<()> {
        self.losses.record(arm, reward, prob)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::{prop, prop_assert, proptest, ProptestConfig};
    use proptest::strategy::Strategy as PropStrategy;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent root finder: plain bisection on the monotone normalizer.
    fn bisection_oracle(l: &[f64], eta: f64) -> f64 {
        let min = l.iter().copied().fold(f64::INFINITY, f64::min);
        let f = |x: f64| {
            l.iter()
                .map(|&li| 4.0 / (eta * (li - x)).powi(2))
                .sum::<f64>()
                - 1.0
        };
        let mut lo = min - 2.0 * (l.len() as f64).sqrt() / eta - 10.0;
        let mut hi = min - 1e-12;
        assert!(f(lo) <= 0.0 && f(hi) > 0.0);
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn losses(v: &[f64]) -> ArmLosses {
        ArmLosses::from_vec(v.to_vec()).unwrap()
    }

    #[test]
    fn learning_rate_schedule() {
        assert_eq!(learning_rate(1).unwrap(), 2.0);
        assert_eq!(learning_rate(4).unwrap(), 1.0);
        assert_abs_diff_eq!(learning_rate(100).unwrap(), 0.2, epsilon = 1e-15);
        assert_eq!(learning_rate(0), Err(Error::ZeroRound));
    }

    #[test]
    fn weights_examples() {
        let w = tsallis_weights(&losses(&[0.0, 0.0]), -2.0, 2.0).unwrap();
        assert_eq!(w, vec![0.25, 0.25]);
        let w = tsallis_weights(&losses(&[0.0, 0.0, 0.0]), -(3f64.sqrt()), 2.0).unwrap();
        for p in w {
            assert_abs_diff_eq!(p, 1.0 / 3.0, epsilon = 1e-15);
        }
        let w = tsallis_weights(&losses(&[0.0, 1.0]), -1.0, 1.0).unwrap();
        assert_eq!(w, vec![4.0, 1.0]);
    }

    #[test]
    fn weights_reject_bad_warm_start() {
        assert!(matches!(
            tsallis_weights(&losses(&[0.0, 1.0]), 0.0, 1.0),
            Err(Error::FixedPointTooLarge { .. })
        ));
        assert!(tsallis_weights(&losses(&[0.0]), -1.0, 0.0).is_err());
    }

    #[test]
    fn uniform_solutions_have_closed_form() {
        let s = solve_fixed_point(&losses(&[0.0; 3]), 2.0, 0.0).unwrap();
        for &p in s.strategy.probs() {
            assert_abs_diff_eq!(p, 1.0 / 3.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(s.fixed_point, -(3f64.sqrt()), epsilon = 1e-12);

        let s = solve_fixed_point(&losses(&[0.0; 4]), 1.0, -123.0).unwrap();
        for &p in s.strategy.probs() {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(s.fixed_point, -4.0, epsilon = 1e-9);
    }

    #[test]
    fn matches_bisection_oracle_on_spread_losses() {
        let l = [0.0, 3.0, 7.0];
        let eta = 2.0 / 10f64.sqrt();
        let s = solve_fixed_point(&losses(&l), eta, 0.0).unwrap();
        let x = bisection_oracle(&l, eta);
        assert_abs_diff_eq!(s.fixed_point, x, epsilon = 1e-6);
        let expected: Vec<f64> = l.iter().map(|&li| 4.0 / (eta * (li - x)).powi(2)).collect();
        for (p, q) in s.strategy.probs().iter().zip(&expected) {
            assert_abs_diff_eq!(*p, *q, epsilon = 1e-6);
        }
    }

    #[test]
    fn far_warm_start_still_converges() {
        // Reset point is far left of the root; a raw Newton step would jump past min L.
        let mut l = vec![100.0; 64];
        l[5] = 0.0;
        let s = solve_fixed_point(&losses(&l), 2.0, 0.0).unwrap();
        let sum: f64 = s.strategy.probs().iter().sum();
        assert!((sum - 1.0).abs() <= NORMALIZATION_TOL);
        assert!(s.fixed_point < 0.0);
        assert_abs_diff_eq!(s.fixed_point, bisection_oracle(&l, 2.0), epsilon = 1e-6);
    }

    #[test]
    fn loss_update_examples() {
        let l = loss_update(&losses(&[0.0, 0.0]), 0, 1.0, 0.5).unwrap();
        assert_eq!(l.as_slice(), &[0.0, 0.0]);
        let l = loss_update(&losses(&[0.0, 0.0]), 1, 0.25, 0.5).unwrap();
        assert_eq!(l.as_slice(), &[0.0, 1.5]);
        let l = loss_update(&losses(&[2.0, 0.0, 0.0]), 0, 0.0, 1.0 / 3.0).unwrap();
        assert_abs_diff_eq!(l.as_slice()[0], 5.0, epsilon = 1e-12);
        assert_eq!(&l.as_slice()[1..], &[0.0, 0.0]);
    }

    #[test]
    fn loss_update_rejects_contract_violations() {
        let l = losses(&[0.0, 0.0]);
        assert_eq!(
            loss_update(&l, 0, 0.5, 0.0),
            Err(Error::InvalidProbability(0.0))
        );
        assert_eq!(
            loss_update(&l, 0, 1.5, 0.5),
            Err(Error::RewardOutOfRange(1.5))
        );
        assert_eq!(
            loss_update(&l, 0, -0.1, 0.5),
            Err(Error::RewardOutOfRange(-0.1))
        );
        assert!(matches!(
            loss_update(&l, 2, 0.5, 0.5),
            Err(Error::ArmOutOfRange { .. })
        ));
    }

    #[test]
    fn rejects_invalid_losses() {
        assert_eq!(ArmLosses::from_vec(vec![]), Err(Error::EmptyLosses));
        assert!(ArmLosses::from_vec(vec![0.0, -1.0]).is_err());
        assert!(ArmLosses::from_vec(vec![f64::NAN]).is_err());
    }

    #[test]
    fn learner_concentrates_on_rewarded_arm() {
        let mut learner = TsallisInf::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let (arm, p) = learner.act(&mut rng).unwrap();
            let reward = if arm == 0 { 1.0 } else { 0.0 };
            learner.observe(arm, p, reward).unwrap();
        }
        let strategy = learner.clone().next_strategy().unwrap();
        assert!(strategy.prob(0) > 0.9, "{:?}", strategy);
        assert_eq!(learner.rounds(), 100);
    }

    #[test]
    fn sampling_follows_strategy() {
        let s = Strategy(vec![0.2, 0.5, 0.3]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts = [0usize; 3];
        for _ in 0..20_000 {
            counts[s.sample(&mut rng)] += 1;
        }
        for (c, p) in counts.iter().zip(s.probs()) {
            assert!((*c as f64 / 20_000.0 - p).abs() < 0.015);
        }
    }

    fn loss_vectors() -> impl PropStrategy<Value = (Vec<f64>, f64)> {
        (
            prop::collection::vec(0.0f64..100.0, 2..=64),
            prop::sample::select(vec![2.0, 1.0, 0.2]),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn normalized_and_matches_oracle((l, eta) in loss_vectors()) {
            let s = solve_fixed_point(&losses(&l), eta, 0.0).unwrap();
            let sum: f64 = s.strategy.probs().iter().sum();
            prop_assert!((sum - 1.0).abs() <= NORMALIZATION_TOL);
            prop_assert!(s.strategy.probs().iter().all(|&p| p > 0.0));
            prop_assert!(s.fixed_point < losses(&l).min());
            prop_assert!((s.fixed_point - bisection_oracle(&l, eta)).abs() <= 1e-6);
        }

        #[test]
        fn permutation_equivariant((l, eta) in loss_vectors(), rot in 0usize..64) {
            let k = rot % l.len();
            let mut rotated = l.clone();
            rotated.rotate_left(k);
            let a = solve_fixed_point(&losses(&l), eta, 0.0).unwrap();
            let b = solve_fixed_point(&losses(&rotated), eta, 0.0).unwrap();
            let mut expected = a.strategy.probs().to_vec();
            expected.rotate_left(k);
            for (p, q) in b.strategy.probs().iter().zip(&expected) {
                prop_assert!((p - q).abs() <= 1e-9);
            }
        }

        #[test]
        fn raising_one_loss_never_raises_its_mass(
            (l, eta) in loss_vectors(), idx in 0usize..64, bump in 0.0f64..50.0
        ) {
            let j = idx % l.len();
            let mut raised = l.clone();
            raised[j] += bump;
            let a = solve_fixed_point(&losses(&l), eta, 0.0).unwrap();
            let b = solve_fixed_point(&losses(&raised), eta, 0.0).unwrap();
            prop_assert!(b.strategy.prob(j) <= a.strategy.prob(j) + 1e-9);
        }

        #[test]
        fn warm_start_is_idempotent((l, eta) in loss_vectors()) {
            let first = solve_fixed_point(&losses(&l), eta, 0.0).unwrap();
            let again = solve_fixed_point(&losses(&l), eta, first.fixed_point).unwrap();
            prop_assert!(again.iterations <= 2);
            for (p, q) in again.strategy.probs().iter().zip(first.strategy.probs()) {
                prop_assert!((p - q).abs() <= 1e-9);
            }
        }

        #[test]
        fn importance_weighted_loss_is_unbiased(
            (l, eta) in loss_vectors(), reward in 0.0f64..=1.0
        ) {
            let base = losses(&l);
            let s = solve_fixed_point(&base, eta, 0.0).unwrap();
            for k in 0..base.arms() {
                // Exact expectation over the arm draw.
                let expected: f64 = (0..base.arms())
                    .map(|a| {
                        let next = loss_update(&base, a, reward, s.strategy.prob(a)).unwrap();
                        s.strategy.prob(a) * (next.as_slice()[k] - base.as_slice()[k])
                    })
                    .sum();
                prop_assert!((expected - (1.0 - reward)).abs() <= 1e-9);
            }
        }
    }
}
