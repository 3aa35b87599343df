//! Joint bandit rewards: the environment contract and clique-structured rewards.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{GameGraph, JointAction};

/// Tolerance on `sum(beta) = 1`.
pub const WEIGHT_TOL: f64 = 1e-12;

/// A source of joint rewards in `[0, 1]`.
///
/// Implementations must be replayable: after `reset(seed)`, the same sequence
/// of joint actions yields the same sequence of rewards.
pub trait Environment {
    fn reset(&mut self, seed: u64);

    /// Reward for `action` at the 1-based `round`.
    fn step(&mut self, round: u64, action: &JointAction) -> Result<f64>;

    /// True when rewards do not depend on the reset seed.
    fn is_deterministic(&self) -> bool {
        false
    }
}

impl<E: Environment + ?Sized> Environment for Box<E> {
    fn reset(&mut self, seed: u64) {
        (**self).reset(seed)
    }

    fn step(&mut self, round: u64, action: &JointAction) -> Result<f64> {
        (**self).step(round, action)
    }

    fn is_deterministic(&self) -> bool {
        (**self).is_deterministic()
    }
}

/// Reward of a single clique given its members' actions (ascending player order).
pub trait CliqueReward: Send {
    fn reward(&mut self, round: u64, actions: &[usize], rng: &mut ChaCha8Rng) -> f64;
}

/// Per-joint-action mean table; optionally draws Bernoulli rewards with those means.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanTable {
    sizes: Vec<usize>,
    means: Vec<f64>,
    bernoulli: bool,
}

impl MeanTable {
    /// `means` is indexed in mixed radix over `sizes`, first member most significant.
    pub fn new(sizes: Vec<usize>, means: Vec<f64>, bernoulli: bool) -> Result<Self> {
        let expected: usize = sizes.iter().product();
        if sizes.is_empty() || means.len() != expected {
            return Err(Error::InvalidClique(format!(
                "mean table has {} entries, expected {expected}",
                means.len()
            )));
        }
        if let Some(m) = means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
            return Err(Error::InvalidClique(format!("mean {m} outside [0, 1]")));
        }
        Ok(Self {
            sizes,
            means,
            bernoulli,
        })
    }

    pub fn deterministic(sizes: Vec<usize>, means: Vec<f64>) -> Result<Self> {
        Self::new(sizes, means, false)
    }

    pub fn bernoulli(sizes: Vec<usize>, means: Vec<f64>) -> Result<Self> {
        Self::new(sizes, means, true)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn mean(&self, actions: &[usize]) -> f64 {
        let index = actions
            .iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&a, &n)| acc * n + a);
        self.means[index]
    }
}

impl CliqueReward for MeanTable {
    fn reward(&mut self, _round: u64, actions: &[usize], rng: &mut ChaCha8Rng) -> f64 {
        let mean = self.mean(actions);
        if self.bernoulli {
            if rng.gen::<f64>() < mean {
                1.0
            } else {
                0.0
            }
        } else {
            mean
        }
    }
}

/// Adapts a closure `(round, actions) -> reward` into a deterministic clique reward.
pub struct FnReward<F>(pub F);

impl<F> CliqueReward for FnReward<F>
where
    F: FnMut(u64, &[usize]) -> f64 + Send,
{
    fn reward(&mut self, round: u64, actions: &[usize], _rng: &mut ChaCha8Rng) -> f64 {
        (self.0)(round, actions)
    }
}

/// A clique `N_k` and its weight `beta_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Clique {
    pub members: Vec<usize>,
    pub weight: f64,
}

impl Clique {
    pub fn new(mut members: Vec<usize>, weight: f64) -> Self {
        members.sort_unstable();
        Self { members, weight }
    }
}

/// Checks disjointness, clique structure (edges in either direction) and weights.
pub fn validate_cliques(graph: &GameGraph, cliques: &[Clique]) -> Result<()> {
    if cliques.is_empty() {
        return Err(Error::InvalidClique("no cliques".into()));
    }
    let mut owner = vec![None; graph.players()];
    for (k, clique) in cliques.iter().enumerate() {
        if clique.members.is_empty() {
            return Err(Error::InvalidClique(format!("clique {k} is empty")));
        }
        if !(clique.weight >= 0.0 && clique.weight.is_finite()) {
            return Err(Error::InvalidClique(format!(
                "clique {k} has weight {}",
                clique.weight
            )));
        }
        for &m in &clique.members {
            if m >= graph.players() {
                return Err(Error::InvalidClique(format!(
                    "clique {k} references player {m} of {}",
                    graph.players()
                )));
            }
            if let Some(other) = owner[m] {
                return Err(Error::InvalidClique(format!(
                    "player {m} belongs to cliques {other} and {k}"
                )));
            }
            owner[m] = Some(k);
        }
        for (i, &a) in clique.members.iter().enumerate() {
            for &b in &clique.members[i + 1..] {
                if !graph.connected(a, b) {
                    return Err(Error::InvalidClique(format!(
                        "players {a} and {b} in clique {k} are not adjacent"
                    )));
                }
            }
        }
    }
    let total: f64 = cliques.iter().map(|c| c.weight).sum();
    if (total - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::WeightSum(total));
    }
    Ok(())
}

/// Disjoint cliques, weights and per-clique reward evaluators.
pub struct CliqueRewardSpec {
    cliques: Vec<Clique>,
    evaluators: Vec<Box<dyn CliqueReward>>,
}

impl std::fmt::Debug for CliqueRewardSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CliqueRewardSpec")
            .field("cliques", &self.cliques)
            .finish_non_exhaustive()
    }
}

impl CliqueRewardSpec {
    pub fn new(
        graph: &GameGraph,
        cliques: Vec<Clique>,
        evaluators: Vec<Box<dyn CliqueReward>>,
    ) -> Result<Self> {
        validate_cliques(graph, &cliques)?;
        if evaluators.len() != cliques.len() {
            return Err(Error::InvalidClique(format!(
                "{} evaluators for {} cliques",
                evaluators.len(),
                cliques.len()
            )));
        }
        Ok(Self {
            cliques,
            evaluators,
        })
    }

    pub fn cliques(&self) -> &[Clique] {
        &self.cliques
    }

    /// Size vectors of each clique, members in ascending order.
    pub fn clique_sizes(&self, graph: &GameGraph) -> Vec<Vec<usize>> {
        self.cliques
            .iter()
            .map(|c| c.members.iter().map(|&m| graph.arms(m)).collect())
            .collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.cliques.iter().map(|c| c.weight).collect()
    }

    /// `sum_k beta_k r^k(P^k(a))`, rejecting clique rewards outside `[0, 1]`.
    pub fn compose_reward(
        &mut self,
        action: &JointAction,
        round: u64,
        rng: &mut ChaCha8Rng,
    ) -> Result<f64> {
        let mut total = 0.0;
        for (clique, evaluator) in self.cliques.iter().zip(self.evaluators.iter_mut()) {
            let r = evaluator.reward(round, &action.project(&clique.members), rng);
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::InvalidClique(format!(
                    "clique {:?} produced reward {r} at round {round}",
                    clique.members
                )));
            }
            total += clique.weight * r;
        }
        // Weights sum to 1 only up to WEIGHT_TOL.
        Ok(total.clamp(0.0, 1.0))
    }
}

/// Environment whose reward is a [`CliqueRewardSpec`] driven by its own random stream.
#[derive(Debug)]
pub struct CliqueEnvironment {
    spec: CliqueRewardSpec,
    rng: ChaCha8Rng,
}

impl CliqueEnvironment {
    pub fn new(spec: CliqueRewardSpec) -> Self {
        Self {
            spec,
            rng: ChaCha8Rng::seed_from_u64(0),
        }
    }

    pub fn spec(&self) -> &CliqueRewardSpec {
        &self.spec
    }
}

impl Environment for CliqueEnvironment {
    fn reset(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    fn step(&mut self, round: u64, action: &JointAction) -> Result<f64> {
        self.spec.compose_reward(action, round, &mut self.rng)
    }
}
