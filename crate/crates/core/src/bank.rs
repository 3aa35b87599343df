//! Per-player bank of Tsallis-INF learners, one per observed joint parent action.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::tsallis::TsallisInf;

/// Joint action of a player's parents, in ascending parent order.
///
/// Parentless players use the empty key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ContextKey(Vec<usize>);

impl ContextKey {
    pub fn new(parent_actions: Vec<usize>) -> Self {
        Self(parent_actions)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn actions(&self) -> &[usize] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl From<Vec<usize>> for ContextKey {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

/// Mixed-radix index of a parent joint action, first parent most significant.
pub fn context_index(parent_actions: &[usize], parent_sizes: &[usize]) -> Result<usize> {
    if parent_actions.len() != parent_sizes.len()
        || parent_actions
            .iter()
            .zip(parent_sizes)
            .any(|(&a, &n)| a >= n)
    {
        return Err(Error::InvalidContext {
            key: parent_actions.to_vec(),
            sizes: parent_sizes.to_vec(),
        });
    }
    Ok(parent_actions
        .iter()
        .zip(parent_sizes)
        .fold(0, |acc, (&a, &n)| acc * n + a))
}

/// The in-flight round of a bank: which context acted, which arm, with what probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Pending {
    pub key: ContextKey,
    pub arm: usize,
    pub prob: f64,
}

#[derive(Debug, Clone)]
pub struct LearnerBank {
    player: usize,
    arms: usize,
    parent_sizes: Vec<usize>,
    contexts: BTreeMap<ContextKey, TsallisInf>,
    pending: Option<Pending>,
}

impl LearnerBank {
    pub fn new(player: usize, arms: usize, parent_sizes: Vec<usize>) -> Result<Self> {
        if arms == 0 {
            return Err(Error::EmptyActionSpace { player });
        }
        Ok(Self {
            player,
            arms,
            parent_sizes,
            contexts: BTreeMap::new(),
            pending: None,
        })
    }

    pub fn player(&self) -> usize {
        self.player
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    pub fn parent_sizes(&self) -> &[usize] {
        &self.parent_sizes
    }

    pub fn pending(&self) -> Option<&Pending> {
        self.pending.as_ref()
    }

    pub fn context(&self, key: &ContextKey) -> Option<&TsallisInf> {
        self.contexts.get(key)
    }

    pub fn contexts(&self) -> impl Iterator<Item = (&ContextKey, &TsallisInf)> {
        self.contexts.iter()
    }

    /// Total `act` calls across all contexts.
    pub fn total_rounds(&self) -> u64 {
        self.contexts.values().map(TsallisInf::rounds).sum()
    }

    /// Plays one round under `key`, creating its learner on first sight.
    pub fn act<R: Rng + ?Sized>(&mut self, key: ContextKey, rng: &mut R) -> Result<usize> {
        if self.pending.is_some() {
            return Err(Error::PendingRound {
                player: self.player,
            });
        }
        context_index(key.actions(), &self.parent_sizes)?;
        let learner = match self.contexts.entry(key.clone()) {
            std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::btree_map::Entry::Vacant(e) => e.insert(TsallisInf::new(self.arms)?),
        };
        let (arm, prob) = learner.act(rng)?;
        self.pending = Some(Pending { key, arm, prob });
        Ok(arm)
    }

    /// Feeds the shared round reward to the context that acted.
    pub fn update(&mut self, reward: f64) -> Result<()> {
        let pending = self.pending.as_ref().ok_or(Error::NoPendingRound {
            player: self.player,
        })?;
        let learner = self
            .contexts
            .get_mut(&pending.key)
            .expect("pending context exists");
        learner.observe(pending.arm, pending.prob, reward)?;
        self.pending = None;
        Ok(())
    }
}
