//! Observation graph of a DAG game.
//!
//! Players are indexed from 0. An edge `(j, i)` means player `i` observes
//! player `j`'s action before choosing its own.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameGraph {
    action_sizes: Vec<usize>,
    edges: Vec<(usize, usize)>,
    parents: Vec<Vec<usize>>,
    order: Vec<usize>,
}

impl GameGraph {
    /// Builds and validates a graph; parents are stored in ascending order.
    pub fn new(action_sizes: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = action_sizes.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if let Some(player) = action_sizes.iter().position(|&a| a == 0) {
            return Err(Error::EmptyActionSpace { player });
        }
        let mut seen = BTreeSet::new();
        let mut parents = vec![Vec::new(); n];
        for &(from, to) in &edges {
            if from >= n || to >= n {
                return Err(Error::EdgeOutOfRange {
                    from,
                    to,
                    players: n,
                });
            }
            if from == to {
                return Err(Error::SelfLoop(from));
            }
            if !seen.insert((from, to)) {
                return Err(Error::DuplicateEdge(from, to));
            }
            parents[to].push(from);
        }
        parents.iter_mut().for_each(|p| p.sort_unstable());
        let order = topological_order(n, &edges, &parents)?;
        Ok(Self {
            action_sizes,
            edges,
            parents,
            order,
        })
    }

    /// A single parentless player.
    pub fn single(arms: usize) -> Result<Self> {
        Self::new(vec![arms], Vec::new())
    }

    /// A chain `0 -> 1 -> ... -> n-1`.
    pub fn chain(action_sizes: Vec<usize>) -> Result<Self> {
        let edges = (1..action_sizes.len()).map(|i| (i - 1, i)).collect();
        Self::new(action_sizes, edges)
    }

    pub fn players(&self) -> usize {
        self.action_sizes.len()
    }

    pub fn action_sizes(&self) -> &[usize] {
        &self.action_sizes
    }

    pub fn arms(&self, player: usize) -> usize {
        self.action_sizes[player]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn parents(&self, player: usize) -> &[usize] {
        &self.parents[player]
    }

    pub fn parent_sizes(&self, player: usize) -> Vec<usize> {
        self.parents[player]
            .iter()
            .map(|&p| self.action_sizes[p])
            .collect()
    }

    /// Topological order, lowest index first among ready players.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        self.parents[b].binary_search(&a).is_ok() || self.parents[a].binary_search(&b).is_ok()
    }

    /// Size of the joint action space, `None` on overflow.
    pub fn joint_space_size(&self) -> Option<u128> {
        self.action_sizes
            .iter()
            .try_fold(1u128, |acc, &a| acc.checked_mul(a as u128))
    }

    /// Mixed-radix decoding of a joint action index, player 0 most significant.
    pub fn decode_joint(&self, mut index: u128) -> JointAction {
        let mut actions = vec![0; self.players()];
        for (slot, &size) in actions.iter_mut().zip(&self.action_sizes).rev() {
            *slot = (index % size as u128) as usize;
            index /= size as u128;
        }
        JointAction(actions)
    }

    pub fn encode_joint(&self, action: &JointAction) -> u128 {
        action
            .0
            .iter()
            .zip(&self.action_sizes)
            .fold(0u128, |acc, (&a, &n)| acc * n as u128 + a as u128)
    }

    pub fn check_joint(&self, action: &JointAction) -> Result<()> {
        if action.0.len() != self.players() {
            return Err(Error::JointActionArity {
                got: action.0.len(),
                expected: self.players(),
            });
        }
        for (player, (&a, &n)) in action.0.iter().zip(&self.action_sizes).enumerate() {
            if a >= n {
                return Err(Error::ActionOutOfRange {
                    player,
                    action: a,
                    arms: n,
                });
            }
        }
        Ok(())
    }
}

/// Validates the edge set and returns the topological order.
pub fn validate(action_sizes: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Vec<usize>> {
    GameGraph::new(action_sizes, edges).map(|g| g.order)
}

fn topological_order(
    n: usize,
    edges: &[(usize, usize)],
    parents: &[Vec<usize>],
) -> Result<Vec<usize>> {
    let mut children = vec![Vec::new(); n];
    for &(from, to) in edges {
        children[from].push(to);
    }
    let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &c in &children[i] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.push(Reverse(c));
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    Err(Error::Cycle(find_cycle(&indegree, parents)))
}

/// Walks parent links among unprocessed players until one repeats.
fn find_cycle(indegree: &[usize], parents: &[Vec<usize>]) -> Vec<usize> {
    let start = indegree
        .iter()
        .position(|&d| d > 0)
        .expect("a blocked player");
    let mut path = vec![start];
    let mut current = start;
    loop {
        let next = parents[current]
            .iter()
            .copied()
            .find(|&p| indegree[p] > 0)
            .expect("blocked players have blocked parents");
        if let Some(pos) = path.iter().position(|&p| p == next) {
            let mut cycle = path[pos..].to_vec();
            // Parent walk runs against edge direction.
            cycle.reverse();
            return cycle;
        }
        path.push(next);
        current = next;
    }
}

/// One action index per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointAction(pub Vec<usize>);

impl JointAction {
    pub fn actions(&self) -> &[usize] {
        &self.0
    }

    /// Actions of `members` (ascending), i.e. the projection onto a clique.
    pub fn project(&self, members: &[usize]) -> Vec<usize> {
        members.iter().map(|&m| self.0[m]).collect()
    }
}

impl std::ops::Index<usize> for JointAction {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}
