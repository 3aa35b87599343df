//! Round engine for DAG games.
//!
//! Each round, players act in topological order; player `i` conditions on the
//! actions its parents already chose this round. Once every action is fixed,
//! the environment produces one joint reward and every bank is updated with it.

use rand_chacha::ChaCha8Rng;

use crate::bank::{ContextKey, LearnerBank};
use crate::error::{Error, Result};
use crate::graph::{GameGraph, JointAction};
use crate::reward::Environment;
use crate::rng;

/// Protocol events of one round, in execution order.
#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolEvent {
    Act {
        player: usize,
        key: ContextKey,
        action: usize,
    },
    Reward(f64),
    Update {
        player: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundOutcome {
    pub action: JointAction,
    pub reward: f64,
    /// Context key each player acted under, indexed by player.
    pub contexts: Vec<ContextKey>,
}

/// One game instance: the graph, a learner bank and a sampling stream per player.
#[derive(Debug, Clone)]
pub struct Game {
    graph: GameGraph,
    banks: Vec<LearnerBank>,
    streams: Vec<ChaCha8Rng>,
}

impl Game {
    /// Fresh banks with per-player streams derived from `run_seed`.
    pub fn new(graph: GameGraph, run_seed: u64) -> Result<Self> {
        let streams = (0..graph.players())
            .map(|p| rng::player_stream(run_seed, p))
            .collect();
        Self::with_streams(graph, streams)
    }

    pub fn with_streams(graph: GameGraph, streams: Vec<ChaCha8Rng>) -> Result<Self> {
        assert_eq!(streams.len(), graph.players(), "one stream per player");
        let banks = (0..graph.players())
            .map(|p| LearnerBank::new(p, graph.arms(p), graph.parent_sizes(p)))
            .collect::<Result<_>>()?;
        Ok(Self {
            graph,
            banks,
            streams,
        })
    }

    pub fn graph(&self) -> &GameGraph {
        &self.graph
    }

    pub fn banks(&self) -> &[LearnerBank] {
        &self.banks
    }

    pub fn play_round<E: Environment + ?Sized>(
        &mut self,
        env: &mut E,
        round: u64,
    ) -> Result<RoundOutcome> {
        self.round_inner(env, round, None)
    }

    /// Like [`Game::play_round`], appending every protocol event to `log`.
    pub fn play_round_logged<E: Environment + ?Sized>(
        &mut self,
        env: &mut E,
        round: u64,
        log: &mut Vec<ProtocolEvent>,
    ) -> Result<RoundOutcome> {
        self.round_inner(env, round, Some(log))
    }

    fn round_inner<E: Environment + ?Sized>(
        &mut self,
        env: &mut E,
        round: u64,
        mut log: Option<&mut Vec<ProtocolEvent>>,
    ) -> Result<RoundOutcome> {
        let n = self.graph.players();
        let mut actions = vec![0usize; n];
        let mut contexts = vec![ContextKey::empty(); n];
        for &player in self.graph.order() {
            let key = ContextKey::new(
                self.graph
                    .parents(player)
                    .iter()
                    .map(|&p| actions[p])
                    .collect(),
            );
            let action = self.banks[player].act(key.clone(), &mut self.streams[player])?;
            if let Some(log) = log.as_deref_mut() {
                log.push(ProtocolEvent::Act {
                    player,
                    key: key.clone(),
                    action,
                });
            }
            actions[player] = action;
            contexts[player] = key;
        }

        let action = JointAction(actions);
        let reward = env.step(round, &action)?;
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::EnvironmentReward {
                round,
                value: reward,
            });
        }
        if let Some(log) = log.as_deref_mut() {
            log.push(ProtocolEvent::Reward(reward));
        }
        for &player in self.graph.order() {
            self.banks[player].update(reward)?;
            if let Some(log) = log.as_deref_mut() {
                log.push(ProtocolEvent::Update { player });
            }
        }
        Ok(RoundOutcome {
            action,
            reward,
            contexts,
        })
    }
}

/// Joint actions and rewards of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    players: usize,
    actions: Vec<usize>,
    rewards: Vec<f64>,
}

impl Trajectory {
    pub fn with_capacity(players: usize, rounds: usize) -> Self {
        Self {
            players,
            actions: Vec::with_capacity(players * rounds),
            rewards: Vec::with_capacity(rounds),
        }
    }

    pub fn push(&mut self, action: &JointAction, reward: f64) {
        debug_assert_eq!(action.0.len(), self.players);
        self.actions.extend_from_slice(&action.0);
        self.rewards.push(reward);
    }

    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }

    pub fn rewards(&self) -> &[f64] {
        &self.rewards
    }

    /// Joint action of the 0-based round index `t`.
    pub fn action(&self, t: usize) -> &[usize] {
        &self.actions[t * self.players..(t + 1) * self.players]
    }
}

/// Plays `horizon` rounds from fresh banks; the environment is reset from `seed`.
pub fn run_game<E: Environment + ?Sized>(
    graph: &GameGraph,
    env: &mut E,
    horizon: u64,
    seed: u64,
) -> Result<Trajectory> {
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    let mut game = Game::new(graph.clone(), seed)?;
    env.reset(rng::environment_seed(seed));
    let mut trajectory = Trajectory::with_capacity(graph.players(), horizon as usize);
    for t in 1..=horizon {
        let outcome = game.play_round(env, t)?;
        trajectory.push(&outcome.action, outcome.reward);
    }
    Ok(trajectory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reward::{Clique, CliqueEnvironment, CliqueRewardSpec, FnReward, MeanTable};
    use crate::tsallis::TsallisInf;

    struct Constant(f64);

    impl Environment for Constant {
        fn reset(&mut self, _seed: u64) {}
        fn step(&mut self, _round: u64, _action: &JointAction) -> Result<f64> {
            Ok(self.0)
        }
    }

    fn chain_env(graph: &GameGraph) -> CliqueEnvironment {
        let table = MeanTable::bernoulli(vec![2, 2], vec![0.9, 0.5, 0.5, 0.5]).unwrap();
        CliqueEnvironment::new(
            CliqueRewardSpec::new(
                graph,
                vec![Clique::new(vec![0, 1], 1.0)],
                vec![Box::new(table)],
            )
            .unwrap(),
        )
    }

    #[test]
    fn chain_follower_observes_leader() {
        let graph = GameGraph::chain(vec![3, 2]).unwrap();
        let mut game = Game::new(graph, 1).unwrap();
        let mut env = Constant(0.5);
        for t in 1..=200 {
            let out = game.play_round(&mut env, t).unwrap();
            assert_eq!(out.contexts[1].actions(), &[out.action[0]]);
            assert!(out.contexts[0].actions().is_empty());
        }
        assert!(game.banks().iter().all(|b| b.pending().is_none()));
    }

    #[test]
    fn key_arity_follows_parents() {
        let edges = [
            (1, 2),
            (1, 5),
            (1, 6),
            (2, 3),
            (2, 4),
            (5, 6),
            (6, 7),
            (3, 4),
        ]
        .iter()
        .map(|&(a, b)| (a - 1, b - 1))
        .collect();
        let graph = GameGraph::new(vec![2; 7], edges).unwrap();
        let mut game = Game::new(graph, 3).unwrap();
        let out = game.play_round(&mut Constant(1.0), 1).unwrap();
        assert_eq!(out.contexts[6].arity(), 1);
        assert_eq!(out.contexts[3].arity(), 2);
    }

    #[test]
    fn rejects_out_of_range_environment_reward() {
        let graph = GameGraph::single(2).unwrap();
        let mut game = Game::new(graph, 0).unwrap();
        assert_eq!(
            game.play_round(&mut Constant(1.2), 1),
            Err(Error::EnvironmentReward {
                round: 1,
                value: 1.2
            })
        );
    }

    #[test]
    fn events_respect_round_barrier() {
        let graph = GameGraph::chain(vec![2, 2, 2]).unwrap();
        let mut game = Game::new(graph, 8).unwrap();
        let mut log = Vec::new();
        game.play_round_logged(&mut Constant(0.3), 1, &mut log)
            .unwrap();
        let reward_at = log
            .iter()
            .position(|e| matches!(e, ProtocolEvent::Reward(_)))
            .unwrap();
        assert_eq!(reward_at, 3);
        assert!(log[..3]
            .iter()
            .all(|e| matches!(e, ProtocolEvent::Act { .. })));
        assert!(log[4..]
            .iter()
            .all(|e| matches!(e, ProtocolEvent::Update { .. })));
    }

    #[test]
    fn same_seed_same_trajectory() {
        let graph = GameGraph::chain(vec![2, 2]).unwrap();
        let a = run_game(&graph, &mut chain_env(&graph), 500, 21).unwrap();
        let b = run_game(&graph, &mut chain_env(&graph), 500, 21).unwrap();
        let c = run_game(&graph, &mut chain_env(&graph), 500, 22).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 500);
    }

    #[test]
    fn single_round_equals_play_round() {
        let graph = GameGraph::chain(vec![2, 2]).unwrap();
        let traj = run_game(&graph, &mut chain_env(&graph), 1, 5).unwrap();
        let mut env = chain_env(&graph);
        env.reset(rng::environment_seed(5));
        let out = Game::new(graph, 5)
            .unwrap()
            .play_round(&mut env, 1)
            .unwrap();
        assert_eq!(traj.action(0), out.action.actions());
        assert_eq!(traj.rewards(), &[out.reward]);
    }

    #[test]
    fn one_player_game_matches_bare_learner() {
        let graph = GameGraph::single(4).unwrap();
        let reward = |a: &[usize]| [0.2, 0.9, 0.4, 0.1][a[0]];
        let spec = CliqueRewardSpec::new(
            &graph,
            vec![Clique::new(vec![0], 1.0)],
            vec![Box::new(FnReward(move |_, a: &[usize]| reward(a)))],
        )
        .unwrap();
        let traj = run_game(&graph, &mut CliqueEnvironment::new(spec), 300, 17).unwrap();

        let mut learner = TsallisInf::new(4).unwrap();
        let mut stream = rng::player_stream(17, 0);
        for t in 0..300 {
            let (arm, p) = learner.act(&mut stream).unwrap();
            assert_eq!(arm, traj.action(t)[0]);
            learner.observe(arm, p, reward(&[arm])).unwrap();
        }
    }

    #[test]
    fn zero_horizon_is_rejected() {
        let graph = GameGraph::single(2).unwrap();
        assert_eq!(
            run_game(&graph, &mut Constant(0.0), 0, 0),
            Err(Error::ZeroHorizon)
        );
    }
}
