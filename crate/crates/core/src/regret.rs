//! Joint pseudo-regret against the best pure joint action, and its upper bounds.
//!
//! The expectation over the best joint action is estimated by replaying the
//! environment once per replay seed for every pure joint action; the learners'
//! expected reward is estimated by the mean over independent runs.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{GameGraph, JointAction};
use crate::reward::Environment;

/// Largest joint action space the oracle will enumerate by default.
pub const DEFAULT_ORACLE_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_action: JointAction,
    /// Mean over replays of the best action's total reward.
    pub best_value: f64,
    /// Mean total reward of every joint action, by mixed-radix index.
    pub values: Vec<f64>,
    /// Mean cumulative reward of the best action after each round.
    pub best_path: Vec<f64>,
}

impl OracleResult {
    pub fn horizon(&self) -> usize {
        self.best_path.len()
    }

    /// `r*(t)` for a 1-based round `t`.
    pub fn cumulative(&self, t: u64) -> f64 {
        self.best_path[t as usize - 1]
    }
}

/// Replays `action` for `horizon` rounds; returns the cumulative reward after each round.
fn replay<E: Environment>(
    env: &mut E,
    seed: u64,
    action: &JointAction,
    horizon: u64,
    mut on_round: impl FnMut(usize, f64),
) -> Result<f64> {
    env.reset(seed);
    let mut total = 0.0;
    for t in 1..=horizon {
        let r = env.step(t, action)?;
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::EnvironmentReward { round: t, value: r });
        }
        total += r;
        on_round(t as usize - 1, total);
    }
    Ok(total)
}

/// Exhaustive search for the pure joint action with the largest mean total reward.
///
/// Ties go to the lowest mixed-radix index. Each evaluation builds a fresh
/// environment from `factory`. Deterministic environments are replayed once.
pub fn best_pure_joint_action<E, F>(
    factory: F,
    graph: &GameGraph,
    horizon: u64,
    replay_seeds: &[u64],
    cap: u128,
    parallel: bool,
) -> Result<OracleResult>
where
    E: Environment,
    F: Fn() -> E + Sync,
{
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    if replay_seeds.is_empty() {
        return Err(Error::NoReplaySeeds);
    }
    let size = graph.joint_space_size().unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::OracleCapExceeded { size, cap });
    }
    let replay_seeds = if factory().is_deterministic() {
        &replay_seeds[..1]
    } else {
        replay_seeds
    };

    let evaluate = |index: u128| -> Result<f64> {
        let action = graph.decode_joint(index);
        let mut env = factory();
        let mut sum = 0.0;
        for &seed in replay_seeds {
            sum += replay(&mut env, seed, &action, horizon, |_, _| {})?;
        }
        Ok(sum / replay_seeds.len() as f64)
    };
    let values: Vec<f64> = if parallel {
        (0..size)
            .into_par_iter()
            .map(evaluate)
            .collect::<Result<_>>()?
    } else {
        (0..size).map(evaluate).collect::<Result<_>>()?
    };

    let (best_index, best_value) =
        values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, v)| {
                if v > bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            });
    let best_action = graph.decode_joint(best_index as u128);

    let mut best_path = vec![0.0; horizon as usize];
    let mut env = factory();
    for &seed in replay_seeds {
        replay(&mut env, seed, &best_action, horizon, |t, cum| {
            best_path[t] += cum
        })?;
    }
    let s = replay_seeds.len() as f64;
    best_path.iter_mut().for_each(|v| *v /= s);

    Ok(OracleResult {
        best_action,
        best_value,
        values,
        best_path,
    })
}

/// Mean with a `mean +- 2 std` band across runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let std = if samples.len() > 1 {
            (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            lo: mean - 2.0 * std,
            hi: mean + 2.0 * std,
        }
    }

    fn scaled(self, factor: f64) -> Self {
        Self {
            mean: self.mean * factor,
            lo: self.lo * factor,
            hi: self.hi * factor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckpointRow {
    pub t: u64,
    /// `r*(t) - sum_{u <= t} r_u`, across runs.
    pub cumulative: Band,
    /// The cumulative band divided by `t`.
    pub average: Band,
    /// Regret bound at `t` (cumulative scale).
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretReport {
    pub runs: usize,
    pub rows: Vec<CheckpointRow>,
}

impl RegretReport {
    pub fn last(&self) -> Option<&CheckpointRow> {
        self.rows.last()
    }

    pub fn at(&self, t: u64) -> Option<&CheckpointRow> {
        self.rows.iter().find(|r| r.t == t)
    }
}

/// Estimates pseudo-regret at each checkpoint from per-run reward sequences.
pub fn pseudo_regret<R: AsRef<[f64]>>(
    runs: &[R],
    oracle: &OracleResult,
    checkpoints: &[u64],
    bound: impl Fn(u64) -> f64,
) -> Result<RegretReport> {
    let first = runs
        .first()
        .ok_or(Error::LengthMismatch(0, oracle.horizon()))?;
    let horizon = first.as_ref().len();
    for run in runs {
        if run.as_ref().len() != horizon {
            return Err(Error::LengthMismatch(horizon, run.as_ref().len()));
        }
    }
    let sorted = normalize_checkpoints(checkpoints, horizon as u64)?;
    let per_run: Vec<Vec<f64>> = runs
        .iter()
        .map(|run| cumulative_at(run.as_ref(), &sorted))
        .collect();
    regret_report(&per_run, oracle, &sorted, bound)
}

/// Sorted, deduplicated checkpoints, each within `1..=horizon`.
pub fn normalize_checkpoints(checkpoints: &[u64], horizon: u64) -> Result<Vec<u64>> {
    if let Some(&t) = checkpoints.iter().find(|&&t| t == 0 || t > horizon) {
        return Err(Error::LengthMismatch(t as usize, horizon as usize));
    }
    let mut sorted = checkpoints.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted)
}

/// Cumulative reward after each of the sorted `checkpoints`.
pub fn cumulative_at(rewards: &[f64], checkpoints: &[u64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut acc = 0.0;
    let mut next = 0;
    for (u, &r) in rewards.iter().enumerate() {
        acc += r;
        while next < checkpoints.len() && checkpoints[next] as usize == u + 1 {
            out.push(acc);
            next += 1;
        }
    }
    out
}

/// Builds the report from each run's cumulative reward at the sorted `checkpoints`.
pub fn regret_report(
    per_run: &[Vec<f64>],
    oracle: &OracleResult,
    checkpoints: &[u64],
    bound: impl Fn(u64) -> f64,
) -> Result<RegretReport> {
    if per_run.is_empty() {
        return Err(Error::LengthMismatch(0, oracle.horizon()));
    }
    if let Some(run) = per_run.iter().find(|r| r.len() != checkpoints.len()) {
        return Err(Error::LengthMismatch(checkpoints.len(), run.len()));
    }
    if let Some(&t) = checkpoints
        .iter()
        .find(|&&t| t == 0 || t as usize > oracle.horizon())
    {
        return Err(Error::LengthMismatch(t as usize, oracle.horizon()));
    }
    let rows = checkpoints
        .iter()
        .enumerate()
        .map(|(c, &t)| {
            let target = oracle.cumulative(t);
            let regrets: Vec<f64> = per_run.iter().map(|cum| target - cum[c]).collect();
            let cumulative = Band::from_samples(&regrets);
            CheckpointRow {
                t,
                cumulative,
                average: cumulative.scaled(1.0 / t as f64),
                bound: bound(t),
            }
        })
        .collect();
    Ok(RegretReport {
        runs: per_run.len(),
        rows,
    })
}

/// `{1, 2, 5} x 10^k` up to `horizon`, with `horizon` itself appended.
pub fn log_checkpoints(horizon: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut decade = 1u64;
    'outer: loop {
        for m in [1, 2, 5] {
            match decade.checked_mul(m) {
                Some(t) if t <= horizon => out.push(t),
                _ => break 'outer,
            }
        }
        decade = match decade.checked_mul(10) {
            Some(d) => d,
            None => break,
        };
    }
    if out.last() != Some(&horizon) && horizon > 0 {
        out.push(horizon);
    }
    out
}

/// Single-player bound `4 sqrt(A T) + 1`.
pub fn bound_single(arms: u64, horizon: u64) -> f64 {
    let (a, t) = (arms as f64, horizon as f64);
    4.0 * (a * t).sqrt() + 1.0
}

/// Leader-follower bound `4 sqrt(A1 A2 T) + 4 sqrt(A1 T) + A1 + 1`.
pub fn bound_two(leader_arms: u64, follower_arms: u64, horizon: u64) -> f64 {
    let (a1, a2, t) = (leader_arms as f64, follower_arms as f64, horizon as f64);
    4.0 * (a1 * a2 * t).sqrt() + 4.0 * (a1 * t).sqrt() + a1 + 1.0
}

/// Bound for a clique whose sizes are listed in observation order:
/// `4 sqrt(T) sum_i prod_{k<=i} sqrt(A_k) + sum_{i<m} prod_{k<=i} A_k + 1`.
pub fn bound_clique(sizes: &[usize], horizon: u64) -> f64 {
    let t = horizon as f64;
    let mut prefix = 1.0;
    let mut root_sum = 0.0;
    let mut prefix_sum = 0.0;
    for (i, &a) in sizes.iter().enumerate() {
        prefix *= a as f64;
        root_sum += (prefix * t).sqrt();
        if i + 1 < sizes.len() {
            prefix_sum += prefix;
        }
    }
    4.0 * root_sum + prefix_sum + 1.0
}

/// `sum_k beta_k * bound_clique(N_k, T)`.
pub fn bound_dag(cliques: &[Vec<usize>], weights: &[f64], horizon: u64) -> f64 {
    cliques
        .iter()
        .zip(weights)
        .map(|(sizes, &w)| w * bound_clique(sizes, horizon))
        .sum()
}
