//! Decentralized Tsallis-INF learners for multiplayer bandit games whose
//! information structure is a directed acyclic graph.
//!
//! Every player keeps one learner per joint action of its parents. Players act
//! in topological order, observing what their parents chose this round, and all
//! of them receive the same reward.

pub mod bank;
pub mod config;
pub mod error;
pub mod experiment;
pub mod game;
pub mod graph;
pub mod regret;
pub mod reward;
pub mod rng;
pub mod taxation;
pub mod tsallis;

pub use bank::{ContextKey, LearnerBank};
pub use config::{parse_config, ExperimentConfig};
pub use error::{Error, Result};
pub use experiment::{run_experiment, BoundsSpec, RunOptions};
pub use game::{run_game, Game, Trajectory};
pub use graph::{GameGraph, JointAction};
pub use regret::{
    best_pure_joint_action, bound_clique, bound_dag, bound_single, bound_two, log_checkpoints,
    pseudo_regret, OracleResult, RegretReport,
};
pub use reward::{Clique, CliqueEnvironment, CliqueRewardSpec, Environment, MeanTable};
pub use taxation::{build_experiment, TaxationEnv, TaxationParams};
pub use tsallis::{learning_rate, solve_fixed_point, ArmLosses, Strategy, TsallisInf};
