use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("round counter must be at least 1")]
    ZeroRound,

    #[error("learning rate must be positive and finite, got {0}")]
    InvalidLearningRate(f64),

    #[error("loss vector must be non-empty")]
    EmptyLosses,

    #[error("loss entry {index} is {value}; losses must be finite and non-negative")]
    InvalidLoss { index: usize, value: f64 },

    #[error("fixed point {x} is not below the smallest loss {min_loss}")]
    FixedPointTooLarge { x: f64, min_loss: f64 },

    #[error("reward {0} is outside [0, 1]")]
    RewardOutOfRange(f64),

    #[error("probability {0} is outside (0, 1]")]
    InvalidProbability(f64),

    #[error("arm {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },

    #[error("act called while a round is still pending for player {player}")]
    PendingRound { player: usize },

    #[error("update called without a pending act for player {player}")]
    NoPendingRound { player: usize },

    #[error("context key {key:?} does not match parent sizes {sizes:?}")]
    InvalidContext { key: Vec<usize>, sizes: Vec<usize> },

    #[error("graph has no players")]
    EmptyGraph,

    #[error("player {player} has an empty action space")]
    EmptyActionSpace { player: usize },

    #[error("edge ({from}, {to}) references a player outside 0..{players}")]
    EdgeOutOfRange {
        from: usize,
        to: usize,
        players: usize,
    },

    #[error("self-loop on player {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("graph contains a cycle: {}", format_cycle(.0))]
    Cycle(Vec<usize>),

    #[error("joint action has {got} entries, expected {expected}")]
    JointActionArity { got: usize, expected: usize },

    #[error("player {player} plays action {action} but has {arms} actions")]
    ActionOutOfRange {
        player: usize,
        action: usize,
        arms: usize,
    },

    #[error("invalid clique specification: {0}")]
    InvalidClique(String),

    #[error("clique weights sum to {0}, expected 1")]
    WeightSum(f64),

    #[error("environment produced {value} at round {round}; rewards must lie in [0, 1]")]
    EnvironmentReward { round: u64, value: f64 },

    #[error("horizon must be at least 1")]
    ZeroHorizon,

    #[error("trajectories have mismatched lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("the oracle needs at least one replay seed")]
    NoReplaySeeds,

    #[error("joint action space of size {size} exceeds the oracle cap {cap}")]
    OracleCapExceeded { size: u128, cap: u128 },

    #[error("invalid taxation parameters: {0}")]
    InvalidTaxation(String),

    #[error("invalid configuration:\n{}", .0.join("\n"))]
    Config(Vec<String>),

    #[error("io error: {0}")]
    Io(String),
}

fn format_cycle(cycle: &[usize]) -> String {
    let mut parts: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
    if let Some(first) = cycle.first() {
        parts.push(first.to_string());
    }
    parts.join(" -> ")
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
