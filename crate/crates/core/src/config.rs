//! Experiment configuration files.
//!
//! Configs are TOML. Every problem found is reported, each prefixed with the
//! path of the offending key, and unknown keys are errors.
//!
//! ```toml
//! horizon = 100000
//! seeds = 20
//! master_seed = 7
//! checkpoints = "log"        # or an explicit list, e.g. [10, 100, 1000]
//! out = "results/taxation"
//! oracle_replays = 16        # replay seeds for the oracle (stochastic envs)
//! oracle_cap = 1000000
//!
//! [graph]
//! preset = "taxation-v1"     # or: action_sizes = [2, 2] and edges = [[0, 1]]
//!
//! [environment]
//! kind = "taxation-v1"       # optional overrides: skills, worker_actions,
//!                            # income_per_action, utility_curvature,
//!                            # worker_weight, planner_weight, boundaries, rates
//! ```
//!
//! A stochastic clique environment lists one table per clique; `means` is
//! indexed in mixed radix over the members in ascending player order.
//!
//! ```toml
//! [environment]
//! kind = "stochastic-clique"
//!
//! [[environment.cliques]]
//! players = [0, 1]
//! weight = 1.0
//! means = [0.9, 0.5, 0.5, 0.5]
//! bernoulli = true
//! ```

use std::path::PathBuf;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::graph::GameGraph;
use crate::regret::{log_checkpoints, DEFAULT_ORACLE_CAP};
use crate::reward::{Clique, WEIGHT_TOL};
use crate::taxation::TaxationParams;

pub const TAXATION_PRESET: &str = "taxation-v1";
pub const STOCHASTIC_CLIQUE: &str = "stochastic-clique";
pub const DEFAULT_ORACLE_REPLAYS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum CheckpointPolicy {
    /// `{1, 2, 5} x 10^k` plus the horizon.
    Log,
    Explicit(Vec<u64>),
}

impl CheckpointPolicy {
    /// Checkpoints for `horizon`; explicit entries beyond it are dropped and the
    /// horizon is always included.
    pub fn resolve(&self, horizon: u64) -> Vec<u64> {
        match self {
            CheckpointPolicy::Log => log_checkpoints(horizon),
            CheckpointPolicy::Explicit(points) => {
                let mut out: Vec<u64> = points
                    .iter()
                    .copied()
                    .filter(|&t| t >= 1 && t <= horizon)
                    .collect();
                out.push(horizon);
                out.sort_unstable();
                out.dedup();
                out
            }
        }
    }

    /// Parses `log` or a comma-separated list of rounds.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "log" {
            return Ok(CheckpointPolicy::Log);
        }
        text.split(',')
            .map(|s| match s.trim().parse::<u64>() {
                Ok(t) if t >= 1 => Ok(t),
                _ => Err(Error::Config(vec![format!(
                    "checkpoints: '{}' is not a positive round",
                    s.trim()
                )])),
            })
            .collect::<Result<Vec<_>>>()
            .map(CheckpointPolicy::Explicit)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliqueTable {
    pub players: Vec<usize>,
    pub weight: f64,
    pub means: Vec<f64>,
    pub bernoulli: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EnvironmentSpec {
    Taxation(TaxationParams),
    StochasticClique(Vec<CliqueTable>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: GameGraph,
    pub environment: EnvironmentSpec,
    pub horizon: u64,
    pub seeds: usize,
    pub master_seed: u64,
    pub checkpoints: CheckpointPolicy,
    pub out: PathBuf,
    pub oracle_replays: usize,
    pub oracle_cap: u128,
}

impl ExperimentConfig {
    /// The built-in taxation experiment.
    pub fn taxation_preset(horizon: u64, seeds: usize, master_seed: u64) -> Self {
        let params = TaxationParams::preset_v1();
        Self {
            graph: params.graph().expect("preset graph is valid"),
            environment: EnvironmentSpec::Taxation(params),
            horizon,
            seeds,
            master_seed,
            checkpoints: CheckpointPolicy::Log,
            out: PathBuf::from("results"),
            oracle_replays: DEFAULT_ORACLE_REPLAYS,
            oracle_cap: DEFAULT_ORACLE_CAP,
        }
    }

    /// Cliques with weights; the taxation game is a single clique of every player.
    pub fn cliques(&self) -> Vec<Clique> {
        match &self.environment {
            EnvironmentSpec::Taxation(_) => {
                vec![Clique::new((0..self.graph.players()).collect(), 1.0)]
            }
            EnvironmentSpec::StochasticClique(tables) => tables
                .iter()
                .map(|t| Clique::new(t.players.clone(), t.weight))
                .collect(),
        }
    }

    pub fn resolved_checkpoints(&self) -> Vec<u64> {
        self.checkpoints.resolve(self.horizon)
    }
}

pub fn load_config(path: &std::path::Path) -> Result<ExperimentConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// Parses and validates a config, collecting every error found.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let root: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Config(vec![format!("syntax: {}", e.message())]))?;
    let mut p = Parser::default();
    p.known(
        &root,
        "",
        &[
            "horizon",
            "seeds",
            "master_seed",
            "checkpoints",
            "out",
            "oracle_replays",
            "oracle_cap",
            "graph",
            "environment",
        ],
    );

    let horizon = p.positive(&root, "", "horizon", None);
    let seeds = p.positive(&root, "", "seeds", None);
    let master_seed = p.integer(&root, "", "master_seed", Some(0));
    let oracle_replays = p.positive(
        &root,
        "",
        "oracle_replays",
        Some(DEFAULT_ORACLE_REPLAYS as u64),
    );
    let oracle_cap = p.positive(&root, "", "oracle_cap", Some(DEFAULT_ORACLE_CAP as u64));
    let out = match root.get("out") {
        None => Some(PathBuf::from("results")),
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(_) => p.fail("out", "expected a string"),
    };
    let checkpoints = match root.get("checkpoints") {
        None => Some(CheckpointPolicy::Log),
        Some(Value::String(s)) if s == "log" => Some(CheckpointPolicy::Log),
        Some(Value::Array(items)) => p
            .positive_list(items, "checkpoints")
            .map(CheckpointPolicy::Explicit),
        Some(_) => p.fail("checkpoints", "expected \"log\" or a list of rounds"),
    };

    let environment = match root.get("environment") {
        Some(Value::Table(t)) => p.environment(t),
        Some(_) => p.fail("environment", "expected a table"),
        None => p.fail("environment", "missing"),
    };
    let graph = match root.get("graph") {
        Some(Value::Table(t)) => p.graph(t, environment.as_ref()),
        Some(_) => p.fail("graph", "expected a table"),
        None => match &environment {
            Some(EnvironmentSpec::Taxation(params)) => p.check(params.graph(), "graph"),
            _ => p.fail("graph", "missing"),
        },
    };
    if let (Some(graph), Some(EnvironmentSpec::StochasticClique(tables))) = (&graph, &environment) {
        p.cliques_against_graph(graph, tables);
    }

    if !p.errors.is_empty() {
        return Err(Error::Config(p.errors));
    }
    match (
        graph,
        environment,
        horizon,
        seeds,
        master_seed,
        checkpoints,
        out,
    ) {
        (
            Some(graph),
            Some(environment),
            Some(horizon),
            Some(seeds),
            Some(master_seed),
            Some(checkpoints),
            Some(out),
        ) => Ok(ExperimentConfig {
            graph,
            environment,
            horizon,
            seeds: seeds as usize,
            master_seed,
            checkpoints,
            out,
            oracle_replays: oracle_replays.unwrap_or(DEFAULT_ORACLE_REPLAYS as u64) as usize,
            oracle_cap: oracle_cap.unwrap_or(DEFAULT_ORACLE_CAP as u64) as u128,
        }),
        _ => unreachable!("every missing field records an error"),
    }
}

#[derive(Default)]
struct Parser {
    errors: Vec<String>,
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

impl Parser {
    fn fail<T>(&mut self, path: &str, msg: &str) -> Option<T> {
        self.errors.push(format!("{path}: {msg}"));
        None
    }

    fn check<T>(&mut self, result: Result<T>, path: &str) -> Option<T> {
        match result {
            Ok(v) => Some(v),
            Err(e) => self.fail(path, &e.to_string()),
        }
    }

    fn known(&mut self, table: &Table, prefix: &str, keys: &[&str]) {
        for key in table.keys() {
            if !keys.contains(&key.as_str()) {
                self.errors
                    .push(format!("{}: unknown key", join(prefix, key)));
            }
        }
    }

    fn integer(
        &mut self,
        table: &Table,
        prefix: &str,
        key: &str,
        default: Option<u64>,
    ) -> Option<u64> {
        let path = join(prefix, key);
        match table.get(key) {
            None => default.or_else(|| self.fail(&path, "missing")),
            Some(Value::Integer(i)) if *i >= 0 => Some(*i as u64),
            Some(_) => self.fail(&path, "expected a non-negative integer"),
        }
    }

    fn positive(
        &mut self,
        table: &Table,
        prefix: &str,
        key: &str,
        default: Option<u64>,
    ) -> Option<u64> {
        match self.integer(table, prefix, key, default)? {
            0 => self.fail(&join(prefix, key), "must be at least 1"),
            v => Some(v),
        }
    }

    fn float(&mut self, value: &Value, path: &str) -> Option<f64> {
        match value {
            Value::Float(f) if f.is_finite() => Some(*f),
            Value::Integer(i) => Some(*i as f64),
            _ => self.fail(path, "expected a number"),
        }
    }

    fn float_list(&mut self, value: &Value, path: &str) -> Option<Vec<f64>> {
        let Value::Array(items) = value else {
            return self.fail(path, "expected a list of numbers");
        };
        let parsed: Vec<Option<f64>> = items
            .iter()
            .enumerate()
            .map(|(i, v)| self.float(v, &format!("{path}[{i}]")))
            .collect();
        parsed.into_iter().collect()
    }

    fn index_list(&mut self, items: &[Value], path: &str) -> Option<Vec<usize>> {
        let parsed: Vec<Option<usize>> = items
            .iter()
            .enumerate()
            .map(|(i, v)| match v {
                Value::Integer(n) if *n >= 0 => Some(*n as usize),
                _ => self.fail(&format!("{path}[{i}]"), "expected a non-negative integer"),
            })
            .collect();
        parsed.into_iter().collect()
    }

    fn positive_list(&mut self, items: &[Value], path: &str) -> Option<Vec<u64>> {
        let list = self.index_list(items, path)?;
        if list.contains(&0) {
            return self.fail(path, "entries must be at least 1");
        }
        Some(list.into_iter().map(|v| v as u64).collect())
    }

    fn graph(&mut self, t: &Table, env: Option<&EnvironmentSpec>) -> Option<GameGraph> {
        self.known(t, "graph", &["preset", "action_sizes", "edges"]);
        if let Some(preset) = t.get("preset") {
            if t.contains_key("action_sizes") || t.contains_key("edges") {
                return self.fail(
                    "graph",
                    "give either preset or action_sizes/edges, not both",
                );
            }
            return match (preset.as_str(), env) {
                (Some(TAXATION_PRESET), Some(EnvironmentSpec::Taxation(params))) => {
                    self.check(params.graph(), "graph")
                }
                (Some(TAXATION_PRESET), Some(_)) => self.fail(
                    "graph.preset",
                    "taxation-v1 requires the taxation-v1 environment",
                ),
                (Some(TAXATION_PRESET), None) => None,
                (Some(other), _) => self.fail("graph.preset", &format!("unknown preset '{other}'")),
                (None, _) => self.fail("graph.preset", "expected a string"),
            };
        }
        if matches!(env, Some(EnvironmentSpec::Taxation(_))) {
            return self.fail("graph", "the taxation-v1 environment defines its own graph");
        }
        let sizes = match t.get("action_sizes") {
            Some(Value::Array(items)) => self.positive_list(items, "graph.action_sizes"),
            Some(_) => self.fail("graph.action_sizes", "expected a list of positive integers"),
            None => self.fail("graph.action_sizes", "missing"),
        };
        let edges = match t.get("edges") {
            None => Some(Vec::new()),
            Some(Value::Array(items)) => {
                let parsed: Vec<Option<(usize, usize)>> = items
                    .iter()
                    .enumerate()
                    .map(|(i, e)| {
                        let path = format!("graph.edges[{i}]");
                        match e {
                            Value::Array(pair) if pair.len() == 2 => {
                                let v = self.index_list(pair, &path)?;
                                Some((v[0], v[1]))
                            }
                            _ => self.fail(&path, "expected [from, to]"),
                        }
                    })
                    .collect();
                parsed.into_iter().collect()
            }
            Some(_) => self.fail("graph.edges", "expected a list of [from, to] pairs"),
        };
        let sizes: Vec<usize> = sizes?.into_iter().map(|s| s as usize).collect();
        self.check(GameGraph::new(sizes, edges?), "graph")
    }

    fn environment(&mut self, t: &Table) -> Option<EnvironmentSpec> {
        match t.get("kind").and_then(Value::as_str) {
            Some(TAXATION_PRESET) => self.taxation(t),
            Some(STOCHASTIC_CLIQUE) => {
                self.known(t, "environment", &["kind", "cliques"]);
                let Some(Value::Array(items)) = t.get("cliques") else {
                    return self.fail(
                        "environment.cliques",
                        "expected at least one [[environment.cliques]] table",
                    );
                };
                let parsed: Vec<Option<CliqueTable>> = items
                    .iter()
                    .enumerate()
                    .map(|(i, c)| self.clique(c, &format!("environment.cliques[{i}]")))
                    .collect();
                let tables: Vec<CliqueTable> = parsed.into_iter().collect::<Option<_>>()?;
                if tables.is_empty() {
                    return self.fail("environment.cliques", "expected at least one clique");
                }
                let total: f64 = tables.iter().map(|c| c.weight).sum();
                if (total - 1.0).abs() > WEIGHT_TOL {
                    return self.fail(
                        "environment.cliques",
                        &format!("weights sum to {total}, not 1"),
                    );
                }
                Some(EnvironmentSpec::StochasticClique(tables))
            }
            Some(other) => self.fail(
                "environment.kind",
                &format!("unknown environment '{other}'"),
            ),
            None => self.fail("environment.kind", "missing"),
        }
    }

    fn clique(&mut self, value: &Value, path: &str) -> Option<CliqueTable> {
        let Value::Table(t) = value else {
            return self.fail(path, "expected a table");
        };
        self.known(t, path, &["players", "weight", "means", "bernoulli"]);
        let players = match t.get("players") {
            Some(Value::Array(items)) => self.index_list(items, &join(path, "players")),
            _ => self.fail(&join(path, "players"), "expected a list of players"),
        };
        let weight = match t.get("weight") {
            Some(v) => self.float(v, &join(path, "weight")),
            None => self.fail(&join(path, "weight"), "missing"),
        };
        let means = match t.get("means") {
            Some(v) => self.float_list(v, &join(path, "means")),
            None => self.fail(&join(path, "means"), "missing"),
        };
        let bernoulli = match t.get("bernoulli") {
            None => Some(true),
            Some(Value::Boolean(b)) => Some(*b),
            Some(_) => self.fail(&join(path, "bernoulli"), "expected true or false"),
        };
        let weight = weight?;
        if weight < 0.0 {
            return self.fail(&join(path, "weight"), "must be non-negative");
        }
        let means = means?;
        if let Some(m) = means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
            return self.fail(&join(path, "means"), &format!("mean {m} is outside [0, 1]"));
        }
        Some(CliqueTable {
            players: players?,
            weight,
            means,
            bernoulli: bernoulli?,
        })
    }

    fn cliques_against_graph(&mut self, graph: &GameGraph, tables: &[CliqueTable]) {
        for (i, table) in tables.iter().enumerate() {
            let path = format!("environment.cliques[{i}]");
            if let Some(&p) = table.players.iter().find(|&&p| p >= graph.players()) {
                self.fail::<()>(
                    &join(&path, "players"),
                    &format!("player {p} is not in the graph"),
                );
                return;
            }
            let expected: usize = table.players.iter().map(|&p| graph.arms(p)).product();
            if table.means.len() != expected {
                self.fail::<()>(
                    &join(&path, "means"),
                    &format!("has {} entries, expected {expected}", table.means.len()),
                );
            }
        }
        let cliques: Vec<Clique> = tables
            .iter()
            .map(|t| Clique::new(t.players.clone(), t.weight))
            .collect();
        self.check(
            crate::reward::validate_cliques(graph, &cliques),
            "environment.cliques",
        );
    }

    fn taxation(&mut self, t: &Table) -> Option<EnvironmentSpec> {
        let keys = [
            "kind",
            "skills",
            "worker_actions",
            "income_per_action",
            "utility_curvature",
            "worker_weight",
            "planner_weight",
            "boundaries",
            "rates",
        ];
        self.known(t, "environment", &keys);
        let mut params = TaxationParams::preset_v1();
        let mut ok = true;
        let mut weights_given = false;
        for (key, value) in t {
            let path = join("environment", key);
            let parsed = match key.as_str() {
                "skills" => self.float_list(value, &path).map(|v| params.skills = v),
                "worker_actions" => match value {
                    Value::Integer(n) if *n >= 1 => {
                        params.worker_actions = *n as usize;
                        Some(())
                    }
                    _ => self.fail(&path, "expected a positive integer"),
                },
                "income_per_action" => self
                    .float(value, &path)
                    .map(|v| params.income_per_action = v),
                "utility_curvature" => self
                    .float(value, &path)
                    .map(|v| params.utility_curvature = v),
                "worker_weight" => {
                    weights_given = true;
                    self.float(value, &path).map(|v| params.worker_weight = v)
                }
                "planner_weight" => {
                    weights_given = true;
                    self.float(value, &path).map(|v| params.planner_weight = v)
                }
                "boundaries" => self
                    .float_list(value, &path)
                    .map(|v| params.schedule.boundaries = v),
                "rates" => match value {
                    Value::Array(rows) => {
                        let parsed: Vec<Option<Vec<f64>>> = rows
                            .iter()
                            .enumerate()
                            .map(|(i, r)| self.float_list(r, &format!("{path}[{i}]")))
                            .collect();
                        parsed
                            .into_iter()
                            .collect::<Option<Vec<_>>>()
                            .map(|grid| params.schedule.rate_grid = grid)
                    }
                    _ => self.fail(&path, "expected a list of rate lists, one per bracket"),
                },
                _ => Some(()),
            };
            ok &= parsed.is_some();
        }
        if !ok {
            return None;
        }
        // Default weights follow the worker count unless given explicitly.
        if !weights_given {
            let m = params.workers().max(1) as f64;
            params.worker_weight = 1.0 / m;
            params.planner_weight = m;
        }
        self.check(params.validate(), "environment")?;
        Some(EnvironmentSpec::Taxation(params))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn errors(text: &str) -> Vec<String> {
        match parse_config(text) {
            Err(Error::Config(e)) => e,
            other => panic!("expected config errors, got {other:?}"),
        }
    }

    const CHAIN: &str = r#"
        horizon = 100
        seeds = 2
        master_seed = 3

        [graph]
        action_sizes = [2, 2]
        edges = [[0, 1]]

        [environment]
        kind = "stochastic-clique"

        [[environment.cliques]]
        players = [0, 1]
        weight = 1.0
        means = [0.9, 0.5, 0.5, 0.5]
    "#;

    #[test]
    fn taxation_preset_parses() {
        let cfg = parse_config(
            r#"
            horizon = 100000
            seeds = 20
            master_seed = 7
            [graph]
            preset = "taxation-v1"
            [environment]
            kind = "taxation-v1"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.graph.action_sizes(), &[9, 3, 3, 3]);
        assert_eq!(cfg.horizon, 100_000);
        assert_eq!(cfg.seeds, 20);
        assert_eq!(cfg.master_seed, 7);
        assert_eq!(cfg.checkpoints, CheckpointPolicy::Log);
        assert_eq!(cfg, ExperimentConfig::taxation_preset(100_000, 20, 7));
    }

    #[test]
    fn chain_parses() {
        let cfg = parse_config(CHAIN).unwrap();
        assert_eq!(cfg.graph.parents(1), &[0]);
        let EnvironmentSpec::StochasticClique(tables) = &cfg.environment else {
            panic!("wrong environment");
        };
        assert!(tables[0].bernoulli);
        assert_eq!(cfg.cliques(), vec![Clique::new(vec![0, 1], 1.0)]);
    }

    #[test]
    fn self_loop_is_reported() {
        let errs = errors(&CHAIN.replace("edges = [[0, 1]]", "edges = [[0, 1], [1, 1]]"));
        assert!(
            errs.iter()
                .any(|e| e.starts_with("graph:") && e.contains("self-loop")),
            "{errs:?}"
        );
    }

    #[test]
    fn cycle_is_reported() {
        let errs = errors(&CHAIN.replace("edges = [[0, 1]]", "edges = [[0, 1], [1, 0]]"));
        assert!(errs.iter().any(|e| e.contains("cycle")), "{errs:?}");
    }

    #[test]
    fn weights_must_sum_to_one() {
        let text = r#"
            horizon = 10
            seeds = 1
            [graph]
            action_sizes = [2, 2]
            [environment]
            kind = "stochastic-clique"
            [[environment.cliques]]
            players = [0]
            weight = 0.7
            means = [0.1, 0.2]
            [[environment.cliques]]
            players = [1]
            weight = 0.7
            means = [0.1, 0.2]
        "#;
        let errs = errors(text);
        assert!(
            errs.iter()
                .any(|e| e.starts_with("environment.cliques:") && e.contains("weights sum to")),
            "{errs:?}"
        );
    }

    #[test]
    fn all_errors_are_collected() {
        let text = r#"
            horizon = 0
            seeds = "many"
            colour = "blue"
            [graph]
            action_sizes = [2, 0]
            edges = [[0, 1]]
            shape = "tree"
            [environment]
            kind = "stochastic-clique"
            [[environment.cliques]]
            players = [0, 1]
            weight = 1.0
            means = [0.5, 2.0, 0.1, 0.1]
        "#;
        let errs = errors(text);
        for needle in [
            "horizon: must be at least 1",
            "seeds: expected a non-negative integer",
            "colour: unknown key",
            "graph.shape: unknown key",
            "graph.action_sizes: entries must be at least 1",
            "environment.cliques[0].means: mean 2 is outside [0, 1]",
        ] {
            assert!(
                errs.iter().any(|e| e == needle),
                "missing '{needle}' in {errs:?}"
            );
        }
    }

    #[test]
    fn clique_tables_are_checked_against_the_graph() {
        let errs = errors(&CHAIN.replace("means = [0.9, 0.5, 0.5, 0.5]", "means = [0.9, 0.5]"));
        assert_eq!(
            errs,
            vec!["environment.cliques[0].means: has 2 entries, expected 4"]
        );
        let errs = errors(&CHAIN.replace("players = [0, 1]", "players = [0, 4]"));
        assert_eq!(
            errs,
            vec!["environment.cliques[0].players: player 4 is not in the graph"]
        );
    }

    #[test]
    fn non_adjacent_clique_is_rejected() {
        let errs = errors(&CHAIN.replace("edges = [[0, 1]]", "edges = []"));
        assert!(errs.iter().any(|e| e.contains("not adjacent")), "{errs:?}");
    }

    #[test]
    fn taxation_overrides() {
        let cfg = parse_config(
            r#"
            horizon = 50
            seeds = 1
            [environment]
            kind = "taxation-v1"
            skills = [1.0, 2.0]
            rates = [[0.2, 0.4], [0.2, 0.4]]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.graph.action_sizes(), &[4, 3, 3]);
        let EnvironmentSpec::Taxation(p) = &cfg.environment else {
            panic!("wrong environment");
        };
        assert_eq!(p.worker_weight, 0.5);
        assert_eq!(p.planner_weight, 2.0);

        let errs = errors(
            r#"
            horizon = 50
            seeds = 1
            [environment]
            kind = "taxation-v1"
            planner_weight = 1.0
            "#,
        );
        assert!(
            errs[0].starts_with("environment: invalid taxation parameters"),
            "{errs:?}"
        );
    }

    #[test]
    fn taxation_rejects_custom_graph() {
        let errs = errors(
            r#"
            horizon = 50
            seeds = 1
            [graph]
            action_sizes = [2]
            [environment]
            kind = "taxation-v1"
            "#,
        );
        assert_eq!(
            errs,
            vec!["graph: the taxation-v1 environment defines its own graph"]
        );
    }

    #[test]
    fn checkpoint_policies() {
        assert_eq!(CheckpointPolicy::Log.resolve(30), vec![1, 2, 5, 10, 20, 30]);
        assert_eq!(
            CheckpointPolicy::Explicit(vec![50, 10, 500]).resolve(100),
            vec![10, 50, 100]
        );
        assert_eq!(
            CheckpointPolicy::parse("log").unwrap(),
            CheckpointPolicy::Log
        );
        assert_eq!(
            CheckpointPolicy::parse("1, 10,100").unwrap(),
            CheckpointPolicy::Explicit(vec![1, 10, 100])
        );
        assert!(CheckpointPolicy::parse("1,x").is_err());
        assert!(CheckpointPolicy::parse("0").is_err());
    }

    #[test]
    fn syntax_errors_are_reported() {
        let errs = errors("horizon = ");
        assert!(errs[0].starts_with("syntax:"));
    }
}
