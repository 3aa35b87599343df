//! Multi-seed experiment runner and CSV reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::config::{CheckpointPolicy, EnvironmentSpec, ExperimentConfig};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::graph::{GameGraph, JointAction};
use crate::regret::{
    best_pure_joint_action, bound_dag, regret_report, Band, OracleResult, RegretReport,
};
use crate::reward::{
    Clique, CliqueEnvironment, CliqueReward, CliqueRewardSpec, Environment, MeanTable,
};
use crate::rng;
use crate::taxation::TaxationEnv;

/// Overrides the size of the worker pool.
pub const WORKERS_ENV: &str = "DAGBANDIT_WORKERS";
pub const CUMULATIVE_CSV: &str = "regret_cumulative.csv";
pub const AVERAGE_CSV: &str = "regret_average.csv";
pub const CSV_HEADER: &str = "T,regret,lo,hi,bound";

/// Boxed environment that can move to a worker thread.
pub type DynEnvironment = Box<dyn Environment + Send>;

/// Builds a fresh environment for a validated config.
pub fn build_environment(config: &ExperimentConfig) -> Result<DynEnvironment> {
    match &config.environment {
        EnvironmentSpec::Taxation(params) => Ok(Box::new(TaxationEnv::new(params.clone())?)),
        EnvironmentSpec::StochasticClique(tables) => {
            let mut cliques = Vec::with_capacity(tables.len());
            let mut evaluators: Vec<Box<dyn CliqueReward>> = Vec::with_capacity(tables.len());
            for table in tables {
                let mut members = table.players.clone();
                members.sort_unstable();
                let sizes = members.iter().map(|&p| config.graph.arms(p)).collect();
                evaluators.push(Box::new(MeanTable::new(
                    sizes,
                    table.means.clone(),
                    table.bernoulli,
                )?));
                cliques.push(Clique::new(members, table.weight));
            }
            let spec = CliqueRewardSpec::new(&config.graph, cliques, evaluators)?;
            Ok(Box::new(CliqueEnvironment::new(spec)))
        }
    }
}

/// Action-set sizes of a clique's members in topological order.
pub fn clique_sizes_in_order(graph: &GameGraph, clique: &Clique) -> Vec<usize> {
    graph
        .order()
        .iter()
        .filter(|p| clique.members.contains(p))
        .map(|&p| graph.arms(p))
        .collect()
}

/// Clique size vectors and weights for the bound.
pub fn bound_structure(config: &ExperimentConfig) -> (Vec<Vec<usize>>, Vec<f64>) {
    let cliques = config.cliques();
    (
        cliques
            .iter()
            .map(|c| clique_sizes_in_order(&config.graph, c))
            .collect(),
        cliques.iter().map(|c| c.weight).collect(),
    )
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    /// Run seeds one after another on the calling thread.
    pub serial: bool,
    /// Worker pool size; `None` reads [`WORKERS_ENV`] or uses every core.
    pub workers: Option<usize>,
}

/// Pool size from [`WORKERS_ENV`], if set.
pub fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Error::Config(vec![format!(
                "{WORKERS_ENV}: '{v}' is not a positive integer"
            )])),
        },
    }
}

fn with_pool<T: Send>(options: &RunOptions, job: impl FnOnce() -> T + Send) -> Result<T> {
    let workers = match options.workers {
        Some(n) => Some(n),
        None => workers_from_env()?,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Io(format!("worker pool: {e}")))?;
    Ok(pool.install(job))
}

/// Oracle replay seeds derived from the master seed.
pub fn oracle_seeds(config: &ExperimentConfig) -> Vec<u64> {
    (0..config.oracle_replays as u64)
        .map(|i| rng::oracle_seed(config.master_seed, i))
        .collect()
}

pub fn compute_oracle(config: &ExperimentConfig, options: &RunOptions) -> Result<OracleResult> {
    let factory = || build_environment(config).expect("validated config");
    build_environment(config)?;
    let seeds = oracle_seeds(config);
    let run = || {
        best_pure_joint_action(
            factory,
            &config.graph,
            config.horizon,
            &seeds,
            config.oracle_cap,
            !options.serial,
        )
    };
    if options.serial {
        run()
    } else {
        with_pool(options, run)?
    }
}

/// Plays run `index` and returns its cumulative reward at each checkpoint.
pub fn play_run(config: &ExperimentConfig, index: u64, checkpoints: &[u64]) -> Result<Vec<f64>> {
    let seed = rng::run_seed(config.master_seed, index);
    let mut env = build_environment(config)?;
    env.reset(rng::environment_seed(seed));
    let mut game = Game::new(config.graph.clone(), seed)?;
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut total = 0.0;
    let mut next = 0;
    for t in 1..=config.horizon {
        total += game.play_round(&mut env, t)?.reward;
        while next < checkpoints.len() && checkpoints[next] == t {
            out.push(total);
            next += 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub report: RegretReport,
    pub oracle: OracleResult,
    pub elapsed: Duration,
}

impl ExperimentOutput {
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let best = self.oracle.best_action.actions();
        let _ = writeln!(s, "runs: {}", self.report.runs);
        let _ = writeln!(
            s,
            "best joint action: {best:?} (mean total reward {})",
            format_sig(self.oracle.best_value)
        );
        if let Some(row) = self.report.last() {
            let _ = writeln!(
                s,
                "final regret at T={}: {} (band {} .. {})",
                row.t,
                format_sig(row.cumulative.mean),
                format_sig(row.cumulative.lo),
                format_sig(row.cumulative.hi)
            );
            let _ = writeln!(
                s,
                "final time-averaged regret: {} (bound {})",
                format_sig(row.average.mean),
                format_sig(row.bound / row.t as f64)
            );
            let _ = writeln!(s, "final bound: {}", format_sig(row.bound));
        }
        let _ = write!(s, "runtime: {:.2} s", self.elapsed.as_secs_f64());
        s
    }
}

/// Runs every seed, computes the oracle once and builds the regret report.
pub fn run_experiment(config: &ExperimentConfig, options: &RunOptions) -> Result<ExperimentOutput> {
    let start = Instant::now();
    let checkpoints = config.resolved_checkpoints();
    build_environment(config)?;
    let oracle = compute_oracle(config, options)?;

    let per_run: Vec<Vec<f64>> = if options.serial {
        (0..config.seeds as u64)
            .map(|i| play_run(config, i, &checkpoints))
            .collect::<Result<_>>()?
    } else {
        // Indexed collection keeps run order independent of completion order.
        with_pool(options, || {
            (0..config.seeds as u64)
                .into_par_iter()
                .map(|i| play_run(config, i, &checkpoints))
                .collect::<Result<Vec<_>>>()
        })??
    };

    let (sizes, weights) = bound_structure(config);
    let report = regret_report(&per_run, &oracle, &checkpoints, |t| {
        bound_dag(&sizes, &weights, t)
    })?;
    Ok(ExperimentOutput {
        report,
        oracle,
        elapsed: start.elapsed(),
    })
}

/// Formats like C's `%.10g`.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 10;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_rows(
    report: &RegretReport,
    pick: impl Fn(&crate::regret::CheckpointRow) -> (Band, f64),
) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        let (band, bound) = pick(row);
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.t,
            format_sig(band.mean),
            format_sig(band.lo),
            format_sig(band.hi),
            format_sig(bound)
        );
    }
    out
}

pub fn cumulative_csv(report: &RegretReport) -> String {
    csv_rows(report, |r| (r.cumulative, r.bound))
}

/// Regret and bound both divided by `T`.
pub fn average_csv(report: &RegretReport) -> String {
    csv_rows(report, |r| (r.average, r.bound / r.t as f64))
}

/// Writes both CSVs into `dir`, creating it if needed; returns their paths.
pub fn write_reports(report: &RegretReport, dir: &Path) -> Result<[PathBuf; 2]> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let cumulative = dir.join(CUMULATIVE_CSV);
    let average = dir.join(AVERAGE_CSV);
    for (path, body) in [
        (&cumulative, cumulative_csv(report)),
        (&average, average_csv(report)),
    ] {
        std::fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok([cumulative, average])
}

/// Clique structure and horizon grid for the bounds-only mode.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsSpec {
    /// Member action sizes of each clique, in observation order.
    pub cliques: Vec<Vec<usize>>,
    pub weights: Vec<f64>,
    pub horizon: u64,
    pub checkpoints: CheckpointPolicy,
}

impl BoundsSpec {
    /// A single clique.
    pub fn single(sizes: Vec<usize>, horizon: u64) -> Self {
        Self {
            cliques: vec![sizes],
            weights: vec![1.0],
            horizon,
            checkpoints: CheckpointPolicy::Log,
        }
    }

    pub fn from_config(config: &ExperimentConfig) -> Self {
        let (cliques, weights) = bound_structure(config);
        Self {
            cliques,
            weights,
            horizon: config.horizon,
            checkpoints: config.checkpoints.clone(),
        }
    }

    /// Parses either an inline size list such as `9,3,3,3` or a TOML document:
    ///
    /// ```toml
    /// horizon = 1000000
    /// checkpoints = "log"
    /// sizes = [9, 3, 3, 3]          # or one [[cliques]] table per clique:
    /// # [[cliques]]
    /// # sizes = [2, 2]
    /// # weight = 0.5
    /// ```
    ///
    /// A full experiment config is also accepted; its clique structure is used.
    pub fn parse(text: &str, default_horizon: u64) -> Result<Self> {
        let inline: std::result::Result<Vec<usize>, _> = text
            .trim()
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect();
        if let Ok(sizes) = inline {
            if sizes.contains(&0) {
                return Err(Error::Config(vec![
                    "sizes: entries must be at least 1".into()
                ]));
            }
            return Ok(Self::single(sizes, default_horizon));
        }
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            Error::Config(vec![format!("syntax: {}", e.message())])
        })?;
        if table.contains_key("environment") {
            return crate::config::parse_config(text).map(|c| Self::from_config(&c));
        }
        parse_bounds_table(&table, default_horizon)
    }

    pub fn rows(&self) -> Vec<(u64, f64)> {
        self.checkpoints
            .resolve(self.horizon)
            .into_iter()
            .map(|t| (t, bound_dag(&self.cliques, &self.weights, t)))
            .collect()
    }

    /// `T,bound` CSV.
    pub fn csv(&self) -> String {
        let mut out = String::from("T,bound\n");
        for (t, b) in self.rows() {
            let _ = writeln!(out, "{t},{}", format_sig(b));
        }
        out
    }
}

fn parse_bounds_table(table: &toml::Table, default_horizon: u64) -> Result<BoundsSpec> {
    use toml::Value;
    let mut errors = Vec::new();
    for key in table.keys() {
        if !["horizon", "checkpoints", "sizes", "cliques"].contains(&key.as_str()) {
            errors.push(format!("{key}: unknown key"));
        }
    }
    let sizes_of = |v: &Value, path: &str, errors: &mut Vec<String>| -> Option<Vec<usize>> {
        let list: Option<Vec<usize>> = v.as_array().and_then(|a| {
            a.iter()
                .map(|x| x.as_integer().filter(|&n| n >= 1).map(|n| n as usize))
                .collect()
        });
        if list.as_ref().is_none_or(Vec::is_empty) {
            errors.push(format!(
                "{path}: expected a non-empty list of positive integers"
            ));
        }
        list
    };
    let horizon = match table.get("horizon") {
        None => default_horizon,
        Some(Value::Integer(n)) if *n >= 1 => *n as u64,
        Some(_) => {
            errors.push("horizon: expected a positive integer".into());
            1
        }
    };
    let checkpoints = match table.get("checkpoints") {
        None => CheckpointPolicy::Log,
        Some(Value::String(s)) => CheckpointPolicy::parse(s).unwrap_or_else(|e| {
            errors.push(e.to_string());
            CheckpointPolicy::Log
        }),
        Some(Value::Array(items)) => {
            let points: Option<Vec<u64>> = items
                .iter()
                .map(|x| x.as_integer().filter(|&n| n >= 1).map(|n| n as u64))
                .collect();
            points.map(CheckpointPolicy::Explicit).unwrap_or_else(|| {
                errors.push("checkpoints: expected positive rounds".into());
                CheckpointPolicy::Log
            })
        }
        Some(_) => {
            errors.push("checkpoints: expected \"log\" or a list of rounds".into());
            CheckpointPolicy::Log
        }
    };
    let mut cliques = Vec::new();
    let mut weights = Vec::new();
    match (table.get("sizes"), table.get("cliques")) {
        (Some(v), None) => {
            if let Some(s) = sizes_of(v, "sizes", &mut errors) {
                cliques.push(s);
                weights.push(1.0);
            }
        }
        (None, Some(Value::Array(items))) => {
            for (i, item) in items.iter().enumerate() {
                let path = format!("cliques[{i}]");
                let Some(t) = item.as_table() else {
                    errors.push(format!("{path}: expected a table"));
                    continue;
                };
                for key in t
                    .keys()
                    .filter(|k| !["sizes", "weight"].contains(&k.as_str()))
                {
                    errors.push(format!("{path}.{key}: unknown key"));
                }
                let sizes = t
                    .get("sizes")
                    .and_then(|v| sizes_of(v, &format!("{path}.sizes"), &mut errors));
                let weight = match t.get("weight") {
                    Some(Value::Float(w)) if *w >= 0.0 => Some(*w),
                    Some(Value::Integer(w)) if *w >= 0 => Some(*w as f64),
                    _ => {
                        errors.push(format!("{path}.weight: expected a non-negative number"));
                        None
                    }
                };
                if let (Some(s), Some(w)) = (sizes, weight) {
                    cliques.push(s);
                    weights.push(w);
                }
            }
            let total: f64 = weights.iter().sum();
            if !cliques.is_empty() && (total - 1.0).abs() > crate::reward::WEIGHT_TOL {
                errors.push(format!("cliques: weights sum to {total}, not 1"));
            }
        }
        _ => errors.push("give exactly one of sizes or [[cliques]]".into()),
    }
    if !errors.is_empty() {
        return Err(Error::Config(errors));
    }
    Ok(BoundsSpec {
        cliques,
        weights,
        horizon,
        checkpoints,
    })
}

/// Human-readable oracle report.
pub fn describe_oracle(config: &ExperimentConfig, oracle: &OracleResult) -> String {
    let mut ranked: Vec<(usize, f64)> = oracle.values.iter().copied().enumerate().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut s = String::new();
    let _ = writeln!(s, "best joint action: {:?}", oracle.best_action.actions());
    let _ = writeln!(
        s,
        "mean total reward over T={}: {} (per round {})",
        config.horizon,
        format_sig(oracle.best_value),
        format_sig(oracle.best_value / config.horizon as f64)
    );
    let _ = writeln!(s, "runner-up actions:");
    for &(index, value) in ranked.iter().skip(1).take(4) {
        let action: JointAction = config.graph.decode_joint(index as u128);
        let _ = writeln!(s, "  {:?}: {}", action.actions(), format_sig(value));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::regret::cumulative_at;

    #[test]
    fn sig_formatting_matches_printf() {
        let cases = [
            (1201.0, "1201"),
            (0.1, "0.1"),
            (1368.685424949238, "1368.685425"),
            (131256.43876330613, "131256.4388"),
            (1.0 / 3.0, "0.3333333333"),
            (-2.5, "-2.5"),
            (1e-5, "1e-05"),
            (1.234e-7, "1.234e-07"),
            (12345678901.0, "1.23456789e+10"),
            (9999999999.5, "1e+10"),
            (0.0001, "0.0001"),
            (0.0, "0"),
            (1e6, "1000000"),
        ];
        for (x, want) in cases {
            assert_eq!(format_sig(x), want, "{x}");
        }
    }

    #[test]
    fn bounds_examples() {
        let spec = BoundsSpec::parse("9", 10_000).unwrap();
        assert_eq!(spec.rows().last().unwrap(), &(10_000, 1201.0));
        let spec = BoundsSpec::parse("9,3,3,3", 1_000_000).unwrap();
        let (t, b) = *spec.rows().last().unwrap();
        assert_eq!(t, 1_000_000);
        assert!((b - 131256.43876330613).abs() < 1e-6);
    }

    #[test]
    fn identical_weighted_cliques_match_single_clique() {
        let text = r#"
            horizon = 5000
            [[cliques]]
            sizes = [4, 2]
            weight = 0.5
            [[cliques]]
            sizes = [4, 2]
            weight = 0.5
        "#;
        let split = BoundsSpec::parse(text, 1).unwrap();
        let single = BoundsSpec::parse("4,2", 5000).unwrap();
        assert_eq!(split.csv(), single.csv());
        assert!(split.csv().starts_with("T,bound\n1,"));
    }

    #[test]
    fn bounds_spec_errors() {
        assert!(BoundsSpec::parse("9,0", 10).is_err());
        let Err(Error::Config(errs)) = BoundsSpec::parse(
            "sizes = [2]\nextra = 1\n[[cliques]]\nsizes=[2]\nweight=1.0",
            10,
        ) else {
            panic!("expected errors");
        };
        assert!(errs.iter().any(|e| e == "extra: unknown key"));
        assert!(errs.iter().any(|e| e.contains("exactly one")));
    }

    #[test]
    fn taxation_bound_uses_one_clique_in_observation_order() {
        let cfg = ExperimentConfig::taxation_preset(1000, 1, 0);
        let (sizes, weights) = bound_structure(&cfg);
        assert_eq!(sizes, vec![vec![9, 3, 3, 3]]);
        assert_eq!(weights, vec![1.0]);
    }

    fn chain_config() -> ExperimentConfig {
        parse_config(
            r#"
            horizon = 300
            seeds = 3
            master_seed = 11
            oracle_replays = 4
            [graph]
            action_sizes = [2, 2]
            edges = [[0, 1]]
            [environment]
            kind = "stochastic-clique"
            [[environment.cliques]]
            players = [0, 1]
            weight = 1.0
            means = [0.9, 0.5, 0.5, 0.5]
            "#,
        )
        .unwrap()
    }

    #[test]
    fn serial_and_parallel_agree() {
        let cfg = chain_config();
        let serial = run_experiment(
            &cfg,
            &RunOptions {
                serial: true,
                workers: None,
            },
        )
        .unwrap();
        let parallel = run_experiment(
            &cfg,
            &RunOptions {
                serial: false,
                workers: Some(3),
            },
        )
        .unwrap();
        assert_eq!(serial.report, parallel.report);
        assert_eq!(serial.oracle, parallel.oracle);
        assert_eq!(serial.oracle.best_action.actions(), &[0, 0]);
    }

    #[test]
    fn csv_layout() {
        let cfg = chain_config();
        let out = run_experiment(&cfg, &RunOptions::default()).unwrap();
        let cumulative = cumulative_csv(&out.report);
        let lines: Vec<&str> = cumulative.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 1 + cfg.resolved_checkpoints().len());
        assert!(lines.last().unwrap().starts_with("300,"));
        for line in &lines[1..] {
            let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
            assert_eq!(fields.len(), 5);
            assert!(fields[2] <= fields[1] && fields[1] <= fields[3]);
        }
        let average = average_csv(&out.report);
        let last: Vec<f64> = average
            .lines()
            .last()
            .unwrap()
            .split(',')
            .map(|f| f.parse().unwrap())
            .collect();
        let row = out.report.last().unwrap();
        assert!((last[1] - row.cumulative.mean / 300.0).abs() < 1e-9);
        assert!((last[4] - row.bound / 300.0).abs() < 1e-9);
        assert!(out.summary().contains("final bound"));
    }

    #[test]
    fn adding_runs_keeps_earlier_runs() {
        let cfg = chain_config();
        let checkpoints = cfg.resolved_checkpoints();
        let first = play_run(&cfg, 0, &checkpoints).unwrap();
        let mut more = cfg.clone();
        more.seeds = 10;
        assert_eq!(play_run(&more, 0, &checkpoints).unwrap(), first);
    }

    #[test]
    fn play_run_matches_reward_trace() {
        let cfg = chain_config();
        let checkpoints = cfg.resolved_checkpoints();
        let mut env = build_environment(&cfg).unwrap();
        let seed = rng::run_seed(cfg.master_seed, 1);
        let traj = crate::game::run_game(&cfg.graph, &mut env, cfg.horizon, seed).unwrap();
        assert_eq!(
            play_run(&cfg, 1, &checkpoints).unwrap(),
            cumulative_at(traj.rewards(), &checkpoints)
        );
    }
}
