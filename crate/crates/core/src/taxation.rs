//! Taxation game: a planner picks marginal tax rates per income bracket,
//! workers pick how much to work, and the joint reward mixes worker utility
//! with collected tax.
//!
//! Player 0 is the planner; players `1..=M` are workers. Every worker observes
//! the planner and all lower-indexed workers.
//!
//! Both reward terms are normalized to `[0, 1]` before mixing. Worker utility
//! at round `t` is mapped through the envelope `[U_min(t), U_max(t)]`, where
//! `U_max` pairs the largest attainable net income with the smallest labor and
//! `U_min` the smallest net income with the largest labor. Utility increases in
//! income and decreases in labor, so every reachable value lies inside. Total
//! tax is divided by its per-round maximum.

use crate::error::{Error, Result};
use crate::graph::{GameGraph, JointAction};
use crate::reward::Environment;

/// Tolerance on `M w + w_p = M + 1`.
pub const WEIGHT_IDENTITY_TOL: f64 = 1e-12;

/// Piecewise-linear marginal taxation.
#[derive(Debug, Clone, PartialEq)]
pub struct TaxSchedule {
    /// Interior bracket boundaries `beta_1 < ... < beta_{N-1}`; `beta_0 = 0`, `beta_N = inf`.
    pub boundaries: Vec<f64>,
    /// Admissible marginal rates of each of the `N` brackets.
    pub rate_grid: Vec<Vec<f64>>,
}

impl TaxSchedule {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidTaxation(msg));
        if self.rate_grid.len() != self.boundaries.len() + 1 {
            return bad(format!(
                "{} boundaries need {} rate sets, got {}",
                self.boundaries.len(),
                self.boundaries.len() + 1,
                self.rate_grid.len()
            ));
        }
        let mut prev = 0.0;
        for &b in &self.boundaries {
            if !(b > prev && b.is_finite()) {
                return bad(format!(
                    "boundaries must increase from 0, got {:?}",
                    self.boundaries
                ));
            }
            prev = b;
        }
        for (i, rates) in self.rate_grid.iter().enumerate() {
            if rates.is_empty() {
                return bad(format!("bracket {i} has no rates"));
            }
            if let Some(r) = rates.iter().find(|r| !(0.0..=1.0).contains(*r)) {
                return bad(format!("rate {r} in bracket {i} is outside [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn brackets(&self) -> usize {
        self.rate_grid.len()
    }

    /// `prod_i |R_i|`.
    pub fn planner_actions(&self) -> usize {
        self.rate_grid.iter().map(Vec::len).product()
    }

    /// Rates selected by a planner action, first bracket most significant.
    pub fn rates(&self, mut action: usize) -> Vec<f64> {
        let mut rates = vec![0.0; self.brackets()];
        for (slot, grid) in rates.iter_mut().zip(&self.rate_grid).rev() {
            *slot = grid[action % grid.len()];
            action /= grid.len();
        }
        rates
    }

    fn extreme_rates(&self, pick: fn(f64, f64) -> f64, init: f64) -> Vec<f64> {
        self.rate_grid
            .iter()
            .map(|g| g.iter().copied().fold(init, pick))
            .collect()
    }
}

/// Tax collected on gross income `x` under per-bracket `rates`.
pub fn collected_tax(x: f64, boundaries: &[f64], rates: &[f64]) -> f64 {
    let mut lower = 0.0;
    let mut tax = 0.0;
    for (i, &rate) in rates.iter().enumerate() {
        let upper = boundaries.get(i).copied().unwrap_or(f64::INFINITY);
        if x <= lower {
            break;
        }
        tax += rate * (x.min(upper) - lower);
        lower = upper;
    }
    tax
}

/// Isoelastic income utility minus labor: `(z^(1-eta) - 1) / (1 - eta) - l`.
pub fn worker_utility(net_income: f64, labor: f64, curvature: f64) -> f64 {
    let k = 1.0 - curvature;
    (net_income.powf(k) - 1.0) / k - labor
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaxationParams {
    pub schedule: TaxSchedule,
    /// Skill of each worker; labor per round is `action / skill`.
    pub skills: Vec<f64>,
    /// Worker actions are `1..=worker_actions`.
    pub worker_actions: usize,
    /// Gross income per unit of action.
    pub income_per_action: f64,
    /// Utility curvature `eta_u`.
    pub utility_curvature: f64,
    pub worker_weight: f64,
    pub planner_weight: f64,
}

impl TaxationParams {
    /// Two brackets split at 14 with rates {0.1, 0.3, 0.5}; three workers with
    /// skills 1, 2, 3 choosing 1..=3; income 5 per unit; `eta_u = 0.3`;
    /// `w = 1/M`, `w_p = M`.
    pub fn preset_v1() -> Self {
        let workers = 3;
        Self {
            schedule: TaxSchedule {
                boundaries: vec![14.0],
                rate_grid: vec![vec![0.1, 0.3, 0.5]; 2],
            },
            skills: (1..=workers).map(|j| j as f64).collect(),
            worker_actions: 3,
            income_per_action: 5.0,
            utility_curvature: 0.3,
            worker_weight: 1.0 / workers as f64,
            planner_weight: workers as f64,
        }
    }

    pub fn workers(&self) -> usize {
        self.skills.len()
    }

    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        let bad = |msg: String| Err(Error::InvalidTaxation(msg));
        if self.skills.is_empty() {
            return bad("at least one worker is required".into());
        }
        if let Some(s) = self.skills.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return bad(format!("skill {s} must be positive"));
        }
        if self.worker_actions == 0 {
            return bad("workers need at least one action".into());
        }
        if !(self.income_per_action > 0.0 && self.income_per_action.is_finite()) {
            return bad(format!(
                "income per action {} must be positive",
                self.income_per_action
            ));
        }
        let eta = self.utility_curvature;
        if !(eta > 0.0 && eta.is_finite()) || eta == 1.0 {
            return bad(format!(
                "utility curvature {eta} must be positive and not 1"
            ));
        }
        if self.worker_weight < 0.0 || self.planner_weight < 0.0 {
            return bad("weights must be non-negative".into());
        }
        let m = self.workers() as f64;
        let identity = m * self.worker_weight + self.planner_weight;
        if (identity - (m + 1.0)).abs() > WEIGHT_IDENTITY_TOL {
            return bad(format!("M w + w_p = {identity}, expected {}", m + 1.0));
        }
        Ok(())
    }

    /// Planner observed by every worker; worker `j` observed by every later worker.
    pub fn graph(&self) -> Result<GameGraph> {
        let m = self.workers();
        let mut sizes = vec![self.schedule.planner_actions()];
        sizes.extend(std::iter::repeat_n(self.worker_actions, m));
        let mut edges = Vec::new();
        for j in 1..=m {
            edges.push((0, j));
            for k in j + 1..=m {
                edges.push((j, k));
            }
        }
        GameGraph::new(sizes, edges)
    }

    fn gross_income(&self, action_index: usize) -> f64 {
        self.income_per_action * (action_index + 1) as f64
    }

    fn envelope(&self) -> Envelope {
        let max_rates = self.schedule.extreme_rates(f64::max, f64::NEG_INFINITY);
        let min_rates = self.schedule.extreme_rates(f64::min, f64::INFINITY);
        let b = &self.schedule.boundaries;
        let low_x = self.gross_income(0);
        let high_x = self.gross_income(self.worker_actions - 1);
        let min_skill = self.skills.iter().copied().fold(f64::INFINITY, f64::min);
        let max_skill = self.skills.iter().copied().fold(0.0, f64::max);
        Envelope {
            net_min: low_x - collected_tax(low_x, b, &max_rates),
            net_max: high_x - collected_tax(high_x, b, &min_rates),
            labor_min: 1.0 / max_skill,
            labor_max: self.worker_actions as f64 / min_skill,
            tax_max: self.workers() as f64 * collected_tax(high_x, b, &max_rates),
        }
    }
}

/// Per-round increments that bound every reachable state.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Envelope {
    net_min: f64,
    net_max: f64,
    labor_min: f64,
    labor_max: f64,
    tax_max: f64,
}

/// Cumulative worker state.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnvState {
    pub net_income: Vec<f64>,
    pub labor: Vec<f64>,
    pub round: u64,
}

/// Everything computed in one environment step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepBreakdown {
    pub rates: Vec<f64>,
    pub gross_income: Vec<f64>,
    pub tax: Vec<f64>,
    pub utility: Vec<f64>,
    /// Normalized utilities in `[0, 1]`.
    pub utility_score: Vec<f64>,
    /// Total tax over its per-round maximum.
    pub tax_score: f64,
    pub reward: f64,
}

#[derive(Debug, Clone)]
pub struct TaxationEnv {
    params: TaxationParams,
    envelope: Envelope,
    state: EnvState,
}

impl TaxationEnv {
    pub fn new(params: TaxationParams) -> Result<Self> {
        params.validate()?;
        let envelope = params.envelope();
        let m = params.workers();
        Ok(Self {
            params,
            envelope,
            state: EnvState {
                net_income: vec![0.0; m],
                labor: vec![0.0; m],
                round: 0,
            },
        })
    }

    pub fn params(&self) -> &TaxationParams {
        &self.params
    }

    pub fn state(&self) -> &EnvState {
        &self.state
    }

    /// Utility envelope `(U_min(t), U_max(t))` for a 1-based round.
    pub fn utility_bounds(&self, round: u64) -> (f64, f64) {
        let t = round as f64;
        let e = &self.envelope;
        let eta = self.params.utility_curvature;
        (
            worker_utility(t * e.net_min, t * e.labor_max, eta),
            worker_utility(t * e.net_max, t * e.labor_min, eta),
        )
    }

    /// Advances one round; worker actions are 0-based indices.
    pub fn advance(
        &mut self,
        planner_action: usize,
        worker_actions: &[usize],
    ) -> Result<StepBreakdown> {
        let p = &self.params;
        let m = p.workers();
        if planner_action >= p.schedule.planner_actions() {
            return Err(Error::ActionOutOfRange {
                player: 0,
                action: planner_action,
                arms: p.schedule.planner_actions(),
            });
        }
        if worker_actions.len() != m {
            return Err(Error::JointActionArity {
                got: worker_actions.len() + 1,
                expected: m + 1,
            });
        }
        if let Some((j, &a)) = worker_actions
            .iter()
            .enumerate()
            .find(|(_, &a)| a >= p.worker_actions)
        {
            return Err(Error::ActionOutOfRange {
                player: j + 1,
                action: a,
                arms: p.worker_actions,
            });
        }

        self.state.round += 1;
        let (u_min, u_max) = self.utility_bounds(self.state.round);
        let range = u_max - u_min;
        let rates = p.schedule.rates(planner_action);
        let mut breakdown = StepBreakdown {
            rates,
            gross_income: Vec::with_capacity(m),
            tax: Vec::with_capacity(m),
            utility: Vec::with_capacity(m),
            utility_score: Vec::with_capacity(m),
            tax_score: 0.0,
            reward: 0.0,
        };
        for (j, &a) in worker_actions.iter().enumerate() {
            let x = p.gross_income(a);
            let tax = collected_tax(x, &p.schedule.boundaries, &breakdown.rates);
            self.state.net_income[j] += x - tax;
            self.state.labor[j] += (a + 1) as f64 / p.skills[j];
            let u = worker_utility(
                self.state.net_income[j],
                self.state.labor[j],
                p.utility_curvature,
            );
            if !u.is_finite() {
                return Err(Error::InvalidTaxation(format!(
                    "worker {} utility is {u} at round {}",
                    j + 1,
                    self.state.round
                )));
            }
            // A degenerate envelope carries no information about the worker.
            let score = if range > 0.0 {
                ((u - u_min) / range).clamp(0.0, 1.0)
            } else {
                0.5
            };
            breakdown.gross_income.push(x);
            breakdown.tax.push(tax);
            breakdown.utility.push(u);
            breakdown.utility_score.push(score);
        }
        let total_tax: f64 = breakdown.tax.iter().sum();
        breakdown.tax_score = if self.envelope.tax_max > 0.0 {
            total_tax / self.envelope.tax_max
        } else {
            0.0
        };
        let worker_term: f64 = breakdown.utility_score.iter().sum::<f64>() * p.worker_weight;
        breakdown.reward = ((worker_term + p.planner_weight * breakdown.tax_score)
            / (m as f64 + 1.0))
            .clamp(0.0, 1.0);
        Ok(breakdown)
    }
}

impl Environment for TaxationEnv {
    fn reset(&mut self, _seed: u64) {
        self.state.net_income.iter_mut().for_each(|z| *z = 0.0);
        self.state.labor.iter_mut().for_each(|l| *l = 0.0);
        self.state.round = 0;
    }

    fn step(&mut self, _round: u64, action: &JointAction) -> Result<f64> {
        let (planner, workers) = action
            .actions()
            .split_first()
            .ok_or(Error::JointActionArity {
                got: 0,
                expected: self.params.workers() + 1,
            })?;
        self.advance(*planner, workers).map(|b| b.reward)
    }

    fn is_deterministic(&self) -> bool {
        true
    }
}

/// Graph and parameters of the built-in `taxation-v1` experiment.
#[derive(Debug, Clone)]
pub struct TaxationExperiment {
    pub graph: GameGraph,
    pub params: TaxationParams,
}

impl TaxationExperiment {
    pub fn new(params: TaxationParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            graph: params.graph()?,
            params,
        })
    }

    pub fn env(&self) -> TaxationEnv {
        TaxationEnv::new(self.params.clone()).expect("validated parameters")
    }

    /// Clique sizes in observation order; the reward couples all players.
    pub fn clique_sizes(&self) -> Vec<usize> {
        self.graph
            .order()
            .iter()
            .map(|&p| self.graph.arms(p))
            .collect()
    }
}

pub fn build_experiment() -> TaxationExperiment {
    TaxationExperiment::new(TaxationParams::preset_v1()).expect("preset is valid")
}
