use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::eval::br::{analyze_histories, HistoryGain, DEFAULT_HISTORY_BUDGET, REACH_TOL};
use crate::game::{GameSpec, History};
use crate::solver::{Algo, Checkpoint};

pub const REPORT_SCHEMA: &str = "tisp-report-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonMode {
    /// Every history, on and off path.
    Pbe,
    /// Histories reached by the profile.
    Ne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Enumeration {
    Full,
    InducedSample,
}

/// Inputs and value of `L (d U + c / sqrt(T))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub rounds: usize,
    pub density: f64,
    pub iterations: usize,
    pub payoff_range: f64,
    pub c: f64,
    pub value: f64,
}

/// One history's gains in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainRow {
    pub history: String,
    pub round: usize,
    pub reach: f64,
    pub p1_gain: f64,
    pub p2_gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub schema: String,
    pub mode: EpsilonMode,
    pub enumeration: Enumeration,
    pub epsilon: f64,
    /// Worst player-1 gain over audited histories (max over types).
    pub p1_gain: f64,
    /// Worst player-2 gain over audited histories.
    pub p2_gain: f64,
    pub worst_player: u8,
    pub worst_history: Option<History>,
    pub audited_histories: usize,
    /// `U = L * (max u - min u)`.
    pub utility_range: f64,
    pub bound: Option<BoundInputs>,
    pub rows: Vec<GainRow>,
}

impl EpsilonReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, EvalError> {
        serde_json::from_str(text).map_err(|e| EvalError::Invalid(e.to_string()))
    }

    /// Flat per-history gains.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("history,round,reach,p1_gain,p2_gain\n");
        for r in &self.rows {
            writeln!(out, "\"{}\",{},{},{},{}", r.history, r.round, r.reach, r.p1_gain, r.p2_gain)
                .expect("write to string");
        }
        out
    }
}

/// `L (d U + c T^(-1/2))` with `U = L * payoff_range`; `c` is the squared
/// gradient-norm bound for policy gradient and `payoff_range * sqrt(|A|)` for
/// regret matching.
pub fn theoretical_bound(
    rounds: usize,
    density: f64,
    iterations: usize,
    payoff_range: f64,
    n_actions: usize,
    algo: Algo,
    grad_norm_bound: f64,
) -> f64 {
    let (_, value) = bound_parts(rounds, density, iterations, payoff_range, n_actions, algo, grad_norm_bound);
    value
}

fn bound_parts(
    rounds: usize,
    density: f64,
    iterations: usize,
    payoff_range: f64,
    n_actions: usize,
    algo: Algo,
    grad_norm_bound: f64,
) -> (f64, f64) {
    let l = rounds as f64;
    let u = l * payoff_range;
    let c = match algo {
        Algo::Pg => grad_norm_bound * grad_norm_bound,
        Algo::Cfr => payoff_range * (n_actions as f64).sqrt(),
    };
    (c, l * (density * u + c / (iterations as f64).sqrt()))
}

/// Bound value together with its inputs.
pub fn bound_inputs(
    rounds: usize,
    density: f64,
    iterations: usize,
    payoff_range: f64,
    n_actions: usize,
    algo: Algo,
    grad_norm_bound: f64,
) -> BoundInputs {
    let (c, value) = bound_parts(rounds, density, iterations, payoff_range, n_actions, algo, grad_norm_bound);
    BoundInputs {
        rounds,
        density,
        iterations,
        payoff_range,
        c,
        value,
    }
}

/// Bound inputs for a trained checkpoint.
pub fn checkpoint_bound(spec: &GameSpec, ckpt: &Checkpoint) -> BoundInputs {
    let range = spec.payoff_range();
    let n_actions = spec.n_actions_p1().max(spec.n_actions_p2());
    let density = ckpt.grids.iter().map(|g| g.density()).fold(0.0, f64::max);
    let grad = ckpt.diagnostics.max_grad_sq_norm().sqrt();
    let (c, value) = bound_parts(
        spec.horizon(),
        density,
        ckpt.config.iterations,
        range,
        n_actions,
        ckpt.config.algo,
        grad,
    );
    BoundInputs {
        rounds: spec.horizon(),
        density,
        iterations: ckpt.config.iterations,
        payoff_range: range,
        c,
        value,
    }
}

fn build_report(
    spec: &GameSpec,
    ckpt: &Checkpoint,
    rows: &[HistoryGain],
    mode: EpsilonMode,
) -> EpsilonReport {
    let mut p1_worst = 0.0f64;
    let mut p2_worst = 0.0f64;
    let mut eps = f64::NEG_INFINITY;
    let mut worst: Option<(u8, &History)> = None;
    let mut out_rows = Vec::new();
    for r in rows {
        let (g1, g2) = match mode {
            EpsilonMode::Pbe => (Some(r.p1_gain()), Some(r.p2_gain)),
            EpsilonMode::Ne => {
                if r.reach() <= REACH_TOL {
                    continue;
                }
                (r.p1_gain_reached(), Some(r.p2_gain))
            }
        };
        for (player, g) in [(1u8, g1), (2u8, g2)] {
            let Some(g) = g else { continue };
            if g > eps {
                eps = g;
                worst = Some((player, &r.history));
            }
        }
        if let Some(g) = g1 {
            p1_worst = p1_worst.max(g);
        }
        if let Some(g) = g2 {
            p2_worst = p2_worst.max(g);
        }
        out_rows.push(GainRow {
            history: r.history.to_string(),
            round: r.history.rounds_elapsed(),
            reach: r.reach(),
            p1_gain: g1.unwrap_or(0.0),
            p2_gain: g2.unwrap_or(0.0),
        });
    }
    EpsilonReport {
        schema: REPORT_SCHEMA.to_string(),
        mode,
        enumeration: Enumeration::Full,
        epsilon: eps.max(0.0),
        p1_gain: p1_worst,
        p2_gain: p2_worst,
        worst_player: worst.map_or(0, |w| w.0),
        worst_history: worst.map(|w| w.1.clone()),
        audited_histories: out_rows.len(),
        utility_range: spec.horizon() as f64 * spec.payoff_range(),
        bound: Some(checkpoint_bound(spec, ckpt)),
        rows: out_rows,
    }
}

/// Certified epsilon over every history (perfect Bayesian equilibrium).
pub fn epsilon_pbe(spec: &GameSpec, ckpt: &Checkpoint) -> Result<EpsilonReport, EvalError> {
    epsilon_with_budget(spec, ckpt, EpsilonMode::Pbe, DEFAULT_HISTORY_BUDGET)
}

/// Certified epsilon over histories reached by the profile (Nash equilibrium).
pub fn epsilon_ne(spec: &GameSpec, ckpt: &Checkpoint) -> Result<EpsilonReport, EvalError> {
    epsilon_with_budget(spec, ckpt, EpsilonMode::Ne, DEFAULT_HISTORY_BUDGET)
}

pub fn epsilon_with_budget(
    spec: &GameSpec,
    ckpt: &Checkpoint,
    mode: EpsilonMode,
    budget: u128,
) -> Result<EpsilonReport, EvalError> {
    let rows = analyze_histories(spec, ckpt, budget)?;
    Ok(build_report(spec, ckpt, &rows, mode))
}

/// Both reports from a single enumeration.
pub fn epsilon_both(
    spec: &GameSpec,
    ckpt: &Checkpoint,
    budget: u128,
) -> Result<(EpsilonReport, EpsilonReport), EvalError> {
    let rows = analyze_histories(spec, ckpt, budget)?;
    Ok((
        build_report(spec, ckpt, &rows, EpsilonMode::Pbe),
        build_report(spec, ckpt, &rows, EpsilonMode::Ne),
    ))
}
