//! Exact best responses by dynamic programming over every history.

use rayon::prelude::*;

use crate::error::EvalError;
use crate::eval::testtime::{policy_at, update_belief};
use crate::game::{GameSpec, History, Player};
use crate::solver::Checkpoint;

/// Default cap on the number of enumerated histories.
pub const DEFAULT_HISTORY_BUDGET: u128 = 10_000_000;
/// Histories with smaller reach count as unreachable.
pub const REACH_TOL: f64 = 1e-12;

/// Values at one history.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeValues {
    /// Player-1 value of the profile, per type.
    pub v1: Vec<f64>,
    /// Player-2 value of the profile conditioned on each type.
    pub v2: Vec<f64>,
    /// Player-1 best-response value, per type.
    pub br1: Vec<f64>,
    /// Player-2 best-response value under the posterior at the history.
    pub br2: f64,
    /// Player-2 best-response value conditioned on each type.
    w2: Vec<f64>,
}

/// Gains available to each player at one history.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryGain {
    pub history: History,
    pub belief: Vec<f64>,
    /// Per-type reach `prior * mu0 * prod pi1 pi2 P`.
    pub type_reach: Vec<f64>,
    /// Per-type player-1 gain `BR_1 - V_1`.
    pub p1_gains: Vec<f64>,
    /// Posterior-weighted player-2 gain.
    pub p2_gain: f64,
    pub values: NodeValues,
}

impl HistoryGain {
    pub fn reach(&self) -> f64 {
        self.type_reach.iter().sum()
    }

    /// Player-1 gain over every type.
    pub fn p1_gain(&self) -> f64 {
        self.p1_gains.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Player-1 gain over types that reach the history.
    pub fn p1_gain_reached(&self) -> Option<f64> {
        self.p1_gains
            .iter()
            .zip(&self.type_reach)
            .filter(|(_, r)| **r > REACH_TOL)
            .map(|(g, _)| *g)
            .reduce(f64::max)
    }
}

/// Number of histories of length `0..L` consistent with the game's supports.
pub fn count_histories(spec: &GameSpec) -> u128 {
    count_from(spec, spec.initial_state_dist().iter().map(|&p| (p > 0.0) as u128).collect(), spec.horizon())
}

fn count_from(spec: &GameSpec, mut level: Vec<u128>, rounds: usize) -> u128 {
    let mut total: u128 = 0;
    for l in 0..rounds {
        total = total.saturating_add(level.iter().fold(0u128, |a, &c| a.saturating_add(c)));
        if l + 1 == rounds {
            break;
        }
        let mut next = vec![0u128; spec.n_states()];
        for (s, &c) in level.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for a1 in 0..spec.n_actions_p1() {
                for a2 in 0..spec.n_actions_p2() {
                    for &(sn, p) in spec.transition(s, a1, a2) {
                        if p > 0.0 {
                            next[sn] = next[sn].saturating_add(c);
                        }
                    }
                }
            }
        }
        level = next;
    }
    total
}

/// Histories in the subtree rooted at a round-`round` history ending in `s`.
pub fn count_subtree(spec: &GameSpec, round: usize, s: usize) -> u128 {
    let mut level = vec![0u128; spec.n_states()];
    level[s] = 1;
    count_from(spec, level, spec.horizon() - round)
}

pub(crate) struct Walker<'a> {
    pub spec: &'a GameSpec,
    pub ckpt: &'a Checkpoint,
    pub record: bool,
}

impl Walker<'_> {
    /// Recursively evaluates the subtree at `h` with belief `b`.
    pub fn walk(
        &self,
        h: &History,
        b: &[f64],
        type_reach: &[f64],
        rows: &mut Vec<HistoryGain>,
    ) -> NodeValues {
        let spec = self.spec;
        let l = h.rounds_elapsed();
        let s = h.current_state();
        let (nt, na1, na2) = (spec.n_types(), spec.n_actions_p1(), spec.n_actions_p2());
        let gamma = spec.discount();
        let (p1, p2) = policy_at(self.ckpt, l, b, s);
        let last = l + 1 == spec.horizon();
        let row_index = rows.len();
        if self.record {
            rows.push(HistoryGain {
                history: h.clone(),
                belief: b.to_vec(),
                type_reach: type_reach.to_vec(),
                p1_gains: Vec::new(),
                p2_gain: 0.0,
                values: NodeValues {
                    v1: Vec::new(),
                    v2: Vec::new(),
                    br1: Vec::new(),
                    br2: 0.0,
                    w2: Vec::new(),
                },
            });
        }

        // q*[ty][a1][a2]: stage payoff plus discounted expected continuation
        let n = nt * na1 * na2;
        let idx = |ty: usize, a1: usize, a2: usize| (ty * na1 + a1) * na2 + a2;
        let mut qv1 = vec![0.0; n];
        let mut qv2 = vec![0.0; n];
        let mut qbr1 = vec![0.0; n];
        let mut qw2 = vec![0.0; n];
        for a1 in 0..na1 {
            let (b_next, _) = update_belief(b, &p1, a1);
            for a2 in 0..na2 {
                for ty in 0..nt {
                    let i = idx(ty, a1, a2);
                    qv1[i] = spec.payoff(Player::One, ty, s, a1, a2);
                    qv2[i] = spec.payoff(Player::Two, ty, s, a1, a2);
                    qbr1[i] = qv1[i];
                    qw2[i] = qv2[i];
                }
                if last {
                    continue;
                }
                for &(sn, p) in spec.transition(s, a1, a2) {
                    if p <= 0.0 {
                        continue;
                    }
                    let child_reach: Vec<f64> = (0..nt)
                        .map(|ty| type_reach[ty] * p1[ty][a1] * p2[a2] * p)
                        .collect();
                    let child = self.walk(&h.extended(a1, a2, sn), &b_next, &child_reach, rows);
                    for ty in 0..nt {
                        let i = idx(ty, a1, a2);
                        qv1[i] += gamma * p * child.v1[ty];
                        qv2[i] += gamma * p * child.v2[ty];
                        qbr1[i] += gamma * p * child.br1[ty];
                        qw2[i] += gamma * p * child.w2[ty];
                    }
                }
            }
        }

        let mut v1 = vec![0.0; nt];
        let mut v2 = vec![0.0; nt];
        let mut br1 = vec![0.0; nt];
        for ty in 0..nt {
            let mut best = f64::NEG_INFINITY;
            for a1 in 0..na1 {
                let mut q = 0.0;
                for a2 in 0..na2 {
                    let i = idx(ty, a1, a2);
                    v1[ty] += p1[ty][a1] * p2[a2] * qv1[i];
                    v2[ty] += p1[ty][a1] * p2[a2] * qv2[i];
                    q += p2[a2] * qbr1[i];
                }
                if q > best {
                    best = q;
                }
            }
            br1[ty] = best;
        }
        // player 2 best responds to the posterior; ties go to the lowest index
        let mut best_a2 = 0;
        let mut br2 = f64::NEG_INFINITY;
        for a2 in 0..na2 {
            let mut q = 0.0;
            for ty in 0..nt {
                for a1 in 0..na1 {
                    q += b[ty] * p1[ty][a1] * qw2[idx(ty, a1, a2)];
                }
            }
            if q > br2 {
                br2 = q;
                best_a2 = a2;
            }
        }
        let w2: Vec<f64> = (0..nt)
            .map(|ty| (0..na1).map(|a1| p1[ty][a1] * qw2[idx(ty, a1, best_a2)]).sum())
            .collect();
        let values = NodeValues {
            v1,
            v2,
            br1,
            br2,
            w2,
        };
        if self.record {
            let row = &mut rows[row_index];
            row.p1_gains = (0..nt).map(|ty| values.br1[ty] - values.v1[ty]).collect();
            let v2_post: f64 = (0..nt).map(|ty| b[ty] * values.v2[ty]).sum();
            row.p2_gain = values.br2 - v2_post;
            row.values = values.clone();
        }
        values
    }
}

/// Full analysis of every history: per-history gains in depth-first order.
pub fn analyze_histories(
    spec: &GameSpec,
    ckpt: &Checkpoint,
    budget: u128,
) -> Result<Vec<HistoryGain>, EvalError> {
    ckpt.verify_game(spec)?;
    let needed = count_histories(spec);
    if needed > budget {
        return Err(EvalError::BudgetExceeded { needed, budget });
    }
    let walker = Walker {
        spec,
        ckpt,
        record: true,
    };
    let roots: Vec<usize> = (0..spec.n_states())
        .filter(|&s| spec.initial_state_dist()[s] > 0.0)
        .collect();
    let per_root: Vec<Vec<HistoryGain>> = roots
        .par_iter()
        .map(|&s0| {
            let reach: Vec<f64> = spec
                .prior()
                .iter()
                .map(|p| p * spec.initial_state_dist()[s0])
                .collect();
            let mut rows = Vec::new();
            walker.walk(&History::new(s0), spec.prior(), &reach, &mut rows);
            rows
        })
        .collect();
    Ok(per_root.into_iter().flatten().collect())
}

/// Best-response values of `player` at every history.
pub fn best_response_value(
    spec: &GameSpec,
    ckpt: &Checkpoint,
    player: Player,
) -> Result<Vec<(History, Vec<f64>)>, EvalError> {
    let rows = analyze_histories(spec, ckpt, DEFAULT_HISTORY_BUDGET)?;
    Ok(rows
        .into_iter()
        .map(|r| {
            let v = match player {
                Player::One => r.values.br1,
                Player::Two => vec![r.values.br2],
            };
            (r.history, v)
        })
        .collect())
}

/// Exact values of the subtree at a given history with its test-time belief.
pub(crate) fn subtree_values(
    spec: &GameSpec,
    ckpt: &Checkpoint,
    h: &History,
    b: &[f64],
) -> NodeValues {
    let walker = Walker {
        spec,
        ckpt,
        record: false,
    };
    let mut rows = Vec::new();
    walker.walk(h, b, &vec![0.0; spec.n_types()], &mut rows)
}

/// Expected per-type player-1 values and player-2 value of the profile from
/// the initial distribution.
pub fn profile_root_values(
    spec: &GameSpec,
    ckpt: &Checkpoint,
) -> Result<(Vec<f64>, f64), EvalError> {
    ckpt.verify_game(spec)?;
    let needed = count_histories(spec);
    if needed > DEFAULT_HISTORY_BUDGET {
        return Err(EvalError::BudgetExceeded {
            needed,
            budget: DEFAULT_HISTORY_BUDGET,
        });
    }
    let mut v1 = vec![0.0; spec.n_types()];
    let mut v2 = 0.0;
    for (s0, &mu) in spec.initial_state_dist().iter().enumerate() {
        if mu <= 0.0 {
            continue;
        }
        let vals = subtree_values(spec, ckpt, &History::new(s0), spec.prior());
        for ty in 0..spec.n_types() {
            v1[ty] += mu * vals.v1[ty];
            v2 += mu * spec.prior()[ty] * vals.v2[ty];
        }
    }
    Ok((v1, v2))
}
