//! Sampled exploitability for games too large to enumerate: exact and
//! learned best responses inside induced games rooted at sampled histories.

use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::eval::br::{count_subtree, subtree_values, DEFAULT_HISTORY_BUDGET};
use crate::eval::testtime::{policy_at, update_belief};
use crate::game::{sample_index, sample_successor, GameSpec, History, Player};
use crate::solver::{point_rng, Checkpoint};

pub const INDUCED_SCHEMA: &str = "tisp-induced-v1";

/// Exploration rate floor of the tabular exploiter.
const MIN_EXPLORATION: f64 = 0.05;
/// Fraction of the budget over which exploration decays to the floor.
const EXPLORATION_DECAY: f64 = 0.5;

/// Values of one induced game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedGame {
    pub history: String,
    pub belief: Vec<f64>,
    /// Type that generated the sampled history.
    pub sampled_type: usize,
    pub p2_profile: f64,
    pub p2_best_response: f64,
    pub p2_exploiter: f64,
    /// Gain of the best single-round deviation at the root, then the profile.
    pub p2_first_round_gain: f64,
    pub p1_profile: Vec<f64>,
    pub p1_best_response: Vec<f64>,
    pub p1_exploiter: Vec<f64>,
    pub p1_first_round_gain: Vec<f64>,
}

/// Means over the sampled games.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedSummary {
    pub p2_profile: f64,
    pub p2_best_response: f64,
    pub p2_exploiter: f64,
    pub p2_first_round_gain: f64,
    pub p1_profile: Vec<f64>,
    pub p1_best_response: Vec<f64>,
    pub p1_exploiter: Vec<f64>,
    pub p1_first_round_gain: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedReport {
    pub schema: String,
    pub depth: usize,
    pub n_games: usize,
    pub exploiter_budget: usize,
    pub seed: u64,
    pub summary: InducedSummary,
    pub games: Vec<InducedGame>,
}

impl InducedReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, EvalError> {
        serde_json::from_str(text).map_err(|e| EvalError::Invalid(format!("induced report: {e}")))
    }

    pub fn to_csv(&self) -> String {
        let nt = self.summary.p1_profile.len();
        let mut out = String::from("history,sampled_type,p2_profile,p2_best_response,p2_exploiter,p2_first_round_gain");
        for ty in 0..nt {
            let _ = write!(
                out,
                ",p1_t{ty}_profile,p1_t{ty}_best_response,p1_t{ty}_exploiter,p1_t{ty}_first_round_gain"
            );
        }
        out.push('\n');
        for g in &self.games {
            let _ = write!(
                out,
                "\"{}\",{},{},{},{},{}",
                g.history, g.sampled_type, g.p2_profile, g.p2_best_response, g.p2_exploiter, g.p2_first_round_gain
            );
            for ty in 0..nt {
                let _ = write!(
                    out,
                    ",{},{},{},{}",
                    g.p1_profile[ty], g.p1_best_response[ty], g.p1_exploiter[ty], g.p1_first_round_gain[ty]
                );
            }
            out.push('\n');
        }
        out
    }

    /// Exploiter rewards per player and type, one row each.
    pub fn table(&self, type_names: &[String]) -> String {
        let s = &self.summary;
        let mut out = format!(
            "{:<22}{:>12}{:>12}{:>12}{:>12}\n",
            "", "profile", "exploiter", "best resp.", "1st-round"
        );
        let _ = writeln!(
            out,
            "{:<22}{:>12.4}{:>12.4}{:>12.4}{:>12.4}",
            "P2 reward", s.p2_profile, s.p2_exploiter, s.p2_best_response, s.p2_first_round_gain
        );
        for ty in 0..s.p1_profile.len() {
            let name = type_names.get(ty).cloned().unwrap_or_else(|| format!("type {ty}"));
            let _ = writeln!(
                out,
                "{:<22}{:>12.4}{:>12.4}{:>12.4}{:>12.4}",
                format!("P1 reward ({name})"),
                s.p1_profile[ty],
                s.p1_exploiter[ty],
                s.p1_best_response[ty],
                s.p1_first_round_gain[ty]
            );
        }
        out
    }
}

/// Checkpoint profile unrolled over one induced game.
struct Tree {
    nodes: Vec<Node>,
}

struct Node {
    state: usize,
    p1: Vec<Vec<f64>>,
    p2: Vec<f64>,
    /// `children[a1 * n_a2 + a2]`: successors `(state, probability, node)`.
    children: Vec<Vec<(usize, f64, usize)>>,
}

impl Tree {
    fn build(spec: &GameSpec, ckpt: &Checkpoint, h: &History, b: &[f64]) -> Self {
        let mut nodes = Vec::new();
        Self::grow(spec, ckpt, h.rounds_elapsed(), h.current_state(), b, &mut nodes);
        Tree { nodes }
    }

    fn grow(
        spec: &GameSpec,
        ckpt: &Checkpoint,
        round: usize,
        s: usize,
        b: &[f64],
        nodes: &mut Vec<Node>,
    ) -> usize {
        let (p1, p2) = policy_at(ckpt, round, b, s);
        let (na1, na2) = (spec.n_actions_p1(), spec.n_actions_p2());
        let me = nodes.len();
        nodes.push(Node {
            state: s,
            p1: p1.clone(),
            p2,
            children: vec![Vec::new(); na1 * na2],
        });
        if round + 1 == spec.horizon() {
            return me;
        }
        for a1 in 0..na1 {
            let (b_next, _) = update_belief(b, &p1, a1);
            for a2 in 0..na2 {
                let mut kids = Vec::new();
                for &(sn, p) in spec.transition(s, a1, a2) {
                    if p > 0.0 {
                        let c = Self::grow(spec, ckpt, round + 1, sn, &b_next, nodes);
                        kids.push((sn, p, c));
                    }
                }
                nodes[me].children[a1 * na2 + a2] = kids;
            }
        }
        me
    }

    /// Expected value for `player` of type `ty` when it plays `plan[node]`
    /// (or the profile when `None`) and the opponent plays the profile.
    fn value(&self, spec: &GameSpec, i: usize, player: Player, ty: usize, plan: Option<&[usize]>) -> f64 {
        let node = &self.nodes[i];
        let (na1, na2) = (spec.n_actions_p1(), spec.n_actions_p2());
        let mut v = 0.0;
        for a1 in 0..na1 {
            for a2 in 0..na2 {
                let w = match (player, plan) {
                    (Player::One, Some(p)) => (p[i] == a1) as u8 as f64 * node.p2[a2],
                    (Player::Two, Some(p)) => node.p1[ty][a1] * (p[i] == a2) as u8 as f64,
                    (_, None) => node.p1[ty][a1] * node.p2[a2],
                };
                if w == 0.0 {
                    continue;
                }
                let mut q = spec.payoff(player, ty, node.state, a1, a2);
                for &(_, p, c) in &node.children[a1 * na2 + a2] {
                    q += spec.discount() * p * self.value(spec, c, player, ty, plan);
                }
                v += w * q;
            }
        }
        v
    }

    /// Player value at the root after deviating to `action` for one round.
    fn one_step(&self, spec: &GameSpec, player: Player, ty: usize, action: usize) -> f64 {
        let node = &self.nodes[0];
        let (na1, na2) = (spec.n_actions_p1(), spec.n_actions_p2());
        let mut v = 0.0;
        for a1 in 0..na1 {
            for a2 in 0..na2 {
                let w = match player {
                    Player::One => (a1 == action) as u8 as f64 * node.p2[a2],
                    Player::Two => node.p1[ty][a1] * (a2 == action) as u8 as f64,
                };
                if w == 0.0 {
                    continue;
                }
                let mut q = spec.payoff(player, ty, node.state, a1, a2);
                for &(_, p, c) in &node.children[a1 * na2 + a2] {
                    q += spec.discount() * p * self.value(spec, c, player, ty, None);
                }
                v += w * q;
            }
        }
        v
    }
}

/// Tabular every-visit Monte Carlo control for `player` against the frozen
/// profile; returns the greedy plan. Player 2 faces types drawn from `b`.
fn train_exploiter(
    spec: &GameSpec,
    tree: &Tree,
    player: Player,
    ty: Option<usize>,
    b: &[f64],
    episodes: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let n_own = spec.n_actions(player);
    let na2 = spec.n_actions_p2();
    let mut q = vec![0.0; tree.nodes.len() * n_own];
    let mut visits = vec![0u32; tree.nodes.len() * n_own];
    let decay = (episodes as f64 * EXPLORATION_DECAY).max(1.0);
    let mut path: Vec<(usize, usize, f64)> = Vec::new();
    for e in 0..episodes {
        let explore = (1.0 - e as f64 / decay).max(MIN_EXPLORATION);
        let lam = ty.unwrap_or_else(|| sample_index(b, rng));
        path.clear();
        let mut i = 0;
        loop {
            let node = &tree.nodes[i];
            let own = if rng.gen::<f64>() < explore {
                rng.gen_range(0..n_own)
            } else {
                greedy(&q[i * n_own..(i + 1) * n_own])
            };
            let (a1, a2) = match player {
                Player::One => (own, sample_index(&node.p2, rng)),
                Player::Two => (sample_index(&node.p1[lam], rng), own),
            };
            let r = spec.payoff(player, lam, node.state, a1, a2);
            path.push((i, own, r));
            let kids = &node.children[a1 * na2 + a2];
            if kids.is_empty() {
                break;
            }
            let row: Vec<(usize, f64)> = kids.iter().enumerate().map(|(j, k)| (j, k.1)).collect();
            i = kids[sample_successor(&row, rng)].2;
        }
        let mut g = 0.0;
        for &(i, a, r) in path.iter().rev() {
            g = r + spec.discount() * g;
            let cell = i * n_own + a;
            visits[cell] += 1;
            q[cell] += (g - q[cell]) / visits[cell] as f64;
        }
    }
    (0..tree.nodes.len())
        .map(|i| greedy(&q[i * n_own..(i + 1) * n_own]))
        .collect()
}

/// First index of the maximum.
fn greedy(q: &[f64]) -> usize {
    let mut best = 0;
    for (a, &v) in q.iter().enumerate() {
        if v > q[best] {
            best = a;
        }
    }
    best
}

/// Samples a history of `depth` rounds from the profile, returning it with
/// the test-time belief at its end and the type that generated it.
fn sample_history(
    spec: &GameSpec,
    ckpt: &Checkpoint,
    depth: usize,
    rng: &mut ChaCha8Rng,
) -> (History, Vec<f64>, usize) {
    let (s0, ty) = spec.reset(rng);
    let mut h = History::new(s0);
    let mut b = spec.prior().to_vec();
    for round in 0..depth {
        let s = h.current_state();
        let (p1, p2) = policy_at(ckpt, round, &b, s);
        let a1 = sample_index(&p1[ty], rng);
        let a2 = sample_index(&p2, rng);
        let sn = sample_successor(spec.transition(s, a1, a2), rng);
        b = update_belief(&b, &p1, a1).0;
        h.push(a1, a2, sn);
    }
    (h, b, ty)
}

fn evaluate_game(
    spec: &GameSpec,
    ckpt: &Checkpoint,
    h: &History,
    b: &[f64],
    sampled_type: usize,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> InducedGame {
    let nt = spec.n_types();
    let tree = Tree::build(spec, ckpt, h, b);
    let exact = subtree_values(spec, ckpt, h, b);

    let p2_profile: f64 = (0..nt).map(|ty| b[ty] * exact.v2[ty]).sum();
    let plan2 = train_exploiter(spec, &tree, Player::Two, None, b, budget, rng);
    let p2_exploiter: f64 = (0..nt)
        .map(|ty| b[ty] * tree.value(spec, 0, Player::Two, ty, Some(&plan2)))
        .sum();
    let p2_first = (0..spec.n_actions_p2())
        .map(|a2| (0..nt).map(|ty| b[ty] * tree.one_step(spec, Player::Two, ty, a2)).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);

    let mut p1_exploiter = Vec::with_capacity(nt);
    let mut p1_first = Vec::with_capacity(nt);
    for ty in 0..nt {
        let plan1 = train_exploiter(spec, &tree, Player::One, Some(ty), b, budget, rng);
        p1_exploiter.push(tree.value(spec, 0, Player::One, ty, Some(&plan1)));
        let best = (0..spec.n_actions_p1())
            .map(|a1| tree.one_step(spec, Player::One, ty, a1))
            .fold(f64::NEG_INFINITY, f64::max);
        p1_first.push(best - exact.v1[ty]);
    }

    InducedGame {
        history: h.to_string(),
        belief: b.to_vec(),
        sampled_type,
        p2_profile,
        p2_best_response: exact.br2,
        p2_exploiter,
        p2_first_round_gain: p2_first - p2_profile,
        p1_profile: exact.v1.clone(),
        p1_best_response: exact.br1.clone(),
        p1_exploiter,
        p1_first_round_gain: p1_first,
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

/// Samples `n_games` histories of `depth` rounds from the checkpoint profile
/// and measures both players' exploitability inside each induced game.
pub fn induced_game_eval(
    spec: &GameSpec,
    ckpt: &Checkpoint,
    n_games: usize,
    depth: usize,
    exploiter_budget: usize,
    seed: u64,
) -> Result<InducedReport, EvalError> {
    ckpt.verify_game(spec)?;
    if depth >= spec.horizon() {
        return Err(EvalError::InvalidDepth {
            depth,
            horizon: spec.horizon(),
        });
    }
    if n_games == 0 {
        return Err(EvalError::Invalid("n_games must be positive".into()));
    }
    let mut rng = point_rng(seed, 0, 0);
    let samples: Vec<(History, Vec<f64>, usize)> =
        (0..n_games).map(|_| sample_history(spec, ckpt, depth, &mut rng)).collect();
    for (h, _, _) in &samples {
        let needed = count_subtree(spec, depth, h.current_state());
        if needed > DEFAULT_HISTORY_BUDGET {
            return Err(EvalError::BudgetExceeded {
                needed,
                budget: DEFAULT_HISTORY_BUDGET,
            });
        }
    }
    let games: Vec<InducedGame> = samples
        .par_iter()
        .enumerate()
        .map(|(g, (h, b, ty))| {
            let mut rng = point_rng(seed, 1, g);
            evaluate_game(spec, ckpt, h, b, *ty, exploiter_budget, &mut rng)
        })
        .collect();

    let nt = spec.n_types();
    let per_type = |f: &dyn Fn(&InducedGame) -> &Vec<f64>| -> Vec<f64> {
        (0..nt).map(|ty| mean(games.iter().map(|g| f(g)[ty]))).collect()
    };
    let summary = InducedSummary {
        p2_profile: mean(games.iter().map(|g| g.p2_profile)),
        p2_best_response: mean(games.iter().map(|g| g.p2_best_response)),
        p2_exploiter: mean(games.iter().map(|g| g.p2_exploiter)),
        p2_first_round_gain: mean(games.iter().map(|g| g.p2_first_round_gain)),
        p1_profile: per_type(&|g| &g.p1_profile),
        p1_best_response: per_type(&|g| &g.p1_best_response),
        p1_exploiter: per_type(&|g| &g.p1_exploiter),
        p1_first_round_gain: per_type(&|g| &g.p1_first_round_gain),
    };
    Ok(InducedReport {
        schema: INDUCED_SCHEMA.to_string(),
        depth,
        n_games,
        exploiter_budget,
        seed,
        summary,
        games,
    })
}
