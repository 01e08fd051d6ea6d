//! Independent epsilon oracle: enumerates every pure history-contingent
//! plan of the deviating player and evaluates it by forward expectation.

use std::collections::HashMap;

use crate::error::EvalError;
use crate::eval::testtime::test_time_policy;
use crate::game::{GameSpec, History, Player};
use crate::solver::Checkpoint;

/// Default cap on the number of plan evaluations.
pub const DEFAULT_PLAN_BUDGET: u128 = 10_000_000;

struct Profile {
    p1: Vec<Vec<f64>>,
    p2: Vec<f64>,
    belief: Vec<f64>,
}

struct Node {
    state: usize,
    /// `(a1, a2, probability, child index)`.
    children: Vec<(usize, usize, f64, usize)>,
    history: History,
}

struct Subtree {
    nodes: Vec<Node>,
}

impl Subtree {
    fn build(spec: &GameSpec, root: &History) -> Self {
        let mut nodes = Vec::new();
        Self::grow(spec, root.clone(), &mut nodes);
        Subtree { nodes }
    }

    fn grow(spec: &GameSpec, h: History, nodes: &mut Vec<Node>) -> usize {
        let me = nodes.len();
        let s = h.current_state();
        nodes.push(Node {
            state: s,
            children: Vec::new(),
            history: h.clone(),
        });
        if h.rounds_elapsed() + 1 < spec.horizon() {
            let mut children = Vec::new();
            for a1 in 0..spec.n_actions_p1() {
                for a2 in 0..spec.n_actions_p2() {
                    for &(sn, p) in spec.transition(s, a1, a2) {
                        if p > 0.0 {
                            let c = Self::grow(spec, h.extended(a1, a2, sn), nodes);
                            children.push((a1, a2, p, c));
                        }
                    }
                }
            }
            nodes[me].children = children;
        }
        me
    }
}

struct Oracle<'a> {
    spec: &'a GameSpec,
    profiles: HashMap<History, Profile>,
}

impl Oracle<'_> {
    fn profile(&self, h: &History) -> &Profile {
        &self.profiles[h]
    }

    /// Player-1 value of type `ty` from node `i`; `plan[j]` fixes its action
    /// at node `j` when given.
    fn eval1(&self, tree: &Subtree, i: usize, ty: usize, plan: Option<&[usize]>) -> f64 {
        let node = &tree.nodes[i];
        let pr = self.profile(&node.history);
        let gamma = self.spec.discount();
        let mut v = 0.0;
        for a1 in 0..self.spec.n_actions_p1() {
            let w1 = match plan {
                Some(p) => (p[i] == a1) as u8 as f64,
                None => pr.p1[ty][a1],
            };
            if w1 == 0.0 {
                continue;
            }
            for a2 in 0..self.spec.n_actions_p2() {
                let w = w1 * pr.p2[a2];
                if w == 0.0 {
                    continue;
                }
                let mut q = self.spec.payoff(Player::One, ty, node.state, a1, a2);
                for &(b1, b2, p, c) in &node.children {
                    if b1 == a1 && b2 == a2 {
                        q += gamma * p * self.eval1(tree, c, ty, plan);
                    }
                }
                v += w * q;
            }
        }
        v
    }

    /// Player-2 value conditioned on type `ty` from node `i`.
    fn eval2(&self, tree: &Subtree, i: usize, ty: usize, plan: Option<&[usize]>) -> f64 {
        let node = &tree.nodes[i];
        let pr = self.profile(&node.history);
        let gamma = self.spec.discount();
        let mut v = 0.0;
        for a2 in 0..self.spec.n_actions_p2() {
            let w2 = match plan {
                Some(p) => (p[i] == a2) as u8 as f64,
                None => pr.p2[a2],
            };
            if w2 == 0.0 {
                continue;
            }
            for a1 in 0..self.spec.n_actions_p1() {
                let w = w2 * pr.p1[ty][a1];
                if w == 0.0 {
                    continue;
                }
                let mut q = self.spec.payoff(Player::Two, ty, node.state, a1, a2);
                for &(b1, b2, p, c) in &node.children {
                    if b1 == a1 && b2 == a2 {
                        q += gamma * p * self.eval2(tree, c, ty, plan);
                    }
                }
                v += w * q;
            }
        }
        v
    }
}

/// Calls `f` on every assignment of `base` actions to `n` nodes.
fn for_each_plan(n: usize, base: usize, mut f: impl FnMut(&[usize])) {
    let mut plan = vec![0usize; n];
    loop {
        f(&plan);
        let mut i = 0;
        while i < n {
            plan[i] += 1;
            if plan[i] < base {
                break;
            }
            plan[i] = 0;
            i += 1;
        }
        if i == n {
            return;
        }
    }
}

fn all_histories(spec: &GameSpec) -> Vec<History> {
    let mut out = Vec::new();
    let mut frontier: Vec<History> = (0..spec.n_states())
        .filter(|&s| spec.initial_state_dist()[s] > 0.0)
        .map(History::new)
        .collect();
    for l in 0..spec.horizon() {
        out.extend(frontier.iter().cloned());
        if l + 1 == spec.horizon() {
            break;
        }
        let mut next = Vec::new();
        for h in &frontier {
            let s = h.current_state();
            for a1 in 0..spec.n_actions_p1() {
                for a2 in 0..spec.n_actions_p2() {
                    for &(sn, p) in spec.transition(s, a1, a2) {
                        if p > 0.0 {
                            next.push(h.extended(a1, a2, sn));
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

fn pow_sat(base: usize, exp: usize) -> u128 {
    let mut v: u128 = 1;
    for _ in 0..exp {
        v = v.saturating_mul(base as u128);
    }
    v
}

/// Worst per-history gains found by plan enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub epsilon: f64,
    /// `(history, player-1 gain over types, player-2 gain)`.
    pub gains: Vec<(History, f64, f64)>,
}

/// Epsilon over every history by enumerating all pure deviation plans.
pub fn brute_force_epsilon(spec: &GameSpec, ckpt: &Checkpoint) -> Result<f64, EvalError> {
    brute_force_gains(spec, ckpt, DEFAULT_PLAN_BUDGET).map(|r| r.epsilon)
}

pub fn brute_force_gains(
    spec: &GameSpec,
    ckpt: &Checkpoint,
    budget: u128,
) -> Result<BruteForceResult, EvalError> {
    ckpt.verify_game(spec)?;
    let histories = all_histories(spec);
    let trees: Vec<Subtree> = histories.iter().map(|h| Subtree::build(spec, h)).collect();
    let mut needed: u128 = 0;
    for t in &trees {
        let n = t.nodes.len();
        needed = needed
            .saturating_add(pow_sat(spec.n_actions_p1(), n).saturating_mul(spec.n_types() as u128))
            .saturating_add(pow_sat(spec.n_actions_p2(), n));
    }
    if needed > budget {
        return Err(EvalError::BudgetExceeded { needed, budget });
    }
    let mut profiles = HashMap::new();
    for h in &histories {
        let (p1, p2, st) = test_time_policy(ckpt, h)?;
        profiles.insert(
            h.clone(),
            Profile {
                p1,
                p2,
                belief: st.belief.probs().to_vec(),
            },
        );
    }
    let oracle = Oracle { spec, profiles };
    let nt = spec.n_types();
    let mut eps = 0.0f64;
    let mut gains = Vec::with_capacity(histories.len());
    for (h, tree) in histories.iter().zip(&trees) {
        let n = tree.nodes.len();
        let mut g1 = f64::NEG_INFINITY;
        for ty in 0..nt {
            let on = oracle.eval1(tree, 0, ty, None);
            let mut best = f64::NEG_INFINITY;
            for_each_plan(n, spec.n_actions_p1(), |plan| {
                best = best.max(oracle.eval1(tree, 0, ty, Some(plan)));
            });
            g1 = g1.max(best - on);
        }
        let post = &oracle.profile(h).belief;
        let on2: f64 = (0..nt).map(|ty| post[ty] * oracle.eval2(tree, 0, ty, None)).sum();
        let mut best2 = f64::NEG_INFINITY;
        for_each_plan(n, spec.n_actions_p2(), |plan| {
            let v: f64 = (0..nt)
                .map(|ty| post[ty] * oracle.eval2(tree, 0, ty, Some(plan)))
                .sum();
            best2 = best2.max(v);
        });
        let g2 = best2 - on2;
        eps = eps.max(g1).max(g2);
        gains.push((h.clone(), g1, g2));
    }
    Ok(BruteForceResult {
        epsilon: eps,
        gains,
    })
}
