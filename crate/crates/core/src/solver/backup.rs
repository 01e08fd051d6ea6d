//! One-round backups at a grid belief: posteriors, continuation values,
//! action values, objectives and their gradients with respect to logits.

use crate::belief::{bayes_update_raw, BeliefGrid, InterpWeights, Interpolation};
use crate::game::{GameSpec, Player};
use crate::solver::tables::RoundValues;

/// Everything a round-`l` learner reads: the game, the grid and the frozen
/// round-`(l+1)` values.
#[derive(Clone, Copy)]
pub struct RoundContext<'a> {
    pub spec: &'a GameSpec,
    pub grid: &'a BeliefGrid,
    pub next: &'a RoundValues,
    pub interp: Interpolation,
    terminal: bool,
}

impl<'a> RoundContext<'a> {
    pub fn new(
        spec: &'a GameSpec,
        grid: &'a BeliefGrid,
        next: &'a RoundValues,
        interp: Interpolation,
    ) -> Self {
        RoundContext {
            spec,
            grid,
            next,
            interp,
            terminal: next.round >= spec.horizon() || spec.discount() == 0.0,
        }
    }

    /// Round being trained.
    pub fn round(&self) -> usize {
        self.next.round - 1
    }

    /// True when continuation values are identically zero.
    pub fn is_terminal(&self) -> bool {
        self.terminal
    }
}

/// Posterior after observing `a1`, with the uniform fallback when every
/// type with positive belief gives `a1` zero probability.
#[derive(Debug, Clone)]
pub struct Branch {
    pub posterior: Vec<f64>,
    pub normalizer: f64,
    pub fallback: bool,
    pub weights: Option<InterpWeights>,
}

pub fn branch(ctx: &RoundContext, b: &[f64], p1: &[Vec<f64>], a1: usize) -> Branch {
    let lik: Vec<f64> = p1.iter().map(|row| row[a1]).collect();
    let normalizer: f64 = b.iter().zip(&lik).map(|(x, l)| x * l).sum();
    let (posterior, fallback) = match bayes_update_raw(b, &lik) {
        Ok(p) => (p, false),
        Err(_) => (vec![1.0 / b.len() as f64; b.len()], true),
    };
    let weights = (!ctx.terminal).then(|| ctx.grid.weights(&posterior, ctx.interp));
    Branch {
        posterior,
        normalizer,
        fallback,
        weights,
    }
}

/// `gamma * sum_s' P(s'|s,a1,a2) V_i^type(b', s')`.
pub fn continuation(
    ctx: &RoundContext,
    br: &Branch,
    s: usize,
    a1: usize,
    a2: usize,
    player: Player,
    ty: usize,
) -> f64 {
    let Some(w) = &br.weights else { return 0.0 };
    let mut c = 0.0;
    for &(sn, p) in ctx.spec.transition(s, a1, a2) {
        c += p * w.value(|k| ctx.next.get(player, k, sn, ty));
    }
    ctx.spec.discount() * c
}

/// `gamma * sum_s' P(s'|s,a1,a2) grad_b' V_1^type(b', s') . (e_type - b')`.
fn continuation_direction(
    ctx: &RoundContext,
    br: &Branch,
    s: usize,
    a1: usize,
    a2: usize,
    ty: usize,
    scratch: &mut [f64],
) -> f64 {
    let Some(w) = &br.weights else { return 0.0 };
    if w.exact_point().is_some() {
        return 0.0;
    }
    let mut c = 0.0;
    for &(sn, p) in ctx.spec.transition(s, a1, a2) {
        w.gradient(ctx.grid, |k| ctx.next.get(Player::One, k, sn, ty), scratch);
        let dir: f64 = scratch
            .iter()
            .zip(&br.posterior)
            .enumerate()
            .map(|(mu, (g, q))| g * (if mu == ty { 1.0 } else { 0.0 } - q))
            .sum();
        c += p * dir;
    }
    ctx.spec.discount() * c
}

/// `Q_i^type(a1, a2)` for both players, with the posterior induced by `p1`.
pub fn stage_q(
    ctx: &RoundContext,
    b: &[f64],
    s: usize,
    ty: usize,
    a1: usize,
    a2: usize,
    p1: &[Vec<f64>],
) -> [f64; 2] {
    let br = branch(ctx, b, p1, a1);
    let spec = ctx.spec;
    [Player::One, Player::Two].map(|pl| {
        spec.payoff(pl, ty, s, a1, a2) + continuation(ctx, &br, s, a1, a2, pl, ty)
    })
}

/// Action values at one `(b, s)`, indexed `[(type * A1 + a1) * A2 + a2]`.
#[derive(Debug, Clone)]
pub struct StageTables {
    pub n_types: usize,
    pub n_a1: usize,
    pub n_a2: usize,
    pub q1: Vec<f64>,
    pub q2: Vec<f64>,
    /// `b_type / Z(a1)` times the belief direction of the continuation;
    /// empty unless requested.
    pub belief_dir: Vec<f64>,
    pub branches: Vec<Branch>,
}

impl StageTables {
    #[inline]
    pub fn idx(&self, ty: usize, a1: usize, a2: usize) -> usize {
        (ty * self.n_a1 + a1) * self.n_a2 + a2
    }
}

pub fn stage_tables(
    ctx: &RoundContext,
    b: &[f64],
    s: usize,
    p1: &[Vec<f64>],
    with_belief_dir: bool,
) -> StageTables {
    let spec = ctx.spec;
    let (nt, na1, na2) = (spec.n_types(), spec.n_actions_p1(), spec.n_actions_p2());
    let branches: Vec<Branch> = (0..na1).map(|a1| branch(ctx, b, p1, a1)).collect();
    let n = nt * na1 * na2;
    let mut q1 = vec![0.0; n];
    let mut q2 = vec![0.0; n];
    let want_dir = with_belief_dir && !ctx.terminal;
    let mut belief_dir = if want_dir { vec![0.0; n] } else { Vec::new() };
    let mut scratch = vec![0.0; nt];
    for ty in 0..nt {
        for (a1, br) in branches.iter().enumerate() {
            for a2 in 0..na2 {
                let i = (ty * na1 + a1) * na2 + a2;
                q1[i] = spec.payoff(Player::One, ty, s, a1, a2)
                    + continuation(ctx, br, s, a1, a2, Player::One, ty);
                q2[i] = spec.payoff(Player::Two, ty, s, a1, a2)
                    + continuation(ctx, br, s, a1, a2, Player::Two, ty);
                if want_dir && !br.fallback && br.normalizer > 0.0 {
                    belief_dir[i] = b[ty] / br.normalizer
                        * continuation_direction(ctx, br, s, a1, a2, ty, &mut scratch);
                }
            }
        }
    }
    StageTables {
        n_types: nt,
        n_a1: na1,
        n_a2: na2,
        q1,
        q2,
        belief_dir,
        branches,
    }
}

/// Per-type player-1 values and type-conditioned player-2 values of the
/// profile `(p1, p2)` at `(b, s)`: `V_i^type = sum pi1 pi2 Q_i^type`.
pub fn profile_values(t: &StageTables, p1: &[Vec<f64>], p2: &[f64]) -> [Vec<f64>; 2] {
    let mut v1 = vec![0.0; t.n_types];
    let mut v2 = vec![0.0; t.n_types];
    for ty in 0..t.n_types {
        for a1 in 0..t.n_a1 {
            let pa = p1[ty][a1];
            if pa == 0.0 {
                continue;
            }
            for (a2, &pb) in p2.iter().enumerate() {
                let i = t.idx(ty, a1, a2);
                v1[ty] += pa * pb * t.q1[i];
                v2[ty] += pa * pb * t.q2[i];
            }
        }
    }
    [v1, v2]
}

/// Objectives of the learners at `(b, s)`: per-type `J_1^type` and the
/// belief-weighted `J_2`.
pub fn point_objective(
    ctx: &RoundContext,
    b: &[f64],
    s: usize,
    p1: &[Vec<f64>],
    p2: &[f64],
) -> (Vec<f64>, f64) {
    let t = stage_tables(ctx, b, s, p1, false);
    let [v1, v2] = profile_values(&t, p1, p2);
    let j2 = b.iter().zip(&v2).map(|(x, v)| x * v).sum();
    (v1, j2)
}

/// Gradients of the objectives with respect to softmax logits.
#[derive(Debug, Clone)]
pub struct PointGradient {
    /// `[type][a1]`: d J_1^type / d theta_type(a1).
    pub p1: Vec<Vec<f64>>,
    /// d J_2 / d phi(a2).
    pub p2: Vec<f64>,
    pub j1: Vec<f64>,
    pub j2: f64,
    /// Per-type action values `q_type(a1) = sum_a2 pi2(a2) Q_1^type(a1, a2)`.
    pub q1: Vec<Vec<f64>>,
    /// Player-2 action values `q(a2) = sum_type b_type sum_a1 pi1 Q_2^type`.
    pub q2: Vec<f64>,
}

impl PointGradient {
    pub fn sq_norm(&self) -> f64 {
        self.p1.iter().flatten().chain(&self.p2).map(|g| g * g).sum()
    }
}

/// Exact policy gradient at `(b, s)`; `belief_term` adds the effect of
/// player 1's own policy on the posterior seen by the next round.
pub fn point_gradient(
    ctx: &RoundContext,
    b: &[f64],
    s: usize,
    p1: &[Vec<f64>],
    p2: &[f64],
    belief_term: bool,
) -> PointGradient {
    let t = stage_tables(ctx, b, s, p1, belief_term);
    exact_gradient_from_tables(&t, b, p1, p2)
}

pub(crate) fn exact_gradient_from_tables(
    t: &StageTables,
    b: &[f64],
    p1: &[Vec<f64>],
    p2: &[f64],
) -> PointGradient {
    let (nt, na1, na2) = (t.n_types, t.n_a1, t.n_a2);
    let mut g1 = vec![vec![0.0; na1]; nt];
    let mut q1 = vec![vec![0.0; na1]; nt];
    let mut j1 = vec![0.0; nt];
    let mut q2 = vec![0.0; na2];
    for ty in 0..nt {
        let pi = &p1[ty];
        let mut y = vec![0.0; na1];
        for a1 in 0..na1 {
            let mut q = 0.0;
            let mut h = 0.0;
            for (a2, &pb) in p2.iter().enumerate() {
                let i = t.idx(ty, a1, a2);
                q += pb * t.q1[i];
                if !t.belief_dir.is_empty() {
                    h += pb * t.belief_dir[i];
                }
                q2[a2] += b[ty] * pi[a1] * t.q2[i];
            }
            q1[ty][a1] = q;
            // d/d theta(a) of pi(a1) * H(a1) through the posterior:
            // pi(a1) * H(a1) * pi(a1) * (delta(a, a1) - pi(a))
            y[a1] = pi[a1] * pi[a1] * h;
        }
        let j: f64 = pi.iter().zip(&q1[ty]).map(|(p, q)| p * q).sum();
        let ysum: f64 = y.iter().sum();
        for a in 0..na1 {
            g1[ty][a] = pi[a] * (q1[ty][a] - j) + y[a] - pi[a] * ysum;
        }
        j1[ty] = j;
    }
    let j2: f64 = p2.iter().zip(&q2).map(|(p, q)| p * q).sum();
    let g2 = p2.iter().zip(&q2).map(|(p, q)| p * (q - j2)).collect();
    PointGradient {
        p1: g1,
        p2: g2,
        j1,
        j2,
        q1,
        q2,
    }
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|x| (x - m).exp()).collect();
    let z: f64 = e.iter().sum();
    e.into_iter().map(|x| x / z).collect()
}
