//! Tabular softmax policy gradient at one belief point.

use rand::Rng;

use crate::belief::Belief;
use crate::error::SolverError;
use crate::game::{sample_index, sample_successor, Player};
use crate::solver::backup::{branch, point_gradient, softmax, Branch, RoundContext};
use crate::solver::config::{BackupMode, LearnerConfig};

/// Learner state for every state of one `(round, point)`.
#[derive(Debug, Clone)]
pub struct PgPoint {
    pub n_states: usize,
    pub n_types: usize,
    pub n_a1: usize,
    pub n_a2: usize,
    /// Logits `[s][type][a1]`.
    pub theta1: Vec<f64>,
    /// Logits `[s][a2]`.
    pub theta2: Vec<f64>,
    /// Running sums of the iterates' action distributions.
    pub sum1: Vec<f64>,
    pub sum2: Vec<f64>,
    pub iterations: usize,
    baseline1: Vec<Option<f64>>,
    baseline2: Vec<Option<f64>>,
}

const BASELINE_RATE: f64 = 0.05;

#[derive(Debug, Clone, Copy, Default)]
pub struct PgStepStats {
    /// Belief-weighted player-1 objective averaged over states.
    pub p1_objective: f64,
    /// Player-2 objective averaged over states.
    pub p2_objective: f64,
    pub max_grad_sq_norm: f64,
}

impl PgPoint {
    pub fn new<R: Rng + ?Sized>(
        n_states: usize,
        n_types: usize,
        n_a1: usize,
        n_a2: usize,
        init_noise: f64,
        rng: &mut R,
    ) -> Self {
        let mut noise = |n: usize| -> Vec<f64> {
            (0..n)
                .map(|_| {
                    if init_noise > 0.0 {
                        rng.gen_range(-init_noise..init_noise)
                    } else {
                        0.0
                    }
                })
                .collect()
        };
        let theta1 = noise(n_states * n_types * n_a1);
        let theta2 = noise(n_states * n_a2);
        PgPoint {
            n_states,
            n_types,
            n_a1,
            n_a2,
            sum1: vec![0.0; theta1.len()],
            sum2: vec![0.0; theta2.len()],
            theta1,
            theta2,
            iterations: 0,
            baseline1: vec![None; n_states * n_types],
            baseline2: vec![None; n_states],
        }
    }

    fn row1(&self, s: usize, ty: usize) -> std::ops::Range<usize> {
        let i = (s * self.n_types + ty) * self.n_a1;
        i..i + self.n_a1
    }

    fn row2(&self, s: usize) -> std::ops::Range<usize> {
        let i = s * self.n_a2;
        i..i + self.n_a2
    }

    /// Current player-1 distributions `[type][a1]` at `s`.
    pub fn policy1(&self, s: usize) -> Vec<Vec<f64>> {
        (0..self.n_types)
            .map(|ty| softmax(&self.theta1[self.row1(s, ty)]))
            .collect()
    }

    pub fn policy2(&self, s: usize) -> Vec<f64> {
        softmax(&self.theta2[self.row2(s)])
    }

    /// Time-averaged distributions; the current iterate before any step.
    pub fn average1(&self, s: usize) -> Vec<Vec<f64>> {
        if self.iterations == 0 {
            return self.policy1(s);
        }
        (0..self.n_types)
            .map(|ty| {
                self.sum1[self.row1(s, ty)]
                    .iter()
                    .map(|x| x / self.iterations as f64)
                    .collect()
            })
            .collect()
    }

    pub fn average2(&self, s: usize) -> Vec<f64> {
        if self.iterations == 0 {
            return self.policy2(s);
        }
        self.sum2[self.row2(s)]
            .iter()
            .map(|x| x / self.iterations as f64)
            .collect()
    }

    pub(crate) fn accumulate(&mut self, s: usize, p1: &[Vec<f64>], p2: &[f64]) {
        for (ty, row) in p1.iter().enumerate() {
            let r = self.row1(s, ty);
            for (acc, p) in self.sum1[r].iter_mut().zip(row) {
                *acc += p;
            }
        }
        let r = self.row2(s);
        for (acc, p) in self.sum2[r].iter_mut().zip(p2) {
            *acc += p;
        }
    }
}

/// One policy-gradient iteration `t >= 1` over every state of the point.
pub fn pg_step<R: Rng + ?Sized>(
    ctx: &RoundContext,
    point: &mut PgPoint,
    b: &Belief,
    t: usize,
    config: &LearnerConfig,
    rng: &mut R,
) -> Result<PgStepStats, SolverError> {
    match config.backup_mode {
        BackupMode::Exact => pg_step_exact(ctx, point, b, t, config),
        BackupMode::Sampled => pg_step_sampled(ctx, point, b, t, config, rng),
    }
}

fn non_finite(ctx: &RoundContext, s: usize) -> SolverError {
    SolverError::NonFinite {
        quantity: "policy gradient",
        round: ctx.round(),
        point: usize::MAX,
        state: s,
    }
}

fn pg_step_exact(
    ctx: &RoundContext,
    point: &mut PgPoint,
    b: &Belief,
    t: usize,
    config: &LearnerConfig,
) -> Result<PgStepStats, SolverError> {
    let eta = config.eta(t);
    let bp = b.probs();
    let mut stats = PgStepStats::default();
    for s in 0..point.n_states {
        let p1 = point.policy1(s);
        let p2 = point.policy2(s);
        point.accumulate(s, &p1, &p2);
        let g = point_gradient(ctx, bp, s, &p1, &p2, config.belief_term());
        let sq = g.sq_norm();
        if !sq.is_finite() {
            return Err(non_finite(ctx, s));
        }
        stats.max_grad_sq_norm = stats.max_grad_sq_norm.max(sq);
        stats.p1_objective += bp.iter().zip(&g.j1).map(|(x, j)| x * j).sum::<f64>();
        stats.p2_objective += g.j2;
        for ty in 0..point.n_types {
            let r = point.row1(s, ty);
            for (th, d) in point.theta1[r].iter_mut().zip(&g.p1[ty]) {
                *th += eta * d;
            }
        }
        let r = point.row2(s);
        for (th, d) in point.theta2[r].iter_mut().zip(&g.p2) {
            *th += eta * d;
        }
    }
    point.iterations += 1;
    stats.p1_objective /= point.n_states as f64;
    stats.p2_objective /= point.n_states as f64;
    Ok(stats)
}

fn pg_step_sampled<R: Rng + ?Sized>(
    ctx: &RoundContext,
    point: &mut PgPoint,
    b: &Belief,
    t: usize,
    config: &LearnerConfig,
    rng: &mut R,
) -> Result<PgStepStats, SolverError> {
    let spec = ctx.spec;
    let eta = config.eta(t);
    let bp = b.probs();
    let (nt, na1, na2) = (point.n_types, point.n_a1, point.n_a2);
    let mut g1 = vec![0.0; point.theta1.len()];
    let mut g2 = vec![0.0; point.theta2.len()];
    let mut n1 = vec![0usize; point.n_states * nt];
    let mut n2 = vec![0usize; point.n_states];
    let mut stats = PgStepStats::default();
    let mut scratch = vec![0.0; nt];
    for s in 0..point.n_states {
        let p1 = point.policy1(s);
        let p2 = point.policy2(s);
        point.accumulate(s, &p1, &p2);
    }
    for _ in 0..config.batch_size {
        let (s, ty) = spec.sub_reset(ctx.round(), b, rng)?;
        let p1 = point.policy1(s);
        let p2 = point.policy2(s);
        let a1 = sample_index(&p1[ty], rng);
        let a2 = sample_index(&p2, rng);
        let sn = sample_successor(spec.transition(s, a1, a2), rng);
        let br = branch(ctx, bp, &p1, a1);
        let gamma = spec.discount();
        let (mut r1, mut r2) = (
            spec.payoff(Player::One, ty, s, a1, a2),
            spec.payoff(Player::Two, ty, s, a1, a2),
        );
        let mut dir = 0.0;
        if let Some(w) = &br.weights {
            r1 += gamma * w.value(|k| ctx.next.get(Player::One, k, sn, ty));
            r2 += gamma * w.value(|k| ctx.next.get(Player::Two, k, sn, ty));
            if config.belief_term() && !br.fallback && w.exact_point().is_none() {
                w.gradient(ctx.grid, |k| ctx.next.get(Player::One, k, sn, ty), &mut scratch);
                let d: f64 = scratch
                    .iter()
                    .zip(&br.posterior)
                    .enumerate()
                    .map(|(mu, (g, q))| g * (if mu == ty { 1.0 } else { 0.0 } - q))
                    .sum();
                dir = gamma * bp[ty] / br.normalizer * d;
            }
        }
        stats.p1_objective += r1;
        stats.p2_objective += r2;

        let c1 = s * nt + ty;
        let base1 = point.baseline1[c1].get_or_insert(r1);
        let adv1 = r1 - *base1;
        *base1 += BASELINE_RATE * (r1 - *base1);
        let base2 = point.baseline2[s].get_or_insert(r2);
        let adv2 = r2 - *base2;
        *base2 += BASELINE_RATE * (r2 - *base2);

        let pi = &p1[ty];
        let off1 = (s * nt + ty) * na1;
        for a in 0..na1 {
            let e = if a == a1 { 1.0 } else { 0.0 };
            g1[off1 + a] += adv1 * (e - pi[a]) + dir * pi[a1] * (e - pi[a]);
        }
        n1[c1] += 1;
        let off2 = s * na2;
        for a in 0..na2 {
            let e = if a == a2 { 1.0 } else { 0.0 };
            g2[off2 + a] += adv2 * (e - p2[a]);
        }
        n2[s] += 1;
    }
    for (c, &n) in n1.iter().enumerate() {
        if n == 0 {
            continue;
        }
        let mut sq = 0.0;
        for a in 0..na1 {
            let d = g1[c * na1 + a] / n as f64;
            sq += d * d;
            point.theta1[c * na1 + a] += eta * d;
        }
        if !sq.is_finite() {
            return Err(non_finite(ctx, c / nt));
        }
        stats.max_grad_sq_norm = stats.max_grad_sq_norm.max(sq);
    }
    for (s, &n) in n2.iter().enumerate() {
        if n == 0 {
            continue;
        }
        for a in 0..na2 {
            let d = g2[s * na2 + a] / n as f64;
            if !d.is_finite() {
                return Err(non_finite(ctx, s));
            }
            point.theta2[s * na2 + a] += eta * d;
        }
    }
    point.iterations += 1;
    stats.p1_objective /= config.batch_size as f64;
    stats.p2_objective /= config.batch_size as f64;
    Ok(stats)
}

/// Sampled one-round returns `(G_1, G_2)` for a fixed joint action, used by
/// the sampled regret learner.
pub(crate) fn sampled_return<R: Rng + ?Sized>(
    ctx: &RoundContext,
    br: &Branch,
    s: usize,
    ty: usize,
    a1: usize,
    a2: usize,
    rng: &mut R,
) -> (f64, f64) {
    let spec = ctx.spec;
    let sn = sample_successor(spec.transition(s, a1, a2), rng);
    let mut r1 = spec.payoff(Player::One, ty, s, a1, a2);
    let mut r2 = spec.payoff(Player::Two, ty, s, a1, a2);
    if let Some(w) = &br.weights {
        r1 += spec.discount() * w.value(|k| ctx.next.get(Player::One, k, sn, ty));
        r2 += spec.discount() * w.value(|k| ctx.next.get(Player::Two, k, sn, ty));
    }
    (r1, r2)
}
