//! Regret matching at one belief point.

use rand::Rng;

use crate::belief::Belief;
use crate::error::SolverError;
use crate::game::sample_index;
use crate::solver::backup::{branch, exact_gradient_from_tables, stage_tables, RoundContext};
use crate::solver::config::{BackupMode, LearnerConfig};
use crate::solver::pg::sampled_return;

/// Exploration mixed into the sampling distribution of outcome sampling.
pub const OUTCOME_EXPLORATION: f64 = 0.6;

/// Regret-matching state for every state of one `(round, point)`.
///
/// Player 1 runs one learner per `(s, type)`, player 2 one per `s`.
#[derive(Debug, Clone)]
pub struct CfrPoint {
    pub n_states: usize,
    pub n_types: usize,
    pub n_a1: usize,
    pub n_a2: usize,
    /// Cumulative regrets `[s][type][a1]`.
    pub regret1: Vec<f64>,
    /// Cumulative regrets `[s][a2]`.
    pub regret2: Vec<f64>,
    pub sum1: Vec<f64>,
    pub sum2: Vec<f64>,
    pub iterations: usize,
    /// Smallest and largest action value seen by each learner: player-1
    /// learners first (`s * n_types + type`), then player 2 (`s`).
    pub q_range: Vec<(f64, f64)>,
}

/// Action values and their policy average used in one exact iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct CfrStepLog {
    /// `[s][type][a1]`.
    pub q1: Vec<Vec<Vec<f64>>>,
    /// `[s][type]`.
    pub v1: Vec<Vec<f64>>,
    /// `[s][a2]`.
    pub q2: Vec<Vec<f64>>,
    /// `[s]`.
    pub v2: Vec<f64>,
}

/// `(R)^+ / sum (R)^+`, uniform when no entry is positive.
pub fn regret_matching(regrets: &[f64]) -> Vec<f64> {
    let total: f64 = regrets.iter().map(|r| r.max(0.0)).sum();
    if total > 0.0 {
        regrets.iter().map(|r| r.max(0.0) / total).collect()
    } else {
        vec![1.0 / regrets.len() as f64; regrets.len()]
    }
}

impl CfrPoint {
    pub fn new(n_states: usize, n_types: usize, n_a1: usize, n_a2: usize) -> Self {
        CfrPoint {
            n_states,
            n_types,
            n_a1,
            n_a2,
            regret1: vec![0.0; n_states * n_types * n_a1],
            regret2: vec![0.0; n_states * n_a2],
            sum1: vec![0.0; n_states * n_types * n_a1],
            sum2: vec![0.0; n_states * n_a2],
            iterations: 0,
            q_range: vec![(f64::INFINITY, f64::NEG_INFINITY); n_states * (n_types + 1)],
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

    pub fn policy1(&self, s: usize) -> Vec<Vec<f64>> {
        (0..self.n_types)
            .map(|ty| regret_matching(&self.regret1[self.row1(s, ty)]))
            .collect()
    }

    pub fn policy2(&self, s: usize) -> Vec<f64> {
        regret_matching(&self.regret2[self.row2(s)])
    }

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

    fn accumulate(&mut self, s: usize, p1: &[Vec<f64>], p2: &[f64]) {
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

    fn observe(&mut self, learner: usize, q: &[f64]) {
        let (lo, hi) = &mut self.q_range[learner];
        for &x in q {
            *lo = lo.min(x);
            *hi = hi.max(x);
        }
    }

    /// Largest average external regret `max_a R(a) / t` over all learners.
    pub fn max_average_regret(&self) -> f64 {
        if self.iterations == 0 {
            return 0.0;
        }
        let t = self.iterations as f64;
        self.regret1
            .iter()
            .chain(&self.regret2)
            .fold(0.0f64, |m, r| m.max(*r / t))
    }

    /// Largest ratio of a learner's average regret to its regret-matching
    /// bound `C sqrt(|A|) / sqrt(t)`, where `C` is its observed value range.
    pub fn max_bound_ratio(&self) -> f64 {
        if self.iterations == 0 {
            return 0.0;
        }
        let t = self.iterations as f64;
        let mut worst = 0.0f64;
        let mut check = |regrets: &[f64], n_a: usize, (lo, hi): (f64, f64)| {
            let avg = regrets.iter().fold(0.0f64, |m, r| m.max(*r / t));
            // equal action values leave only rounding residue in the regrets
            if avg <= 0.0 || hi <= lo {
                return;
            }
            let bound = (hi - lo) * (n_a as f64).sqrt() / t.sqrt();
            worst = worst.max(avg / bound);
        };
        for s in 0..self.n_states {
            for ty in 0..self.n_types {
                check(
                    &self.regret1[self.row1(s, ty)],
                    self.n_a1,
                    self.q_range[s * self.n_types + ty],
                );
            }
            check(
                &self.regret2[self.row2(s)],
                self.n_a2,
                self.q_range[self.n_states * self.n_types + s],
            );
        }
        worst
    }

    /// Largest observed value range over all learners.
    pub fn max_q_range(&self) -> f64 {
        self.q_range
            .iter()
            .filter(|(lo, hi)| lo <= hi)
            .fold(0.0f64, |m, (lo, hi)| m.max(hi - lo))
    }
}

/// One regret-matching iteration `t >= 1` over every state of the point.
/// The log is filled only in exact mode.
pub fn cfr_step<R: Rng + ?Sized>(
    ctx: &RoundContext,
    point: &mut CfrPoint,
    b: &Belief,
    config: &LearnerConfig,
    rng: &mut R,
) -> Result<Option<CfrStepLog>, SolverError> {
    match config.backup_mode {
        BackupMode::Exact => cfr_step_exact(ctx, point, b).map(Some),
        BackupMode::Sampled => cfr_step_sampled(ctx, point, b, config, rng).map(|_| None),
    }
}

fn non_finite(ctx: &RoundContext, s: usize) -> SolverError {
    SolverError::NonFinite {
        quantity: "regret",
        round: ctx.round(),
        point: usize::MAX,
        state: s,
    }
}

fn cfr_step_exact(
    ctx: &RoundContext,
    point: &mut CfrPoint,
    b: &Belief,
) -> Result<CfrStepLog, SolverError> {
    let bp = b.probs();
    let mut log = CfrStepLog {
        q1: Vec::with_capacity(point.n_states),
        v1: Vec::with_capacity(point.n_states),
        q2: Vec::with_capacity(point.n_states),
        v2: Vec::with_capacity(point.n_states),
    };
    for s in 0..point.n_states {
        let p1 = point.policy1(s);
        let p2 = point.policy2(s);
        point.accumulate(s, &p1, &p2);
        let tables = stage_tables(ctx, bp, s, &p1, false);
        let g = exact_gradient_from_tables(&tables, bp, &p1, &p2);
        for ty in 0..point.n_types {
            let r = point.row1(s, ty);
            for (reg, q) in point.regret1[r].iter_mut().zip(&g.q1[ty]) {
                *reg += q - g.j1[ty];
            }
            point.observe(s * point.n_types + ty, &g.q1[ty]);
        }
        let r = point.row2(s);
        for (reg, q) in point.regret2[r].iter_mut().zip(&g.q2) {
            *reg += q - g.j2;
        }
        point.observe(point.n_states * point.n_types + s, &g.q2);
        if !g.j2.is_finite() || g.j1.iter().any(|v| !v.is_finite()) {
            return Err(non_finite(ctx, s));
        }
        log.q1.push(g.q1);
        log.v1.push(g.j1);
        log.q2.push(g.q2);
        log.v2.push(g.j2);
    }
    point.iterations += 1;
    Ok(log)
}

fn explore(p: &[f64]) -> Vec<f64> {
    let u = OUTCOME_EXPLORATION / p.len() as f64;
    p.iter().map(|x| u + (1.0 - OUTCOME_EXPLORATION) * x).collect()
}

fn cfr_step_sampled<R: Rng + ?Sized>(
    ctx: &RoundContext,
    point: &mut CfrPoint,
    b: &Belief,
    config: &LearnerConfig,
    rng: &mut R,
) -> Result<(), SolverError> {
    let bp = b.probs();
    let (nt, na1, na2) = (point.n_types, point.n_a1, point.n_a2);
    let mut d1 = vec![0.0; point.regret1.len()];
    let mut d2 = vec![0.0; point.regret2.len()];
    let mut n1 = vec![0usize; point.n_states * nt];
    let mut n2 = vec![0usize; point.n_states];
    for s in 0..point.n_states {
        let p1 = point.policy1(s);
        let p2 = point.policy2(s);
        point.accumulate(s, &p1, &p2);
    }
    for _ in 0..config.batch_size {
        let (s, ty) = ctx.spec.sub_reset(ctx.round(), b, rng)?;
        let p1 = point.policy1(s);
        let p2 = point.policy2(s);
        let sig1 = explore(&p1[ty]);
        let sig2 = explore(&p2);
        let a1 = sample_index(&sig1, rng);
        let a2 = sample_index(&sig2, rng);
        let br = branch(ctx, bp, &p1, a1);
        let (g1, g2) = sampled_return(ctx, &br, s, ty, a1, a2, rng);

        // player 1: opponent sampled off-policy
        let w1 = g1 * p2[a2] / sig2[a2] / sig1[a1];
        let c1 = s * nt + ty;
        for a in 0..na1 {
            let va = if a == a1 { w1 } else { 0.0 };
            d1[c1 * na1 + a] += va - p1[ty][a1] * w1;
        }
        n1[c1] += 1;
        let w2 = g2 * p1[ty][a1] / sig1[a1] / sig2[a2];
        for a in 0..na2 {
            let va = if a == a2 { w2 } else { 0.0 };
            d2[s * na2 + a] += va - p2[a2] * w2;
        }
        n2[s] += 1;
    }
    for (c, &n) in n1.iter().enumerate() {
        for a in 0..na1 {
            if n > 0 {
                let d = d1[c * na1 + a] / n as f64;
                if !d.is_finite() {
                    return Err(non_finite(ctx, c / nt));
                }
                point.regret1[c * na1 + a] += d;
            }
        }
    }
    for (s, &n) in n2.iter().enumerate() {
        for a in 0..na2 {
            if n > 0 {
                let d = d2[s * na2 + a] / n as f64;
                if !d.is_finite() {
                    return Err(non_finite(ctx, s));
                }
                point.regret2[s * na2 + a] += d;
            }
        }
    }
    point.iterations += 1;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regret_matching_positive_part() {
        assert_eq!(regret_matching(&[1.0, -2.0, 3.0]), vec![0.25, 0.0, 0.75]);
        assert_eq!(regret_matching(&[-1.0, 0.0]), vec![0.5, 0.5]);
    }
}
