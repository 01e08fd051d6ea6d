//! Backward induction over rounds with independent learners at every
//! belief point.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::belief::{bayes_update_raw, grid_sample, Belief, BeliefGrid};
use crate::error::SolverError;
use crate::game::{sample_index, sample_successor, GameSpec, Player};
use crate::solver::backup::{profile_values, stage_tables, RoundContext};
use crate::solver::cfr::{cfr_step, CfrPoint};
use crate::solver::checkpoint::{Checkpoint, PointDiagnostics, TraceEntry, TrainingDiagnostics};
use crate::solver::config::{Ablation, Algo, Iterate, LearnerConfig};
use crate::solver::pg::{pg_step, PgPoint};
use crate::solver::tables::{RoundPolicy, RoundValues, ValueTable};

/// Generator for the learner at `(round, point)`: one stream per pair.
pub fn point_rng(seed: u64, round: usize, point: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((round as u64) << 32) | point as u64);
    rng
}

fn traced(t: usize, total: usize) -> bool {
    let every = (total / 20).max(1);
    let mut p = 1;
    while p < t {
        p *= 10;
    }
    t == total || t.is_multiple_of(every) || p == t
}

/// Output of one round of training.
#[derive(Debug, Clone)]
pub struct RoundOutput {
    pub policy: RoundPolicy,
    pub values: RoundValues,
    pub diagnostics: Vec<PointDiagnostics>,
}

struct PointOutput {
    p1: Vec<f64>,
    p2: Vec<f64>,
    values: [Vec<f64>; 2],
    diagnostics: PointDiagnostics,
}

/// Trains a checkpoint on the lattice grid of the given resolution.
pub fn train(
    spec: &GameSpec,
    grid_resolution: usize,
    config: &LearnerConfig,
) -> Result<Checkpoint, SolverError> {
    train_with_progress(spec, grid_resolution, config, &mut |_, _| {})
}

/// As [`train`], calling `progress(round, elapsed)` after each round; the
/// forward ablation reports once with round 0.
pub fn train_with_progress(
    spec: &GameSpec,
    grid_resolution: usize,
    config: &LearnerConfig,
    progress: &mut dyn FnMut(usize, Duration),
) -> Result<Checkpoint, SolverError> {
    config.validate()?;
    let grid = grid_sample(spec.n_types(), grid_resolution)?;
    let mut ckpt = if config.ablation == Ablation::BpgForward {
        let start = Instant::now();
        let c = train_forward_bpg_on(spec, &grid, config)?;
        progress(0, start.elapsed());
        c
    } else {
        train_grid_inner(spec, &grid, config, progress)?
    };
    ckpt.grid_resolution = Some(grid_resolution);
    Ok(ckpt)
}

/// Backward induction `l = L-1, ..., 0` on an explicit grid.
pub fn train_on_grid(
    spec: &GameSpec,
    grid: &BeliefGrid,
    config: &LearnerConfig,
) -> Result<Checkpoint, SolverError> {
    train_grid_inner(spec, grid, config, &mut |_, _| {})
}

fn train_grid_inner(
    spec: &GameSpec,
    grid: &BeliefGrid,
    config: &LearnerConfig,
    progress: &mut dyn FnMut(usize, Duration),
) -> Result<Checkpoint, SolverError> {
    config.validate()?;
    if grid.n_types() != spec.n_types() {
        return Err(SolverError::Shape(format!(
            "grid has {} types, game has {}",
            grid.n_types(),
            spec.n_types()
        )));
    }
    let horizon = spec.horizon();
    let mut values = ValueTable::zeros(horizon, grid.len(), spec.n_states(), spec.n_types());
    let mut policies = vec![None; horizon];
    let mut diagnostics = Vec::new();
    for l in (0..horizon).rev() {
        let start = Instant::now();
        let out = train_round(spec, grid, &values.rounds[l + 1], config)?;
        progress(l, start.elapsed());
        values.rounds[l] = out.values;
        policies[l] = Some(out.policy);
        diagnostics.push(out.diagnostics);
    }
    diagnostics.reverse();
    Ok(Checkpoint::assemble(
        spec,
        None,
        config,
        vec![grid.clone(); horizon],
        policies.into_iter().map(|p| p.expect("every round trained")).collect(),
        values,
        TrainingDiagnostics {
            points: diagnostics.into_iter().flatten().collect(),
        },
    ))
}

/// Trains round `next.round - 1` against the frozen `next` values.
pub fn train_round(
    spec: &GameSpec,
    grid: &BeliefGrid,
    next: &RoundValues,
    config: &LearnerConfig,
) -> Result<RoundOutput, SolverError> {
    if next.round == 0 || next.round > spec.horizon() {
        return Err(SolverError::Shape(format!("no round precedes round {}", next.round)));
    }
    if next.n_points != grid.len() || next.n_states != spec.n_states() || next.n_types != spec.n_types() {
        return Err(SolverError::Shape("next-round values do not match grid and game".into()));
    }
    let ctx = RoundContext::new(spec, grid, next, config.interpolation());
    let round = ctx.round();
    let outputs: Vec<PointOutput> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            train_point(&ctx, k, config).map_err(|e| match e {
                SolverError::NonFinite { quantity, round, state, .. } => SolverError::NonFinite {
                    quantity,
                    round,
                    point: k,
                    state,
                },
                other => other,
            })
        })
        .collect::<Result<_, _>>()?;

    let mut policy = RoundPolicy::uniform(spec, grid.len());
    let mut values = RoundValues::zeros(round, grid.len(), spec.n_states(), spec.n_types());
    let mut diagnostics = Vec::with_capacity(grid.len());
    let (n1, n2) = (policy.point_len_p1(), policy.point_len_p2());
    for (k, out) in outputs.into_iter().enumerate() {
        policy.p1[k * n1..(k + 1) * n1].copy_from_slice(&out.p1);
        policy.p2[k * n2..(k + 1) * n2].copy_from_slice(&out.p2);
        for (pi, player) in Player::both().into_iter().enumerate() {
            for s in 0..spec.n_states() {
                for ty in 0..spec.n_types() {
                    values.set(player, k, s, ty, out.values[pi][s * spec.n_types() + ty]);
                }
            }
        }
        diagnostics.push(out.diagnostics);
    }
    Ok(RoundOutput {
        policy,
        values,
        diagnostics,
    })
}

fn train_point(ctx: &RoundContext, k: usize, config: &LearnerConfig) -> Result<PointOutput, SolverError> {
    let spec = ctx.spec;
    let round = ctx.round();
    let b: Belief = ctx.grid.points()[k].clone();
    let mut rng = point_rng(config.seed, round, k);
    let (ns, nt, na1, na2) = (spec.n_states(), spec.n_types(), spec.n_actions_p1(), spec.n_actions_p2());
    let total = config.iterations;
    let mut trace = Vec::new();
    let mut max_grad_sq_norm = 0.0f64;
    let mut q_range = 0.0;
    let (p1_rows, p2_rows): (Vec<Vec<Vec<f64>>>, Vec<Vec<f64>>) = match config.algo {
        Algo::Pg => {
            let mut point = PgPoint::new(ns, nt, na1, na2, config.init_noise, &mut rng);
            for t in 1..=total {
                let stats = pg_step(ctx, &mut point, &b, t, config, &mut rng)?;
                max_grad_sq_norm = max_grad_sq_norm.max(stats.max_grad_sq_norm);
                if traced(t, total) {
                    trace.push(TraceEntry {
                        iteration: t,
                        p1_objective: stats.p1_objective,
                        p2_objective: stats.p2_objective,
                        max_avg_regret: 0.0,
                        bound_ratio: 0.0,
                    });
                }
            }
            match config.pg_iterate {
                Iterate::Final => (
                    (0..ns).map(|s| point.policy1(s)).collect(),
                    (0..ns).map(|s| point.policy2(s)).collect(),
                ),
                Iterate::Average => (
                    (0..ns).map(|s| point.average1(s)).collect(),
                    (0..ns).map(|s| point.average2(s)).collect(),
                ),
            }
        }
        Algo::Cfr => {
            let mut point = CfrPoint::new(ns, nt, na1, na2);
            for t in 1..=total {
                let log = cfr_step(ctx, &mut point, &b, config, &mut rng)?;
                if traced(t, total) {
                    let (p1o, p2o) = match &log {
                        Some(log) => (
                            log.v1
                                .iter()
                                .map(|v| b.probs().iter().zip(v).map(|(x, y)| x * y).sum::<f64>())
                                .sum::<f64>()
                                / ns as f64,
                            log.v2.iter().sum::<f64>() / ns as f64,
                        ),
                        None => (0.0, 0.0),
                    };
                    trace.push(TraceEntry {
                        iteration: t,
                        p1_objective: p1o,
                        p2_objective: p2o,
                        max_avg_regret: point.max_average_regret(),
                        bound_ratio: point.max_bound_ratio(),
                    });
                }
            }
            q_range = point.max_q_range();
            (
                (0..ns).map(|s| point.average1(s)).collect(),
                (0..ns).map(|s| point.average2(s)).collect(),
            )
        }
    };

    let mut values = [vec![0.0; ns * nt], vec![0.0; ns * nt]];
    for s in 0..ns {
        let [v1, v2] = evaluate_state(ctx, b.probs(), s, &p1_rows[s], &p2_rows[s]);
        for ty in 0..nt {
            values[0][s * nt + ty] = v1[ty];
            values[1][s * nt + ty] = v2[ty];
        }
        if v1.iter().chain(&v2).any(|v| !v.is_finite()) {
            return Err(SolverError::NonFinite {
                quantity: "value",
                round,
                point: k,
                state: s,
            });
        }
    }
    Ok(PointOutput {
        p1: p1_rows.into_iter().flatten().flatten().collect(),
        p2: p2_rows.into_iter().flatten().collect(),
        values,
        diagnostics: PointDiagnostics {
            round,
            point: k,
            belief: b.probs().to_vec(),
            trace,
            max_grad_sq_norm,
            q_range,
        },
    })
}

/// Exact per-type values `[V_1, V_2]` of a stored profile at `(b, s)`.
pub fn evaluate_state(
    ctx: &RoundContext,
    b: &[f64],
    s: usize,
    p1: &[Vec<f64>],
    p2: &[f64],
) -> [Vec<f64>; 2] {
    let tables = stage_tables(ctx, b, s, p1, false);
    profile_values(&tables, p1, p2)
}

/// Recomputes every round's values from the stored policies by exact
/// backward evaluation.
pub fn evaluate_policies(
    spec: &GameSpec,
    grids: &[BeliefGrid],
    policies: &[RoundPolicy],
    config: &LearnerConfig,
) -> ValueTable {
    let horizon = spec.horizon();
    let k = grids[0].len();
    let mut values = ValueTable::zeros(horizon, k, spec.n_states(), spec.n_types());
    for l in (0..horizon).rev() {
        let grid = &grids[l];
        let ctx = RoundContext::new(spec, grid, &values.rounds[l + 1], config.interpolation());
        let mut rv = RoundValues::zeros(l, grid.len(), spec.n_states(), spec.n_types());
        for (kk, b) in grid.points().iter().enumerate() {
            for s in 0..spec.n_states() {
                let p1: Vec<Vec<f64>> = (0..spec.n_types())
                    .map(|ty| policies[l].p1_row(kk, s, ty).to_vec())
                    .collect();
                let p2 = policies[l].p2_row(kk, s);
                let [v1, v2] = evaluate_state(&ctx, b.probs(), s, &p1, p2);
                for ty in 0..spec.n_types() {
                    rv.set(Player::One, kk, s, ty, v1[ty]);
                    rv.set(Player::Two, kk, s, ty, v2[ty]);
                }
            }
        }
        values.rounds[l] = rv;
    }
    values
}

/// Forward self-play without backward induction: one learner per round,
/// indexed by the grid point nearest to the belief tracked along sampled
/// plays, trained on Monte Carlo returns of whole plays.
pub fn train_forward_bpg(
    spec: &GameSpec,
    grid_resolution: usize,
    config: &LearnerConfig,
) -> Result<Checkpoint, SolverError> {
    let config = LearnerConfig {
        ablation: Ablation::BpgForward,
        algo: Algo::Pg,
        ..config.clone()
    };
    train(spec, grid_resolution, &config)
}

fn train_forward_bpg_on(
    spec: &GameSpec,
    grid: &BeliefGrid,
    config: &LearnerConfig,
) -> Result<Checkpoint, SolverError> {
    let horizon = spec.horizon();
    let (ns, nt, na1, na2) = (spec.n_states(), spec.n_types(), spec.n_actions_p1(), spec.n_actions_p2());
    let kn = grid.len();
    let mut rng = point_rng(config.seed, usize::MAX >> 32, 0);
    let mut learners: Vec<Vec<PgPoint>> = (0..horizon)
        .map(|_| {
            (0..kn)
                .map(|_| PgPoint::new(ns, nt, na1, na2, config.init_noise, &mut rng))
                .collect()
        })
        .collect();
    let cells1 = ns * nt;
    let mut base1 = vec![vec![0.0; kn * cells1]; horizon];
    let mut base2 = vec![vec![0.0; kn * ns]; horizon];
    let mut trace = Vec::new();
    let mut max_grad_sq_norm = 0.0f64;
    let batch = config.batch_size.max(1);
    let gamma = spec.discount();

    struct Visit {
        l: usize,
        k: usize,
        s: usize,
        ty: usize,
        a1: usize,
        a2: usize,
        r1: f64,
        r2: f64,
    }

    for t in 1..=config.iterations {
        let eta = config.eta(t);
        let mut g1: Vec<Vec<f64>> = vec![vec![0.0; kn * cells1 * na1]; horizon];
        let mut g2: Vec<Vec<f64>> = vec![vec![0.0; kn * ns * na2]; horizon];
        let mut n1: Vec<Vec<usize>> = vec![vec![0; kn * cells1]; horizon];
        let mut n2: Vec<Vec<usize>> = vec![vec![0; kn * ns]; horizon];
        let (mut ret1, mut ret2) = (0.0, 0.0);
        for _ in 0..batch {
            let (mut s, ty) = spec.reset(&mut rng);
            let mut b = spec.prior().to_vec();
            let mut visits = Vec::with_capacity(horizon);
            for l in 0..horizon {
                let k = grid.nearest(&b);
                let p1 = learners[l][k].policy1(s);
                let p2 = learners[l][k].policy2(s);
                let a1 = sample_index(&p1[ty], &mut rng);
                let a2 = sample_index(&p2, &mut rng);
                let sn = sample_successor(spec.transition(s, a1, a2), &mut rng);
                visits.push(Visit {
                    l,
                    k,
                    s,
                    ty,
                    a1,
                    a2,
                    r1: spec.payoff(Player::One, ty, s, a1, a2),
                    r2: spec.payoff(Player::Two, ty, s, a1, a2),
                });
                let lik: Vec<f64> = p1.iter().map(|row| row[a1]).collect();
                b = bayes_update_raw(&b, &lik).unwrap_or_else(|_| vec![1.0 / nt as f64; nt]);
                s = sn;
            }
            let (mut gr1, mut gr2) = (0.0, 0.0);
            for v in visits.iter().rev() {
                gr1 = v.r1 + gamma * gr1;
                gr2 = v.r2 + gamma * gr2;
                let p1 = learners[v.l][v.k].policy1(v.s);
                let p2 = learners[v.l][v.k].policy2(v.s);
                let c1 = v.k * cells1 + v.s * nt + v.ty;
                let adv1 = gr1 - base1[v.l][c1];
                for a in 0..na1 {
                    let e = if a == v.a1 { 1.0 } else { 0.0 };
                    g1[v.l][c1 * na1 + a] += adv1 * (e - p1[v.ty][a]);
                }
                n1[v.l][c1] += 1;
                let c2 = v.k * ns + v.s;
                let adv2 = gr2 - base2[v.l][c2];
                for a in 0..na2 {
                    let e = if a == v.a2 { 1.0 } else { 0.0 };
                    g2[v.l][c2 * na2 + a] += adv2 * (e - p2[a]);
                }
                n2[v.l][c2] += 1;
                base1[v.l][c1] += 0.05 * (gr1 - base1[v.l][c1]);
                base2[v.l][c2] += 0.05 * (gr2 - base2[v.l][c2]);
            }
            ret1 += gr1;
            ret2 += gr2;
        }
        for l in 0..horizon {
            for k in 0..kn {
                let learner = &mut learners[l][k];
                for s in 0..ns {
                    let p1 = learner.policy1(s);
                    let p2 = learner.policy2(s);
                    learner.accumulate(s, &p1, &p2);
                }
                learner.iterations += 1;
                for c in 0..cells1 {
                    let n = n1[l][k * cells1 + c];
                    if n == 0 {
                        continue;
                    }
                    let mut sq = 0.0;
                    for a in 0..na1 {
                        let d = g1[l][(k * cells1 + c) * na1 + a] / n as f64;
                        sq += d * d;
                        learner.theta1[c * na1 + a] += eta * d;
                    }
                    max_grad_sq_norm = max_grad_sq_norm.max(sq);
                }
                for s in 0..ns {
                    let n = n2[l][k * ns + s];
                    if n == 0 {
                        continue;
                    }
                    for a in 0..na2 {
                        learner.theta2[s * na2 + a] += eta * g2[l][(k * ns + s) * na2 + a] / n as f64;
                    }
                }
            }
        }
        if !max_grad_sq_norm.is_finite() {
            return Err(SolverError::NonFinite {
                quantity: "policy gradient",
                round: 0,
                point: 0,
                state: 0,
            });
        }
        if traced(t, config.iterations) {
            trace.push(TraceEntry {
                iteration: t,
                p1_objective: ret1 / batch as f64,
                p2_objective: ret2 / batch as f64,
                max_avg_regret: 0.0,
                bound_ratio: 0.0,
            });
        }
    }

    let mut policies = Vec::with_capacity(horizon);
    for round_learners in &learners {
        let mut rp = RoundPolicy::uniform(spec, kn);
        for (k, learner) in round_learners.iter().enumerate() {
            for s in 0..ns {
                let (p1, p2) = match config.pg_iterate {
                    Iterate::Final => (learner.policy1(s), learner.policy2(s)),
                    Iterate::Average => (learner.average1(s), learner.average2(s)),
                };
                for (ty, row) in p1.iter().enumerate() {
                    rp.p1_row_mut(k, s, ty).copy_from_slice(row);
                }
                rp.p2_row_mut(k, s).copy_from_slice(&p2);
            }
        }
        policies.push(rp);
    }
    let grids = vec![grid.clone(); horizon];
    let values = evaluate_policies(spec, &grids, &policies, config);
    let diagnostics = TrainingDiagnostics {
        points: vec![PointDiagnostics {
            round: 0,
            point: 0,
            belief: spec.prior().to_vec(),
            trace,
            max_grad_sq_norm,
            q_range: 0.0,
        }],
    };
    Ok(Checkpoint::assemble(spec, None, config, grids, policies, values, diagnostics))
}
