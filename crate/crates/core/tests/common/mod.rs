//! Random one-round-with-continuation instances and a finite-difference
//! check of the analytic point gradient.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tisp::belief::{grid_sample, BeliefGrid, Interpolation};
use tisp::envs::{random_game, RandomGameShape};
use tisp::game::{GameSpec, Player};
use tisp::solver::{point_gradient, point_objective, softmax, RoundContext, RoundValues};

pub const H: f64 = 1e-5;
pub const CAP: f64 = 1e-6;

pub struct Instance {
    pub spec: GameSpec,
    pub grid: BeliefGrid,
    pub next: RoundValues,
    pub b: Vec<f64>,
    pub s: usize,
    pub theta: Vec<Vec<f64>>,
    pub phi: Vec<f64>,
}

pub fn instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_types = rng.gen_range(2..=3);
    let shape = RandomGameShape {
        n_states: 2,
        n_types,
        n_actions_p1: rng.gen_range(2..=3),
        n_actions_p2: rng.gen_range(2..=3),
        horizon: 2,
        discount: rng.gen_range(0.5..=1.0),
        zero_sum: rng.gen_bool(0.5),
    };
    let spec = random_game(&shape, seed).unwrap();
    let grid = grid_sample(n_types, if n_types == 2 { 6 } else { 4 }).unwrap();
    let mut next = RoundValues::zeros(1, grid.len(), 2, n_types);
    for k in 0..grid.len() {
        for s in 0..2 {
            for ty in 0..n_types {
                for p in Player::both() {
                    next.set(p, k, s, ty, rng.gen_range(-3.0..3.0));
                }
            }
        }
    }
    let raw: Vec<f64> = (0..n_types).map(|_| rng.gen_range(0.05..1.0)).collect();
    let z: f64 = raw.iter().sum();
    let theta = (0..n_types)
        .map(|_| (0..shape.n_actions_p1).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect();
    let phi = (0..shape.n_actions_p2).map(|_| rng.gen_range(-2.0..2.0)).collect();
    Instance {
        spec,
        grid,
        next,
        b: raw.iter().map(|x| x / z).collect(),
        s: rng.gen_range(0..2),
        theta,
        phi,
    }
}

pub fn policies(theta: &[Vec<f64>]) -> Vec<Vec<f64>> {
    theta.iter().map(|t| softmax(t)).collect()
}

pub fn posterior(b: &[f64], p1: &[Vec<f64>], a1: usize) -> Vec<f64> {
    let z: f64 = b.iter().zip(p1).map(|(x, r)| x * r[a1]).sum();
    b.iter().zip(p1).map(|(x, r)| x * r[a1] / z).collect()
}

/// Smallest squared distance from any posterior, at the base point or any
/// finite-difference probe, to a grid point.
pub fn seam_distance(inst: &Instance) -> f64 {
    let mut probes = vec![inst.theta.clone()];
    for ty in 0..inst.theta.len() {
        for a in 0..inst.theta[ty].len() {
            for sign in [-1.0, 1.0] {
                let mut t = inst.theta.clone();
                t[ty][a] += sign * H;
                probes.push(t);
            }
        }
    }
    let mut best = f64::INFINITY;
    for t in &probes {
        let p1 = policies(t);
        for a1 in 0..inst.spec.n_actions_p1() {
            let post = posterior(&inst.b, &p1, a1);
            for g in inst.grid.points() {
                let d: f64 = g.probs().iter().zip(&post).map(|(x, y)| (x - y).powi(2)).sum();
                best = best.min(d);
            }
        }
    }
    best
}

pub fn rel_err(analytic: &[f64], numeric: &[f64]) -> f64 {
    let diff: f64 = analytic.iter().zip(numeric).map(|(a, n)| (a - n).powi(2)).sum::<f64>().sqrt();
    let scale: f64 = numeric.iter().map(|n| n * n).sum::<f64>().sqrt().max(1e-6);
    diff / scale
}

pub fn check(inst: &Instance) -> f64 {
    let ctx = RoundContext::new(&inst.spec, &inst.grid, &inst.next, Interpolation::Weighted { cap: CAP });
    let p1 = policies(&inst.theta);
    let p2 = softmax(&inst.phi);
    let g = point_gradient(&ctx, &inst.b, inst.s, &p1, &p2, true);
    let mut worst = 0.0f64;
    for ty in 0..inst.theta.len() {
        let mut fd = Vec::new();
        for a in 0..inst.theta[ty].len() {
            let mut plus = inst.theta.clone();
            plus[ty][a] += H;
            let mut minus = inst.theta.clone();
            minus[ty][a] -= H;
            let jp = point_objective(&ctx, &inst.b, inst.s, &policies(&plus), &p2).0[ty];
            let jm = point_objective(&ctx, &inst.b, inst.s, &policies(&minus), &p2).0[ty];
            fd.push((jp - jm) / (2.0 * H));
        }
        worst = worst.max(rel_err(&g.p1[ty], &fd));
    }
    let mut fd2 = Vec::new();
    for a in 0..inst.phi.len() {
        let mut plus = inst.phi.clone();
        plus[a] += H;
        let mut minus = inst.phi.clone();
        minus[a] -= H;
        let jp = point_objective(&ctx, &inst.b, inst.s, &p1, &softmax(&plus)).1;
        let jm = point_objective(&ctx, &inst.b, inst.s, &p1, &softmax(&minus)).1;
        fd2.push((jp - jm) / (2.0 * H));
    }
    worst.max(rel_err(&g.p2, &fd2))
}

/// Worst relative error over the first `n` instances away from seams, and
/// the number of seeds drawn.
pub fn worst_error(n: usize) -> (f64, u64) {
    let mut accepted = 0;
    let mut seed = 0;
    let mut worst = 0.0f64;
    while accepted < n {
        let inst = instance(seed);
        seed += 1;
        if seam_distance(&inst) < 1e-4 {
            continue;
        }
        worst = worst.max(check(&inst));
        accepted += 1;
    }
    (worst, seed)
}
