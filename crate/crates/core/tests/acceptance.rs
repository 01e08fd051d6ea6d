//! Acceptance run: one PASS/FAIL line per criterion at its pinned tolerance.
//! Exits non-zero when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tisp::belief::{
    bayes_update, grid_sample, interpolate_policy, interpolate_value, Belief, Interpolation,
    DEFAULT_WEIGHT_CAP,
};
use tisp::envs::exposing::exposing_game;
use tisp::envs::security::{generate_security_game, SecurityParams};
use tisp::envs::tagging::{tagging_game, TaggingConfig, ENEMY};
use tisp::envs::{random_game, RandomGameShape};
use tisp::eval::{
    brute_force_epsilon, checkpoint_bound, epsilon_both, epsilon_pbe, induced_game_eval,
    policy_at, update_belief, DEFAULT_HISTORY_BUDGET,
};
use tisp::game::{GameSpec, Player};
use tisp::solver::{train, Ablation, BackupMode, Checkpoint, LearnerConfig};

const SECURITY_SEEDS: [u64; 5] = [0, 1, 2, 3, 4];
const SECURITY_GRID: usize = 20;
const SECURITY_ITERS: usize = 20_000;
/// Learning rate for policy gradient on security games.
const SECURITY_PG_ETA0: f64 = 0.1;

struct Outcome {
    id: &'static str,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn report(id: &'static str, name: &'static str, pass: bool, detail: String) -> Outcome {
    println!("{id} {name}: {} | {detail}", if pass { "PASS" } else { "FAIL" });
    Outcome {
        id,
        name,
        pass,
        detail,
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// `(type-1 action-1, type-2 action-1, V1 type 1, V1 type 2)` at the prior.
fn exposing_first_round(ck: &Checkpoint) -> (f64, f64, f64, f64) {
    let k = ck.grids[0].exact_match(&ck.prior).expect("prior is a grid point");
    (
        ck.policies[0].p1_row(k, 0, 0)[0],
        ck.policies[0].p1_row(k, 0, 1)[0],
        ck.values.get(Player::One, 0, k, 0, 0),
        ck.values.get(Player::One, 0, k, 0, 1),
    )
}

fn ac1() -> Outcome {
    let g = exposing_game();
    let (ck, t) = timed(|| train(&g, 20, &LearnerConfig::pg(2_000, 0)).unwrap());
    let (t1, t2, v1, v2) = exposing_first_round(&ck);
    let t2a2 = 1.0 - t2;
    let pass = t1 >= 0.85
        && (0.50..=0.85).contains(&t2a2)
        && v1 >= 5.7
        && v2 >= 5.0
        && t < Duration::from_secs(300);
    report(
        "AC1",
        "Exposing equilibrium recovery [t1a1>=0.85, t2a2 in [0.50,0.85], V>=5.7/5.0, <5 min]",
        pass,
        format!(
            "t1a1 {t1:.4} t2a2 {t2a2:.4} V1 {v1:.4} V2 {v2:.4}; {:.1}s",
            t.as_secs_f64()
        ),
    )
}

fn exposing_split() {
    let g = exposing_game();
    let (mut labelled, mut mirror, mut pooling, mut other) = (0, 0, 0, 0);
    for seed in 0..20 {
        let ck = train(&g, 20, &LearnerConfig::pg(2_000, seed)).unwrap();
        let (t1, t2, _, _) = exposing_first_round(&ck);
        if t1 >= 0.9 && t2 >= 0.9 {
            pooling += 1;
        } else if t1 >= 0.85 && (0.15..=0.5).contains(&t2) {
            labelled += 1;
        } else if t2 >= 0.85 && (0.15..=0.5).contains(&t1) {
            mirror += 1;
        } else {
            other += 1;
        }
    }
    println!(
        "info Exposing TISP-PG over 20 learner seeds: labelled {labelled}, type-mirrored {mirror}, \
         pooling {pooling}, other {other}"
    );
}

fn ac2() -> Outcome {
    let g = exposing_game();
    let cfr = train(&g, 20, &LearnerConfig::cfr(2_000, 0)).unwrap();
    let nb = train(
        &g,
        20,
        &LearnerConfig {
            ablation: Ablation::NoBeliefTerm,
            ..LearnerConfig::pg(2_000, 0)
        },
    )
    .unwrap();
    // table rows: TISP-CFR 1.000/1.000, TISP-PG⁻ 0.969/0.969
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, ck, row) in [("CFR", &cfr, 1.000), ("PG-", &nb, 0.969)] {
        let (t1, t2, v1, v2) = exposing_first_round(ck);
        pass &= t1 >= 0.9 && t2 >= 0.9;
        pass &= (t1 - row).abs() <= 0.1 && (t2 - row).abs() <= 0.1;
        pass &= (v1 - 1.0).abs() <= 0.1 && (v2 - 1.0).abs() <= 0.1;
        detail.push(format!("{name} a1 {t1:.4}/{t2:.4} V {v1:.4}/{v2:.4}"));
    }
    report(
        "AC2",
        "Exposing ablations pool [a1>=0.9, within 0.1 of table rows, V~1]",
        pass,
        detail.join("; "),
    )
}

struct SecurityRun {
    eps: Vec<f64>,
    max_time: Duration,
    zero_sum_gap: f64,
}

fn security_runs(horizon: usize, config: &LearnerConfig) -> SecurityRun {
    let mut eps = Vec::new();
    let mut max_time = Duration::ZERO;
    let mut gap = 0.0f64;
    for &seed in &SECURITY_SEEDS {
        let g = generate_security_game(&SecurityParams::zero_sum(2, 2, horizon, seed)).unwrap();
        let (ck, t) = timed(|| {
            let ck = train(&g, SECURITY_GRID, config).unwrap();
            let e = epsilon_pbe(&g, &ck).unwrap().epsilon;
            (ck, e)
        });
        max_time = max_time.max(t);
        eps.push(ck.1);
        gap = gap.max(zero_sum_gap(&ck.0));
    }
    SecurityRun {
        eps,
        max_time,
        zero_sum_gap: gap,
    }
}

fn zero_sum_gap(ck: &Checkpoint) -> f64 {
    let mut gap = 0.0f64;
    for rv in &ck.values.rounds {
        for k in 0..rv.n_points {
            for s in 0..rv.n_states {
                for ty in 0..rv.n_types {
                    gap = gap.max((rv.get(Player::One, k, s, ty) + rv.get(Player::Two, k, s, ty)).abs());
                }
            }
        }
    }
    gap
}

fn fmt_eps(eps: &[f64]) -> String {
    eps.iter().map(|e| format!("{e:.4}")).collect::<Vec<_>>().join(", ")
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s[s.len() / 2]
}

fn ac3(runs: &[(&'static str, SecurityRun, SecurityRun)]) -> Vec<Outcome> {
    let mut out = Vec::new();
    for (name, l2, l4) in runs {
        let ok2 = l2.eps.iter().filter(|e| **e <= 0.1).count();
        let ok4 = l4.eps.iter().filter(|e| **e <= 0.5).count();
        let slow = l2.max_time.max(l4.max_time);
        let pass = ok2 >= 4 && ok4 >= 4 && slow < Duration::from_secs(900);
        let id_name: &'static str = if *name == "TISP-CFR" {
            "Security zero-sum eps, TISP-CFR [>=4/5 with L=2 <=0.1 and L=4 <=0.5, <15 min]"
        } else {
            "Security zero-sum eps, TISP-PG [>=4/5 with L=2 <=0.1 and L=4 <=0.5, <15 min]"
        };
        out.push(report(
            "AC3",
            id_name,
            pass,
            format!(
                "L=2 [{}] {ok2}/5; L=4 [{}] {ok4}/5; slowest instance {:.1}s",
                fmt_eps(&l2.eps),
                fmt_eps(&l4.eps),
                slow.as_secs_f64()
            ),
        ));
    }
    // both grow with L and regret matching stays below policy gradient
    let med = |r: &SecurityRun| median(&r.eps);
    let (cfr2, cfr4) = (med(&runs[0].1), med(&runs[0].2));
    let (pg2, pg4) = (med(&runs[1].1), med(&runs[1].2));
    let pass = cfr4 >= cfr2 && pg4 >= pg2 && cfr2 <= pg2 && cfr4 <= pg4;
    out.push(report(
        "AC3",
        "Security eps trend [median grows with L for both, CFR <= PG]",
        pass,
        format!("median CFR {cfr2:.4} -> {cfr4:.4}; PG {pg2:.4} -> {pg4:.4}"),
    ));
    out
}

fn ac4() -> Outcome {
    let g = generate_security_game(&SecurityParams::zero_sum(2, 2, 2, 0)).unwrap();
    let run = |res: usize, iters: usize, seed: u64| {
        let ck = train(&g, res, &LearnerConfig::cfr(iters, seed)).unwrap();
        let eps = epsilon_pbe(&g, &ck).unwrap().epsilon;
        (eps, checkpoint_bound(&g, &ck).value)
    };
    let seeds: Vec<f64> = (0..3).map(|s| run(10, 10_000, s).0).collect();
    let mean = seeds.iter().sum::<f64>() / 3.0;
    let std = (seeds.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / 2.0).sqrt();
    let grid: Vec<(f64, f64)> = [10, 20, 40].iter().map(|&r| run(r, 10_000, 0)).collect();
    let iters: Vec<(f64, f64)> = [2_500, 10_000, 40_000].iter().map(|&t| run(20, t, 0)).collect();
    let monotone = |v: &[(f64, f64)]| v.windows(2).all(|w| w[1].0 <= w[0].0 + 2.0 * std);
    let below = grid.iter().chain(&iters).all(|(e, b)| e < b);
    let pass = monotone(&grid) && monotone(&iters) && below;
    let show = |v: &[(f64, f64)]| {
        v.iter()
            .map(|(e, b)| format!("{e:.4} (bound {b:.3})"))
            .collect::<Vec<_>>()
            .join(" -> ")
    };
    report(
        "AC4",
        "Bound trend on security L=2, TISP-CFR [non-increasing within 2 std, below bound]",
        pass,
        format!(
            "grid 10/20/40 at T=1e4: {}; T 2.5e3/1e4/4e4 at grid 20: {}; learner-seed std {std:.2e}",
            show(&grid),
            show(&iters)
        ),
    )
}

fn ac5() -> Outcome {
    let mut worst = 0.0f64;
    let g = exposing_game();
    for config in [LearnerConfig::pg(500, 0), LearnerConfig::cfr(500, 0)] {
        let ck = train(&g, 20, &config).unwrap();
        worst = worst.max((epsilon_pbe(&g, &ck).unwrap().epsilon - brute_force_epsilon(&g, &ck).unwrap()).abs());
    }
    for seed in 0..100 {
        let g = random_game(&RandomGameShape::default(), seed).unwrap();
        let config = if seed % 2 == 0 {
            LearnerConfig::pg(50, seed)
        } else {
            LearnerConfig::cfr(50, seed)
        };
        let ck = train(&g, 6, &config).unwrap();
        worst = worst.max((epsilon_pbe(&g, &ck).unwrap().epsilon - brute_force_epsilon(&g, &ck).unwrap()).abs());
    }
    report(
        "AC5",
        "Oracle equivalence [|dp - brute| <= 1e-9]",
        worst <= 1e-9,
        format!("Exposing + 100 random games, max difference {worst:.2e}"),
    )
}

fn ac6() -> Outcome {
    let (worst, seeds) = common::worst_error(50);
    report(
        "AC6",
        "Gradient vs finite differences [rel err <= 1e-4, 50 instances]",
        worst <= 1e-4,
        format!("worst relative error {worst:.2e}; {seeds} seeds drawn, seams excluded"),
    )
}

fn ac7() -> Outcome {
    let g = generate_security_game(&SecurityParams::zero_sum(2, 2, 2, 0)).unwrap();
    let mut pass = true;
    let mut detail = Vec::new();
    for t in [100, 1_000, 10_000] {
        let ck = train(&g, SECURITY_GRID, &LearnerConfig::cfr(t, 0)).unwrap();
        let ratio = ck
            .diagnostics
            .points
            .iter()
            .filter_map(|p| p.trace.last())
            .fold(0.0f64, |m, e| m.max(e.bound_ratio));
        pass &= ratio <= 1.0;
        detail.push(format!("T={t}: max regret/bound {ratio:.4}"));
    }
    report(
        "AC7",
        "Regret-matching bound [avg regret <= C sqrt|A| / sqrt T per point]",
        pass,
        detail.join("; "),
    )
}

fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let z: f64 = v.iter().sum();
    v.into_iter().map(|x| x / z).collect()
}

fn ac8(zero_sum_gap: f64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bayes = 0.0f64;
    for _ in 0..1_000 {
        let n = rng.gen_range(2..5);
        let b = random_simplex(&mut rng, n);
        let l1: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        let l2: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        let seq = bayes_update(&bayes_update(&Belief::new(b.clone()).unwrap(), &l1).unwrap(), &l2).unwrap();
        let joint: Vec<f64> = (0..n).map(|t| b[t] * l1[t] * l2[t]).collect();
        let z: f64 = joint.iter().sum();
        for (x, y) in seq.probs().iter().zip(&joint) {
            bayes = bayes.max((x - y / z).abs());
        }
    }
    let weighted = Interpolation::Weighted {
        cap: DEFAULT_WEIGHT_CAP,
    };
    let grid = grid_sample(3, 6).unwrap();
    let pols: Vec<Vec<f64>> = (0..grid.len()).map(|_| random_simplex(&mut rng, 4)).collect();
    let vals: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut valid = 0;
    for _ in 0..10_000 {
        let q = Belief::new(random_simplex(&mut rng, 3)).unwrap();
        let p = interpolate_policy(&grid, &pols, &q, weighted).unwrap();
        if p.iter().all(|x| *x >= 0.0) && (p.iter().sum::<f64>() - 1.0).abs() <= 1e-12 {
            valid += 1;
        }
    }
    let exact = grid.points().iter().enumerate().all(|(k, b)| {
        interpolate_policy(&grid, &pols, b, weighted).unwrap() == pols[k]
            && interpolate_value(&grid, &vals, b, weighted).unwrap() == vals[k]
    });
    let pass = bayes <= 1e-9 && valid == 10_000 && exact && zero_sum_gap <= 1e-6;
    report(
        "AC8",
        "Belief and interpolation properties [Bayes 1e-9, valid mixtures, exact at grid, V1+V2 1e-6]",
        pass,
        format!(
            "Bayes max diff {bayes:.2e}; valid {valid}/10000; grid-exact {exact}; zero-sum max |V1+V2| {zero_sum_gap:.2e}"
        ),
    )
}

/// Largest enemy posterior after any first-round action from any start.
fn first_step_enemy_posterior(g: &GameSpec, ck: &Checkpoint) -> f64 {
    let mut worst = 0.0f64;
    for (s, &mu) in g.initial_state_dist().iter().enumerate() {
        if mu <= 0.0 {
            continue;
        }
        let (p1, _) = policy_at(ck, 0, g.prior(), s);
        for a1 in 0..g.n_actions_p1() {
            worst = worst.max(update_belief(g.prior(), &p1, a1).0[ENEMY]);
        }
    }
    worst
}

fn ac9() -> (Outcome, Checkpoint) {
    let cfg = TaggingConfig::default();
    let g = tagging_game(&cfg).unwrap();
    let ((pg, bpg, rpg, rbpg), t) = timed(|| {
        let sampled = LearnerConfig {
            backup_mode: BackupMode::Sampled,
            batch_size: 32,
            ..LearnerConfig::pg(100, 0)
        };
        let pg = train(&g, 10, &sampled).unwrap();
        // same environment-step budget: one learner per grid point and round
        let bpg = train(
            &g,
            10,
            &LearnerConfig {
                ablation: Ablation::BpgForward,
                iterations: 1_100,
                ..sampled
            },
        )
        .unwrap();
        let rpg = induced_game_eval(&g, &pg, 64, 2, 2_000, 0).unwrap();
        let rbpg = induced_game_eval(&g, &bpg, 64, 2, 2_000, 0).unwrap();
        (pg, bpg, rpg, rbpg)
    });
    let post = first_step_enemy_posterior(&g, &pg);
    let post_bpg = first_step_enemy_posterior(&g, &bpg);
    let (e_pg, e_bpg) = (rpg.summary.p2_exploiter, rbpg.summary.p2_exploiter);
    let pass = e_pg < e_bpg && post <= cfg.tag_threshold() && t < Duration::from_secs(7_200);
    let out = report(
        "AC9",
        "Tagging induced games [exploiter P2 reward PG < BPG, enemy first-step posterior <= threshold]",
        pass,
        format!(
            "exploiter P2 reward PG {e_pg:.4} vs BPG {e_bpg:.4}; max enemy posterior PG {post:.4} \
             (BPG {post_bpg:.4}), threshold {:.4}; {:.1}s",
            cfg.tag_threshold(),
            t.as_secs_f64()
        ),
    );
    (out, pg)
}

fn ac10(tagging_ckpt: &Checkpoint) -> Outcome {
    let mut pass = true;
    let g = generate_security_game(&SecurityParams::zero_sum(2, 2, 3, 0)).unwrap();
    for config in [LearnerConfig::pg(500, 3), LearnerConfig::cfr(500, 3)] {
        let a = train(&g, 10, &config).unwrap();
        let b = train(&g, 10, &config).unwrap();
        pass &= a.to_json() == b.to_json();
        let (pa, na) = epsilon_both(&g, &a, DEFAULT_HISTORY_BUDGET).unwrap();
        let (pb, nb) = epsilon_both(&g, &b, DEFAULT_HISTORY_BUDGET).unwrap();
        pass &= pa.to_json() == pb.to_json() && na.to_csv() == nb.to_csv();
    }
    let tg = tagging_game(&TaggingConfig::default()).unwrap();
    let ra = induced_game_eval(&tg, tagging_ckpt, 16, 2, 500, 1).unwrap();
    let rb = induced_game_eval(&tg, tagging_ckpt, 16, 2, 500, 1).unwrap();
    pass &= ra.to_json() == rb.to_json();
    report(
        "AC10",
        "Determinism [byte-identical checkpoints and reports]",
        pass,
        "PG and CFR checkpoints, PBE/NE reports, induced report".to_string(),
    )
}

fn main() {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build_global()
        .expect("single-threaded pool");
    let mut outcomes = vec![ac1()];
    exposing_split();
    outcomes.push(ac2());

    let cfr = LearnerConfig::cfr(SECURITY_ITERS, 0);
    let pg = LearnerConfig {
        eta0: SECURITY_PG_ETA0,
        ..LearnerConfig::pg(SECURITY_ITERS, 0)
    };
    let runs = vec![
        ("TISP-CFR", security_runs(2, &cfr), security_runs(4, &cfr)),
        ("TISP-PG", security_runs(2, &pg), security_runs(4, &pg)),
    ];
    let gap = runs
        .iter()
        .flat_map(|(_, a, b)| [a.zero_sum_gap, b.zero_sum_gap])
        .fold(0.0f64, f64::max);
    outcomes.extend(ac3(&runs));
    outcomes.push(ac4());
    outcomes.push(ac5());
    outcomes.push(ac6());
    outcomes.push(ac7());
    outcomes.push(ac8(gap));
    let (o9, tagging_ckpt) = ac9();
    outcomes.push(o9);
    outcomes.push(ac10(&tagging_ckpt));

    let failed: Vec<&Outcome> = outcomes.iter().filter(|o| !o.pass).collect();
    println!(
        "acceptance: {}/{} criterion lines passed",
        outcomes.len() - failed.len(),
        outcomes.len()
    );
    if !failed.is_empty() {
        for o in &failed {
            eprintln!("failed: {} {} ({})", o.id, o.name, o.detail);
        }
        std::process::exit(1);
    }
}
