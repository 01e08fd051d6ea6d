use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tisp::belief::{grid_sample, interpolate_value, Belief};
use tisp::envs::exposing::{exposing_game, GUESS_TYPE_1};
use tisp::envs::security::{generate_security_game, SecurityParams};
use tisp::envs::{random_game, RandomGameShape};
use tisp::error::SolverError;
use tisp::game::{GameParts, GameSpec, Player};
use tisp::solver::{
    cfr_step, evaluate_policies, regret_matching, train, train_round, CfrPoint, CfrStepLog,
    Checkpoint, LearnerConfig, RoundContext,
};

fn matching_pennies() -> GameSpec {
    let mut g = GameParts::blank("matching-pennies", 1, 2, 2, 2, 1);
    for ty in 0..2 {
        for a1 in 0..2 {
            for a2 in 0..2 {
                let u = if a1 == a2 { 1.0 } else { -1.0 };
                g.set_payoff(Player::One, ty, 0, a1, a2, u);
                g.set_payoff(Player::Two, ty, 0, a1, a2, -u);
            }
        }
    }
    GameSpec::new(g).unwrap()
}

/// Per-type values of the stored profile at `(l, k, s)` by direct expansion.
fn bellman_oracle(spec: &GameSpec, ck: &Checkpoint, l: usize, k: usize, s: usize) -> [Vec<f64>; 2] {
    let nt = spec.n_types();
    let b = ck.grids[l].points()[k].probs().to_vec();
    let pol = &ck.policies[l];
    let p1: Vec<Vec<f64>> = (0..nt).map(|ty| pol.p1_row(k, s, ty).to_vec()).collect();
    let p2 = pol.p2_row(k, s);
    let mut out = [vec![0.0; nt], vec![0.0; nt]];
    for a1 in 0..spec.n_actions_p1() {
        let z: f64 = (0..nt).map(|ty| b[ty] * p1[ty][a1]).sum();
        let post: Vec<f64> = if z > 0.0 {
            (0..nt).map(|ty| b[ty] * p1[ty][a1] / z).collect()
        } else {
            vec![1.0 / nt as f64; nt]
        };
        for a2 in 0..spec.n_actions_p2() {
            for ty in 0..nt {
                let w = p1[ty][a1] * p2[a2];
                for (i, player) in Player::both().into_iter().enumerate() {
                    let mut cont = 0.0;
                    if l + 1 < spec.horizon() {
                        for &(sn, p) in spec.transition(s, a1, a2) {
                            let vals: Vec<f64> = (0..ck.grids[l + 1].len())
                                .map(|kk| ck.values.get(player, l + 1, kk, sn, ty))
                                .collect();
                            let v = interpolate_value(
                                &ck.grids[l + 1],
                                &vals,
                                &Belief::new(post.clone()).unwrap(),
                                ck.interpolation(),
                            )
                            .unwrap();
                            cont += p * v;
                        }
                    }
                    out[i][ty] += w * (spec.payoff(player, ty, s, a1, a2) + spec.discount() * cont);
                }
            }
        }
    }
    out
}

#[test]
fn stored_values_satisfy_the_bellman_equation() {
    let games = [
        generate_security_game(&SecurityParams::zero_sum(3, 2, 3, 2)).unwrap(),
        random_game(&RandomGameShape { horizon: 3, ..RandomGameShape::default() }, 9).unwrap(),
        exposing_game(),
    ];
    for g in &games {
        for config in [LearnerConfig::pg(100, 3), LearnerConfig::cfr(100, 3)] {
            let ck = train(g, 8, &config).unwrap();
            for l in 0..g.horizon() {
                for k in 0..ck.grids[l].len() {
                    for s in 0..g.n_states() {
                        let [v1, v2] = bellman_oracle(g, &ck, l, k, s);
                        for ty in 0..g.n_types() {
                            assert!((v1[ty] - ck.values.get(Player::One, l, k, s, ty)).abs() <= 1e-9);
                            assert!((v2[ty] - ck.values.get(Player::Two, l, k, s, ty)).abs() <= 1e-9);
                        }
                    }
                }
            }
            let recomputed = evaluate_policies(g, &ck.grids, &ck.policies, &ck.config);
            for (a, b) in recomputed.rounds.iter().zip(&ck.values.rounds) {
                for (x, y) in a.data.iter().zip(&b.data) {
                    assert!((x - y).abs() <= 1e-9);
                }
            }
        }
    }
}

/// Runs `t` exact regret-matching steps at one grid point of round 0.
fn cfr_logs(spec: &GameSpec, res: usize, k: usize, t: usize) -> (CfrPoint, Vec<CfrStepLog>) {
    let grid = grid_sample(spec.n_types(), res).unwrap();
    let config = LearnerConfig::cfr(t, 0);
    let ck = train(spec, res, &config).unwrap();
    let ctx = RoundContext::new(spec, &grid, &ck.values.rounds[1], config.interpolation());
    let b = grid.points()[k].clone();
    let mut point = CfrPoint::new(
        spec.n_states(),
        spec.n_types(),
        spec.n_actions_p1(),
        spec.n_actions_p2(),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let logs = (0..t)
        .map(|_| cfr_step(&ctx, &mut point, &b, &config, &mut rng).unwrap().unwrap())
        .collect();
    (point, logs)
}

#[test]
fn regret_trace_replays_from_logged_action_values() {
    let g = generate_security_game(&SecurityParams::zero_sum(3, 2, 2, 5)).unwrap();
    let (point, logs) = cfr_logs(&g, 10, 3, 300);
    let (nt, na1, na2) = (2, 3, 3);
    let mut r1 = vec![vec![0.0; na1]; nt];
    let mut r2 = vec![0.0; na2];
    for log in &logs {
        for ty in 0..nt {
            let pi = regret_matching(&r1[ty]);
            let v: f64 = pi.iter().zip(&log.q1[0][ty]).map(|(p, q)| p * q).sum();
            assert!((v - log.v1[0][ty]).abs() <= 1e-9);
        }
        let pi2 = regret_matching(&r2);
        let v2: f64 = pi2.iter().zip(&log.q2[0]).map(|(p, q)| p * q).sum();
        assert!((v2 - log.v2[0]).abs() <= 1e-9);
        for ty in 0..nt {
            for a in 0..na1 {
                r1[ty][a] += log.q1[0][ty][a] - log.v1[0][ty];
            }
        }
        for a in 0..na2 {
            r2[a] += log.q2[0][a] - log.v2[0];
        }
    }
    for ty in 0..nt {
        for a in 0..na1 {
            assert!((point.regret1[ty * na1 + a] - r1[ty][a]).abs() <= 1e-9);
        }
    }
    for a in 0..na2 {
        assert!((point.regret2[a] - r2[a]).abs() <= 1e-9);
    }
}

#[test]
fn average_regret_is_within_the_regret_matching_bound() {
    let g = generate_security_game(&SecurityParams::zero_sum(2, 2, 2, 0)).unwrap();
    let (_, logs) = cfr_logs(&g, 20, 7, 10_000);
    let na = 2.0f64;
    let mut r1 = [[0.0; 2]; 2];
    let mut r2 = [0.0; 2];
    let mut range1 = [(f64::INFINITY, f64::NEG_INFINITY); 2];
    let mut range2 = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, log) in logs.iter().enumerate() {
        for ty in 0..2 {
            for a in 0..2 {
                let q = log.q1[0][ty][a];
                r1[ty][a] += q - log.v1[0][ty];
                range1[ty] = (range1[ty].0.min(q), range1[ty].1.max(q));
            }
        }
        for a in 0..2 {
            let q = log.q2[0][a];
            r2[a] += q - log.v2[0];
            range2 = (range2.0.min(q), range2.1.max(q));
        }
        let t = i + 1;
        if [100, 1_000, 10_000].contains(&t) {
            let tf = t as f64;
            for ty in 0..2 {
                let avg = r1[ty][0].max(r1[ty][1]) / tf;
                let bound = (range1[ty].1 - range1[ty].0) * na.sqrt() / tf.sqrt();
                assert!(avg <= bound, "type {ty} at T={t}: {avg} > {bound}");
            }
            let avg = r2[0].max(r2[1]) / tf;
            let bound = (range2.1 - range2.0) * na.sqrt() / tf.sqrt();
            assert!(avg <= bound, "player 2 at T={t}: {avg} > {bound}");
        }
    }
}

#[test]
fn identical_configs_give_byte_identical_checkpoints() {
    let g = generate_security_game(&SecurityParams::zero_sum(2, 2, 3, 1)).unwrap();
    for config in [LearnerConfig::pg(200, 7), LearnerConfig::cfr(200, 7)] {
        let a = train(&g, 10, &config).unwrap().to_json();
        let b = train(&g, 10, &config).unwrap().to_json();
        assert_eq!(a, b);
    }
    let a = train(&g, 10, &LearnerConfig::pg(200, 7)).unwrap().to_json();
    let c = train(&g, 10, &LearnerConfig::pg(200, 8)).unwrap().to_json();
    assert_ne!(a, c);
}

#[test]
fn each_round_depends_only_on_the_next_rounds_values() {
    let g = generate_security_game(&SecurityParams::zero_sum(2, 2, 3, 6)).unwrap();
    for config in [LearnerConfig::pg(150, 2), LearnerConfig::cfr(150, 2)] {
        let ck = train(&g, 10, &config).unwrap();
        for l in 0..3 {
            let out = train_round(&g, &ck.grids[l], &ck.values.rounds[l + 1], &config).unwrap();
            assert_eq!(out.policy, ck.policies[l]);
            assert_eq!(out.values, ck.values.rounds[l]);
        }
    }
}

#[test]
fn averages_converge_to_uniform_in_matching_pennies() {
    let g = matching_pennies();
    for config in [LearnerConfig::pg(10_000, 0), LearnerConfig::cfr(10_000, 0)] {
        let ck = train(&g, 4, &config).unwrap();
        for (k, b) in ck.grids[0].points().iter().enumerate() {
            // identical types: only the belief-weighted mixture is pinned down
            let p: f64 = (0..2).map(|ty| b.probs()[ty] * ck.policies[0].p1_row(k, 0, ty)[0]).sum();
            assert!((p - 0.5).abs() <= 0.02, "{:?} point {k}: {p}", config.algo);
            let q = ck.policies[0].p2_row(k, 0)[0];
            assert!((q - 0.5).abs() <= 0.02, "{:?} point {k}: {q}", config.algo);
        }
    }
}

#[test]
fn last_round_of_a_longer_game_matches_the_one_round_game() {
    let long = generate_security_game(&SecurityParams::zero_sum(3, 2, 3, 4)).unwrap();
    let short = long.with_horizon(1).unwrap();
    let config = LearnerConfig::cfr(300, 0);
    let a = train(&long, 10, &config).unwrap();
    let b = train(&short, 10, &config).unwrap();
    assert_eq!(a.policies[2].p1, b.policies[0].p1);
    assert_eq!(a.policies[2].p2, b.policies[0].p2);
    assert_eq!(a.values.rounds[2].data, b.values.rounds[0].data);
}

#[test]
fn one_round_solution_is_a_stage_equilibrium_at_every_point() {
    let g = generate_security_game(&SecurityParams::zero_sum(2, 2, 1, 3)).unwrap();
    let t = 5_000;
    let ck = train(&g, 10, &LearnerConfig::cfr(t, 0)).unwrap();
    // exploitability of the average is at most the summed average regrets
    let tol = 2.0 * g.payoff_range() * 2f64.sqrt() / (t as f64).sqrt();
    for (k, b) in ck.grids[0].points().iter().enumerate() {
        let b = b.probs();
        let p1: Vec<&[f64]> = (0..2).map(|ty| ck.policies[0].p1_row(k, 0, ty)).collect();
        let p2 = ck.policies[0].p2_row(k, 0);
        let u = |ty: usize, a1: usize, a2: usize| g.payoff(Player::One, ty, 0, a1, a2);
        for ty in 0..2 {
            let v: f64 = (0..2)
                .flat_map(|a1| (0..2).map(move |a2| (a1, a2)))
                .map(|(a1, a2)| p1[ty][a1] * p2[a2] * u(ty, a1, a2))
                .sum();
            let best = (0..2)
                .map(|a1| (0..2).map(|a2| p2[a2] * u(ty, a1, a2)).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(best - v <= tol, "point {k} type {ty}: gain {}", best - v);
        }
        // player 2 minimizes player 1's expected payoff
        let v2: f64 = (0..2)
            .map(|a2| p2[a2] * (0..2).map(|ty| b[ty] * (0..2).map(|a1| p1[ty][a1] * u(ty, a1, a2)).sum::<f64>()).sum::<f64>())
            .sum();
        let best2 = (0..2)
            .map(|a2| (0..2).map(|ty| b[ty] * (0..2).map(|a1| p1[ty][a1] * u(ty, a1, a2)).sum::<f64>()).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        assert!(v2 - best2 <= tol, "point {k}: player-2 gain {}", v2 - best2);
    }
}

#[test]
fn exposing_guesser_names_a_revealed_type() {
    let g = exposing_game();
    let ck = train(&g, 20, &LearnerConfig::pg(2_000, 0)).unwrap();
    let k = ck.grids[1].exact_match(&[1.0, 0.0]).unwrap();
    assert!(ck.policies[1].p2_row(k, 1)[GUESS_TYPE_1] >= 0.99);
}

#[test]
fn checkpoint_round_trips_through_disk() {
    let g = exposing_game();
    let ck = train(&g, 6, &LearnerConfig::cfr(50, 0)).unwrap();
    let dir = std::env::temp_dir().join(format!("tisp-solver-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ckpt.json");
    ck.save(&path).unwrap();
    let back = Checkpoint::load(&path).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(back, ck);
    assert_eq!(back.to_json(), ck.to_json());
    back.check_consistency().unwrap();
}

#[test]
fn checkpoint_rejects_a_different_game() {
    let ck = train(&exposing_game(), 6, &LearnerConfig::cfr(20, 0)).unwrap();
    let other = generate_security_game(&SecurityParams::zero_sum(2, 2, 2, 0)).unwrap();
    assert!(matches!(ck.verify_game(&other), Err(SolverError::GameMismatch { .. })));
    ck.verify_game(&exposing_game()).unwrap();
}

#[test]
fn invalid_configs_are_rejected() {
    let g = exposing_game();
    assert!(matches!(train(&g, 6, &LearnerConfig::pg(0, 0)), Err(SolverError::Config(_))));
    let bad = LearnerConfig { eta0: -1.0, ..LearnerConfig::pg(10, 0) };
    assert!(matches!(train(&g, 6, &bad), Err(SolverError::Config(_))));
    assert!(train(&g, 0, &LearnerConfig::pg(10, 0)).is_err());
}
