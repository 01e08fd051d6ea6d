//! Finitely repeated simultaneous-move security game.
//!
//! Player 1 (attacker, private type) picks a target, player 2 (defender)
//! picks a target to cover. An uncovered attack earns the attacker the
//! type's reward for that target; a covered one costs the type's penalty.
//! The single state repeats for `horizon` rounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GameError;
use crate::game::{GameParts, GameSpec, Player};

pub const REWARD_RANGE: (f64, f64) = (1.0, 10.0);
pub const PENALTY_RANGE: (f64, f64) = (-10.0, -1.0);
/// Range of the defender's own-action payoff in general-sum instances.
pub const DEFENDER_RANGE: (f64, f64) = (-10.0, 10.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayoffMode {
    ZeroSum,
    GeneralSum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecurityParams {
    pub n_targets: usize,
    pub n_types: usize,
    pub horizon: usize,
    pub payoff_mode: PayoffMode,
    pub seed: u64,
}

impl SecurityParams {
    pub fn zero_sum(n_targets: usize, n_types: usize, horizon: usize, seed: u64) -> Self {
        SecurityParams {
            n_targets,
            n_types,
            horizon,
            payoff_mode: PayoffMode::ZeroSum,
            seed,
        }
    }
}

pub fn generate_security_game(p: &SecurityParams) -> Result<GameSpec, GameError> {
    if p.n_targets < 2 {
        return Err(GameError::invalid("n_targets", "need at least 2 targets"));
    }
    if p.n_types < 2 {
        return Err(GameError::invalid("n_types", "need at least 2 attacker types"));
    }
    if p.horizon < 1 {
        return Err(GameError::invalid("horizon", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let n = p.n_targets;
    let mode = match p.payoff_mode {
        PayoffMode::ZeroSum => "zero_sum",
        PayoffMode::GeneralSum => "general_sum",
    };
    let mut g = GameParts::blank(
        &format!("security-{n}x{}-L{}-{mode}-seed{}", p.n_types, p.horizon, p.seed),
        1,
        p.n_types,
        n,
        n,
        p.horizon,
    );
    g.action_names_p1 = (0..n).map(|t| format!("attack {}", t + 1)).collect();
    g.action_names_p2 = (0..n).map(|t| format!("defend {}", t + 1)).collect();

    let mut reward = vec![vec![0.0; n]; p.n_types];
    let mut penalty = vec![vec![0.0; n]; p.n_types];
    for ty in 0..p.n_types {
        for t in 0..n {
            reward[ty][t] = rng.gen_range(REWARD_RANGE.0..REWARD_RANGE.1);
            penalty[ty][t] = rng.gen_range(PENALTY_RANGE.0..PENALTY_RANGE.1);
        }
    }
    let defender: Vec<f64> = (0..n)
        .map(|_| rng.gen_range(DEFENDER_RANGE.0..DEFENDER_RANGE.1))
        .collect();

    for ty in 0..p.n_types {
        for a1 in 0..n {
            for a2 in 0..n {
                let u1 = if a1 == a2 { penalty[ty][a1] } else { reward[ty][a1] };
                let u2 = match p.payoff_mode {
                    PayoffMode::ZeroSum => -u1,
                    PayoffMode::GeneralSum => defender[a2],
                };
                g.set_payoff(Player::One, ty, 0, a1, a2, u1);
                g.set_payoff(Player::Two, ty, 0, a1, a2, u2);
            }
        }
    }
    GameSpec::new(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sum_negates_exactly() {
        let g = generate_security_game(&SecurityParams::zero_sum(2, 2, 10, 7)).unwrap();
        assert!(g.is_zero_sum());
        assert_eq!(g.n_states(), 1);
        assert_eq!(g.horizon(), 10);
        for a1 in 0..2 {
            for a2 in 0..2 {
                assert_eq!(g.transition(0, a1, a2), &[(0, 1.0)]);
            }
        }
    }

    #[test]
    fn general_sum_defender_depends_on_own_action_only() {
        let p = SecurityParams {
            payoff_mode: PayoffMode::GeneralSum,
            ..SecurityParams::zero_sum(2, 2, 10, 7)
        };
        let g = generate_security_game(&p).unwrap();
        for a2 in 0..2 {
            let u = g.payoff(Player::Two, 0, 0, 0, a2);
            for ty in 0..2 {
                for a1 in 0..2 {
                    assert_eq!(g.payoff(Player::Two, ty, 0, a1, a2), u);
                }
            }
        }
        assert!(!g.is_zero_sum());
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let p = SecurityParams::zero_sum(3, 2, 4, 99);
        assert_eq!(generate_security_game(&p).unwrap(), generate_security_game(&p).unwrap());
        let q = SecurityParams { seed: 100, ..p.clone() };
        assert_ne!(generate_security_game(&p).unwrap(), generate_security_game(&q).unwrap());
    }

    #[test]
    fn attacker_payoff_structure() {
        let g = generate_security_game(&SecurityParams::zero_sum(3, 2, 1, 1)).unwrap();
        for ty in 0..2 {
            for a1 in 0..3 {
                for a2 in 0..3 {
                    let u = g.payoff(Player::One, ty, 0, a1, a2);
                    if a1 == a2 {
                        assert!((-10.0..-1.0).contains(&u));
                    } else {
                        assert!((1.0..10.0).contains(&u));
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_sizes_rejected() {
        assert!(generate_security_game(&SecurityParams::zero_sum(1, 2, 2, 0)).is_err());
        assert!(generate_security_game(&SecurityParams::zero_sum(2, 1, 2, 0)).is_err());
        assert!(generate_security_game(&SecurityParams::zero_sum(2, 2, 0, 0)).is_err());
    }
}
