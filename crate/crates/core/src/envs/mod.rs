//! Built-in games and a random-game generator.

pub mod exposing;
pub mod security;
pub mod tagging;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GameError;
use crate::game::{GameParts, GameSpec, Player};

/// Shape of a random game drawn by [`random_game`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomGameShape {
    pub n_states: usize,
    pub n_types: usize,
    pub n_actions_p1: usize,
    pub n_actions_p2: usize,
    pub horizon: usize,
    pub discount: f64,
    pub zero_sum: bool,
}

impl Default for RandomGameShape {
    fn default() -> Self {
        RandomGameShape {
            n_states: 2,
            n_types: 2,
            n_actions_p1: 2,
            n_actions_p2: 2,
            horizon: 2,
            discount: 1.0,
            zero_sum: false,
        }
    }
}

/// Random game with payoffs in `[-1, 1)`, random dense transition rows,
/// a random interior prior and a random initial distribution.
pub fn random_game(shape: &RandomGameShape, seed: u64) -> Result<GameSpec, GameError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let RandomGameShape {
        n_states,
        n_types,
        n_actions_p1,
        n_actions_p2,
        horizon,
        discount,
        zero_sum,
    } = *shape;
    let mut g = GameParts::blank(
        &format!("random-seed{seed}"),
        n_states,
        n_types,
        n_actions_p1,
        n_actions_p2,
        horizon,
    );
    g.discount = discount;
    g.prior = random_simplex(&mut rng, n_types, 0.05);
    g.initial_state_dist = random_simplex(&mut rng, n_states, 0.0);
    for s in 0..n_states {
        for a1 in 0..n_actions_p1 {
            for a2 in 0..n_actions_p2 {
                let row = random_simplex(&mut rng, n_states, 0.0);
                g.set_transition(s, a1, a2, row.into_iter().enumerate().collect());
                for ty in 0..n_types {
                    let u1 = rng.gen_range(-1.0..1.0);
                    let u2 = if zero_sum { -u1 } else { rng.gen_range(-1.0..1.0) };
                    g.set_payoff(Player::One, ty, s, a1, a2, u1);
                    g.set_payoff(Player::Two, ty, s, a1, a2, u2);
                }
            }
        }
    }
    GameSpec::new(g)
}

/// Random distribution with every entry at least `floor / n`; the last
/// entry absorbs rounding so the sum is 1 to machine precision.
fn random_simplex<R: Rng>(rng: &mut R, n: usize, floor: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0) + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let mut v: Vec<f64> = raw
        .iter()
        .map(|x| floor / n as f64 + (1.0 - floor) * x / total)
        .collect();
    let head: f64 = v[..n - 1].iter().sum();
    v[n - 1] = 1.0 - head;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_game_is_valid_and_seeded() {
        let shape = RandomGameShape::default();
        let a = random_game(&shape, 4).unwrap();
        let b = random_game(&shape, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_game(&shape, 5).unwrap());
        assert!(a.prior().iter().all(|&p| p > 0.0));
    }

    #[test]
    fn zero_sum_shape() {
        let shape = RandomGameShape {
            zero_sum: true,
            n_states: 3,
            n_types: 3,
            ..RandomGameShape::default()
        };
        assert!(random_game(&shape, 1).unwrap().is_zero_sum());
    }
}
