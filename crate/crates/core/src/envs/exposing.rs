//! Two-round "Exposing" matrix game.
//!
//! Player 2 tries to guess player 1's type in the second round (correct
//! guess +10, wrong guess -20, abstain 0). Player 1 earns 5 whenever player 2
//! guesses, whichever type is named, and 1 for playing its first action in
//! round one. State 0 marks the first round and state 1 the second.

use crate::game::{GameParts, GameSpec, Player};

pub const GUESS_TYPE_1: usize = 0;
pub const GUESS_TYPE_2: usize = 1;
pub const NO_GUESS: usize = 2;

pub const CORRECT_GUESS: f64 = 10.0;
pub const WRONG_GUESS: f64 = -20.0;
pub const GUESS_BONUS_P1: f64 = 5.0;
pub const FIRST_ACTION_BONUS: f64 = 1.0;

pub fn exposing_game() -> GameSpec {
    let mut g = GameParts::blank("exposing", 2, 2, 2, 3, 2);
    g.initial_state_dist = vec![1.0, 0.0];
    g.action_names_p1 = vec!["action 1".into(), "action 2".into()];
    g.action_names_p2 = vec!["guess type 1".into(), "guess type 2".into(), "no guess".into()];
    for a1 in 0..2 {
        for a2 in 0..3 {
            g.set_transition(0, a1, a2, vec![(1, 1.0)]);
            g.set_transition(1, a1, a2, vec![(1, 1.0)]);
            for ty in 0..2 {
                // round one: only player 1's first action pays
                let r1 = if a1 == 0 { FIRST_ACTION_BONUS } else { 0.0 };
                g.set_payoff(Player::One, ty, 0, a1, a2, r1);
                g.set_payoff(Player::Two, ty, 0, a1, a2, 0.0);
                // round two
                let (u1, u2) = match a2 {
                    NO_GUESS => (0.0, 0.0),
                    guess if guess == ty => (GUESS_BONUS_P1, CORRECT_GUESS),
                    _ => (GUESS_BONUS_P1, WRONG_GUESS),
                };
                g.set_payoff(Player::One, ty, 1, a1, a2, u1);
                g.set_payoff(Player::Two, ty, 1, a1, a2, u2);
            }
        }
    }
    GameSpec::new(g).expect("exposing game is valid")
}

/// Posterior on type 1 above which guessing type 1 beats abstaining.
pub fn guess_threshold() -> f64 {
    // p * 10 + (1 - p) * (-20) = 0
    -WRONG_GUESS / (CORRECT_GUESS - WRONG_GUESS)
}
