//! Grid-world "Tagging" game.
//!
//! Player 1 is either an ally (type 0, target upper-left) or an enemy
//! (type 1, target upper-right) and walks toward its target. Player 2 cannot
//! enter the river (the upper rows) and may tag player 1 while player 1 has
//! not entered the river and the two are closer than `tag_radius`.
//!
//! A state is `(p1 cell, p2 cell, entered-river flag)`. The round is not part
//! of the state: payoffs and moves do not depend on it, and the solver keeps
//! one policy per round.

use serde::{Deserialize, Serialize};

use crate::error::GameError;
use crate::game::{GameParts, GameSpec, Player};

pub const ALLY: usize = 0;
pub const ENEMY: usize = 1;

pub const UP: usize = 0;
pub const DOWN: usize = 1;
pub const LEFT: usize = 2;
pub const RIGHT: usize = 3;
pub const TAG: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TaggingConfig {
    pub grid_size: usize,
    pub episode_length: usize,
    pub tag_radius: f64,
    pub distance_reward_coeff: f64,
    pub distance_reward_exponent: f64,
    pub tag_reward_enemy: f64,
    pub tag_reward_ally: f64,
    pub tagged_penalty_p1: f64,
    pub prior: Vec<f64>,
    /// Number of top rows forming the river.
    pub river_rows: usize,
}

impl Default for TaggingConfig {
    fn default() -> Self {
        TaggingConfig {
            grid_size: 8,
            episode_length: 5,
            tag_radius: 2.5,
            distance_reward_coeff: -0.25,
            distance_reward_exponent: 0.4,
            tag_reward_enemy: 10.0,
            tag_reward_ally: -20.0,
            tagged_penalty_p1: -10.0,
            prior: vec![0.5, 0.5],
            river_rows: 4,
        }
    }
}

impl TaggingConfig {
    pub fn validate(&self) -> Result<(), GameError> {
        if !(self.tag_radius > 0.0) {
            return Err(GameError::invalid("tag_radius", "must be positive"));
        }
        if self.episode_length == 0 {
            return Err(GameError::invalid("episode_length", "must be at least 1"));
        }
        if self.grid_size < 2 {
            return Err(GameError::invalid("grid_size", "must be at least 2"));
        }
        if self.river_rows == 0 || self.river_rows >= self.grid_size {
            return Err(GameError::invalid("river_rows", "must leave at least one dry row"));
        }
        if self.prior.len() != 2
            || self.prior.iter().any(|p| *p < 0.0)
            || (self.prior.iter().sum::<f64>() - 1.0).abs() > 1e-12
        {
            return Err(GameError::invalid("prior", "must be a distribution over two types"));
        }
        Ok(())
    }

    /// Distance-based reward `coeff * dist^exponent`.
    pub fn distance_reward(&self, dist: f64) -> f64 {
        self.distance_reward_coeff * dist.powf(self.distance_reward_exponent)
    }

    /// Enemy posterior above which tagging pays off in expectation
    /// (ignoring the distance terms).
    pub fn tag_threshold(&self) -> f64 {
        -self.tag_reward_ally / (self.tag_reward_enemy - self.tag_reward_ally)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn dist(self, other: Cell) -> f64 {
        let dr = self.row as f64 - other.row as f64;
        let dc = self.col as f64 - other.col as f64;
        (dr * dr + dc * dc).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TagState {
    pub p1: Cell,
    pub p2: Cell,
    pub entered_river: bool,
}

/// State enumeration and movement rules for a [`TaggingConfig`].
#[derive(Debug, Clone)]
pub struct TaggingLayout {
    pub config: TaggingConfig,
    states: Vec<TagState>,
    lookup: Vec<usize>,
}

impl TaggingLayout {
    pub fn new(config: &TaggingConfig) -> Result<Self, GameError> {
        config.validate()?;
        let n = config.grid_size;
        let mut states = Vec::new();
        let mut lookup = vec![usize::MAX; n * n * n * n * 2];
        for p1r in 0..n {
            for p1c in 0..n {
                for p2r in config.river_rows..n {
                    for p2c in 0..n {
                        for flag in [false, true] {
                            if !flag && p1r < config.river_rows {
                                continue;
                            }
                            let st = TagState {
                                p1: Cell { row: p1r, col: p1c },
                                p2: Cell { row: p2r, col: p2c },
                                entered_river: flag,
                            };
                            lookup[Self::key(n, &st)] = states.len();
                            states.push(st);
                        }
                    }
                }
            }
        }
        Ok(TaggingLayout {
            config: config.clone(),
            states,
            lookup,
        })
    }

    fn key(n: usize, st: &TagState) -> usize {
        (((st.p1.row * n + st.p1.col) * n + st.p2.row) * n + st.p2.col) * 2
            + st.entered_river as usize
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, index: usize) -> TagState {
        self.states[index]
    }

    pub fn index(&self, st: &TagState) -> Option<usize> {
        match self.lookup.get(Self::key(self.config.grid_size, st)) {
            Some(&i) if i != usize::MAX => Some(i),
            _ => None,
        }
    }

    pub fn in_river(&self, c: Cell) -> bool {
        c.row < self.config.river_rows
    }

    pub fn p1_start(&self) -> Cell {
        let n = self.config.grid_size;
        Cell {
            row: n - 1,
            col: (n - 1) / 2,
        }
    }

    pub fn target(&self, ty: usize) -> Cell {
        let n = self.config.grid_size;
        if ty == ALLY {
            Cell { row: 0, col: 0 }
        } else {
            Cell { row: 0, col: n - 1 }
        }
    }

    fn shift(&self, c: Cell, dir: usize) -> Cell {
        let n = self.config.grid_size;
        match dir {
            UP if c.row > 0 => Cell { row: c.row - 1, ..c },
            DOWN if c.row + 1 < n => Cell { row: c.row + 1, ..c },
            LEFT if c.col > 0 => Cell { col: c.col - 1, ..c },
            RIGHT if c.col + 1 < n => Cell { col: c.col + 1, ..c },
            _ => c,
        }
    }

    pub fn move_p1(&self, c: Cell, a1: usize) -> Cell {
        self.shift(c, a1)
    }

    /// Player 2 cannot enter the river; blocked moves and tags keep it in place.
    pub fn move_p2(&self, c: Cell, a2: usize) -> Cell {
        if a2 == TAG {
            return c;
        }
        let next = self.shift(c, a2);
        if self.in_river(next) {
            c
        } else {
            next
        }
    }

    pub fn tag_legal(&self, st: &TagState) -> bool {
        !st.entered_river && st.p1.dist(st.p2) < self.config.tag_radius
    }

    /// Legal player-2 actions in `st`; an illegal tag is played as "stay".
    pub fn legal_actions_p2(&self, st: &TagState) -> [bool; 5] {
        [true, true, true, true, self.tag_legal(st)]
    }

    pub fn next_state(&self, st: &TagState, a1: usize, a2: usize) -> TagState {
        let p1 = self.move_p1(st.p1, a1);
        let p2 = self.move_p2(st.p2, a2);
        TagState {
            p1,
            p2,
            entered_river: st.entered_river || self.in_river(p1),
        }
    }

    /// `(u1, u2)` for type `ty` playing `(a1, a2)` in `st`.
    pub fn payoffs(&self, st: &TagState, ty: usize, a1: usize, a2: usize) -> (f64, f64) {
        let cfg = &self.config;
        let next = self.next_state(st, a1, a2);
        let tagged = a2 == TAG && self.tag_legal(st);
        let mut u1 = cfg.distance_reward(next.p1.dist(self.target(ty)));
        let mut u2 = cfg.distance_reward(next.p1.dist(next.p2));
        if tagged {
            u1 += cfg.tagged_penalty_p1;
            u2 += if ty == ENEMY {
                cfg.tag_reward_enemy
            } else {
                cfg.tag_reward_ally
            };
        }
        (u1, u2)
    }

    /// State index with player 1 at its start and player 2 at `p2`.
    pub fn start_state(&self, p2: Cell) -> Option<usize> {
        self.index(&TagState {
            p1: self.p1_start(),
            p2,
            entered_river: false,
        })
    }
}

pub fn tagging_game(config: &TaggingConfig) -> Result<GameSpec, GameError> {
    let layout = TaggingLayout::new(config)?;
    let n_states = layout.n_states();
    let mut g = GameParts::blank("tagging", n_states, 2, 4, 5, config.episode_length);
    g.prior = config.prior.clone();
    g.deferred_rewards = true;
    g.action_names_p1 = ["U", "D", "L", "R"].iter().map(|s| s.to_string()).collect();
    g.action_names_p2 = ["U", "D", "L", "R", "tag"].iter().map(|s| s.to_string()).collect();

    let start = layout.p1_start();
    let mut init = vec![0.0; n_states];
    let starts: Vec<usize> = (config.river_rows..config.grid_size)
        .flat_map(|r| (0..config.grid_size).map(move |c| Cell { row: r, col: c }))
        .filter(|&c| c != start)
        .filter_map(|c| layout.start_state(c))
        .collect();
    for &s in &starts {
        init[s] = 1.0 / starts.len() as f64;
    }
    g.initial_state_dist = init;

    for s in 0..n_states {
        let st = layout.state(s);
        for a1 in 0..4 {
            for a2 in 0..5 {
                let next = layout.next_state(&st, a1, a2);
                let ns = layout.index(&next).expect("successor is a valid state");
                g.set_transition(s, a1, a2, vec![(ns, 1.0)]);
                for ty in [ALLY, ENEMY] {
                    let (u1, u2) = layout.payoffs(&st, ty, a1, a2);
                    g.set_payoff(Player::One, ty, s, a1, a2, u1);
                    g.set_payoff(Player::Two, ty, s, a1, a2, u2);
                }
            }
        }
    }
    GameSpec::new(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout() -> TaggingLayout {
        TaggingLayout::new(&TaggingConfig::default()).unwrap()
    }

    #[test]
    fn distance_reward_at_unit_distance() {
        assert!((TaggingConfig::default().distance_reward(1.0) + 0.25).abs() < 1e-15);
    }

    #[test]
    fn state_count() {
        // p1 dry (32) x p2 (32) x 2 flags + p1 in river (32) x p2 (32)
        assert_eq!(layout().n_states(), 3072);
    }

    #[test]
    fn tag_out_of_radius_is_a_stay() {
        let l = layout();
        let st = TagState {
            p1: Cell { row: 7, col: 3 },
            p2: Cell { row: 4, col: 3 },
            entered_river: false,
        };
        assert!(!l.tag_legal(&st));
        let next = l.next_state(&st, UP, TAG);
        assert_eq!(next.p2, st.p2);
        let (u1, u2) = l.payoffs(&st, ENEMY, UP, TAG);
        let cfg = &l.config;
        assert_eq!(u1, cfg.distance_reward(Cell { row: 6, col: 3 }.dist(l.target(ENEMY))));
        assert_eq!(u2, cfg.distance_reward(Cell { row: 6, col: 3 }.dist(st.p2)));
    }

    #[test]
    fn tag_in_radius_pays() {
        let l = layout();
        let st = TagState {
            p1: Cell { row: 7, col: 3 },
            p2: Cell { row: 5, col: 3 },
            entered_river: false,
        };
        assert!(l.tag_legal(&st));
        let (u1, u2) = l.payoffs(&st, ENEMY, LEFT, TAG);
        let p1n = Cell { row: 7, col: 2 };
        let cfg = &l.config;
        assert!((u1 - (cfg.distance_reward(p1n.dist(l.target(ENEMY))) - 10.0)).abs() < 1e-12);
        assert!((u2 - (cfg.distance_reward(p1n.dist(st.p2)) + 10.0)).abs() < 1e-12);
        let (_, u2_ally) = l.payoffs(&st, ALLY, LEFT, TAG);
        assert!((u2_ally - (cfg.distance_reward(p1n.dist(st.p2)) - 20.0)).abs() < 1e-12);
    }

    #[test]
    fn entered_river_disables_tag() {
        let l = layout();
        let st = TagState {
            p1: Cell { row: 4, col: 3 },
            p2: Cell { row: 5, col: 3 },
            entered_river: true,
        };
        assert!(!l.tag_legal(&st));
        assert!(!l.legal_actions_p2(&st)[TAG]);
    }

    #[test]
    fn p2_blocked_by_river() {
        let l = layout();
        let c = Cell { row: 4, col: 2 };
        assert_eq!(l.move_p2(c, UP), c);
        assert_eq!(l.move_p2(c, DOWN), Cell { row: 5, col: 2 });
    }

    #[test]
    fn river_flag_is_sticky() {
        let l = layout();
        let st = TagState {
            p1: Cell { row: 4, col: 0 },
            p2: Cell { row: 7, col: 7 },
            entered_river: false,
        };
        let a = l.next_state(&st, UP, DOWN);
        assert!(a.entered_river);
        let b = l.next_state(&a, DOWN, DOWN);
        assert!(!l.in_river(b.p1) && b.entered_river);
    }

    #[test]
    fn game_builds_with_p2_never_in_river() {
        let cfg = TaggingConfig::default();
        let g = tagging_game(&cfg).unwrap();
        let l = layout();
        assert_eq!(g.n_states(), 3072);
        assert!(g.deferred_rewards());
        let mass: f64 = g.initial_state_dist().iter().sum();
        assert!((mass - 1.0).abs() < 1e-12);
        for s in 0..g.n_states() {
            assert!(!l.in_river(l.state(s).p2));
            for a1 in 0..4 {
                for a2 in 0..5 {
                    let ns = g.transition(s, a1, a2)[0].0;
                    assert!(!l.in_river(l.state(ns).p2));
                }
            }
        }
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = TaggingConfig {
            tag_radius: 0.0,
            ..TaggingConfig::default()
        };
        assert!(tagging_game(&cfg).is_err());
        let cfg = TaggingConfig {
            episode_length: 0,
            ..TaggingConfig::default()
        };
        assert!(tagging_game(&cfg).is_err());
    }

    #[test]
    fn threshold_from_rewards() {
        assert!((TaggingConfig::default().tag_threshold() - 2.0 / 3.0).abs() < 1e-15);
    }
}
