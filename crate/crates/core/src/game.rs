//! The one-sided stochastic Bayesian game model.
//!
//! A [`GameSpec`] holds the finite state space, player 1's private type
//! distribution, the joint action space, a (sparse) transition table and a
//! dense payoff table `u[player][type][state][a1][a2]`. Every play draws the
//! type once from the prior and an initial state from the initial
//! distribution, then runs `horizon` simultaneous-move rounds.

use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::belief::Belief;
use crate::error::GameError;

/// Tolerance for "sums to one" checks on probability tables.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Schema tag written into every game file.
pub const GAME_SCHEMA: &str = "ossbg-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl Player {
    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    pub fn both() -> [Player; 2] {
        [Player::One, Player::Two]
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::One => write!(f, "P1"),
            Player::Two => write!(f, "P2"),
        }
    }
}

/// One entry of a sparse transition row.
pub type Successor = (usize, f64);

/// An immutable, validated game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub name: String,
    n_states: usize,
    n_types: usize,
    n_actions_p1: usize,
    n_actions_p2: usize,
    horizon: usize,
    discount: f64,
    initial_state_dist: Vec<f64>,
    prior: Vec<f64>,
    /// Sparse rows indexed by `(s * n_actions_p1 + a1) * n_actions_p2 + a2`.
    transitions: Vec<Vec<Successor>>,
    /// Dense payoffs indexed by `[player][type][state][a1][a2]`.
    payoffs: Vec<f64>,
    #[serde(default)]
    action_names_p1: Vec<String>,
    #[serde(default)]
    action_names_p2: Vec<String>,
    /// Rewards are revealed only at the end of a play.
    #[serde(default)]
    deferred_rewards: bool,
}

/// Plain description used to assemble a [`GameSpec`]; validated by [`GameSpec::new`].
#[derive(Debug, Clone)]
pub struct GameParts {
    pub name: String,
    pub n_states: usize,
    pub n_types: usize,
    pub n_actions_p1: usize,
    pub n_actions_p2: usize,
    pub horizon: usize,
    pub discount: f64,
    pub initial_state_dist: Vec<f64>,
    pub prior: Vec<f64>,
    pub transitions: Vec<Vec<Successor>>,
    pub payoffs: Vec<f64>,
    pub action_names_p1: Vec<String>,
    pub action_names_p2: Vec<String>,
    pub deferred_rewards: bool,
}

impl GameParts {
    /// Empty tables of the right shape: all-zero payoffs, every transition
    /// row a self-loop, uniform prior and initial distribution.
    pub fn blank(
        name: &str,
        n_states: usize,
        n_types: usize,
        n_actions_p1: usize,
        n_actions_p2: usize,
        horizon: usize,
    ) -> Self {
        let mut transitions = Vec::with_capacity(n_states * n_actions_p1 * n_actions_p2);
        for s in 0..n_states {
            for _ in 0..n_actions_p1 * n_actions_p2 {
                transitions.push(vec![(s, 1.0)]);
            }
        }
        GameParts {
            name: name.to_string(),
            n_states,
            n_types,
            n_actions_p1,
            n_actions_p2,
            horizon,
            discount: 1.0,
            initial_state_dist: uniform(n_states),
            prior: uniform(n_types),
            transitions,
            payoffs: vec![0.0; 2 * n_types * n_states * n_actions_p1 * n_actions_p2],
            action_names_p1: Vec::new(),
            action_names_p2: Vec::new(),
            deferred_rewards: false,
        }
    }

    pub fn transition_index(&self, s: usize, a1: usize, a2: usize) -> usize {
        (s * self.n_actions_p1 + a1) * self.n_actions_p2 + a2
    }

    pub fn payoff_index(&self, player: Player, ty: usize, s: usize, a1: usize, a2: usize) -> usize {
        (((player.index() * self.n_types + ty) * self.n_states + s) * self.n_actions_p1 + a1)
            * self.n_actions_p2
            + a2
    }

    pub fn set_payoff(&mut self, player: Player, ty: usize, s: usize, a1: usize, a2: usize, v: f64) {
        let i = self.payoff_index(player, ty, s, a1, a2);
        self.payoffs[i] = v;
    }

    pub fn set_transition(&mut self, s: usize, a1: usize, a2: usize, row: Vec<Successor>) {
        let i = self.transition_index(s, a1, a2);
        self.transitions[i] = row;
    }
}

fn uniform(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

fn check_distribution(field: &str, v: &[f64], len: usize) -> Result<(), GameError> {
    if v.len() != len {
        return Err(GameError::invalid(
            field,
            format!("expected {len} entries, found {}", v.len()),
        ));
    }
    if let Some(i) = v.iter().position(|p| !p.is_finite() || *p < 0.0) {
        return Err(GameError::invalid(
            format!("{field}[{i}]"),
            format!("entry {} is negative or non-finite", v[i]),
        ));
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > PROB_SUM_TOL {
        return Err(GameError::invalid(field, format!("sums to {sum}, not 1")));
    }
    Ok(())
}

impl GameSpec {
    pub fn new(parts: GameParts) -> Result<Self, GameError> {
        let GameParts {
            name,
            n_states,
            n_types,
            n_actions_p1,
            n_actions_p2,
            horizon,
            discount,
            initial_state_dist,
            prior,
            transitions,
            payoffs,
            action_names_p1,
            action_names_p2,
            deferred_rewards,
        } = parts;
        for (field, n) in [
            ("n_states", n_states),
            ("n_types", n_types),
            ("n_actions_p1", n_actions_p1),
            ("n_actions_p2", n_actions_p2),
            ("horizon", horizon),
        ] {
            if n == 0 {
                return Err(GameError::invalid(field, "must be at least 1"));
            }
        }
        if !(0.0..=1.0).contains(&discount) {
            return Err(GameError::invalid("discount", format!("{discount} not in [0, 1]")));
        }
        check_distribution("initial_state_dist", &initial_state_dist, n_states)?;
        check_distribution("prior", &prior, n_types)?;
        let n_rows = n_states * n_actions_p1 * n_actions_p2;
        if transitions.len() != n_rows {
            return Err(GameError::invalid(
                "transition",
                format!("expected {n_rows} rows, found {}", transitions.len()),
            ));
        }
        for (idx, row) in transitions.iter().enumerate() {
            let a2 = idx % n_actions_p2;
            let a1 = (idx / n_actions_p2) % n_actions_p1;
            let s = idx / (n_actions_p1 * n_actions_p2);
            let field = || format!("transition[{s}][{a1}][{a2}]");
            let mut sum = 0.0;
            for &(next, p) in row {
                if next >= n_states {
                    return Err(GameError::invalid(
                        field(),
                        format!("next state {next} out of range (|states| = {n_states})"),
                    ));
                }
                if !p.is_finite() || p < 0.0 {
                    return Err(GameError::invalid(field(), format!("probability {p} is invalid")));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > PROB_SUM_TOL {
                return Err(GameError::invalid(field(), format!("row sums to {sum}, not 1")));
            }
        }
        let n_pay = 2 * n_types * n_rows;
        if payoffs.len() != n_pay {
            return Err(GameError::invalid(
                "payoff",
                format!("expected {n_pay} entries, found {}", payoffs.len()),
            ));
        }
        if let Some(i) = payoffs.iter().position(|u| !u.is_finite()) {
            return Err(GameError::invalid("payoff", format!("entry {i} is not finite")));
        }
        for (field, names, n) in [
            ("action_names_p1", &action_names_p1, n_actions_p1),
            ("action_names_p2", &action_names_p2, n_actions_p2),
        ] {
            if !names.is_empty() && names.len() != n {
                return Err(GameError::invalid(field, format!("expected {n} names")));
            }
        }
        Ok(GameSpec {
            name,
            n_states,
            n_types,
            n_actions_p1,
            n_actions_p2,
            horizon,
            discount,
            initial_state_dist,
            prior,
            transitions,
            payoffs,
            action_names_p1,
            action_names_p2,
            deferred_rewards,
        })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }
    pub fn n_types(&self) -> usize {
        self.n_types
    }
    pub fn n_actions(&self, player: Player) -> usize {
        match player {
            Player::One => self.n_actions_p1,
            Player::Two => self.n_actions_p2,
        }
    }
    pub fn n_actions_p1(&self) -> usize {
        self.n_actions_p1
    }
    pub fn n_actions_p2(&self) -> usize {
        self.n_actions_p2
    }
    pub fn horizon(&self) -> usize {
        self.horizon
    }
    pub fn discount(&self) -> f64 {
        self.discount
    }
    pub fn initial_state_dist(&self) -> &[f64] {
        &self.initial_state_dist
    }
    pub fn prior(&self) -> &[f64] {
        &self.prior
    }
    pub fn deferred_rewards(&self) -> bool {
        self.deferred_rewards
    }

    pub fn action_name(&self, player: Player, a: usize) -> String {
        let names = match player {
            Player::One => &self.action_names_p1,
            Player::Two => &self.action_names_p2,
        };
        names.get(a).cloned().unwrap_or_else(|| format!("a{}", a + 1))
    }

    #[inline]
    pub fn payoff(&self, player: Player, ty: usize, s: usize, a1: usize, a2: usize) -> f64 {
        let i = (((player.index() * self.n_types + ty) * self.n_states + s) * self.n_actions_p1
            + a1)
            * self.n_actions_p2
            + a2;
        self.payoffs[i]
    }

    /// Sparse successor distribution `P(. | s, a1, a2)`.
    #[inline]
    pub fn transition(&self, s: usize, a1: usize, a2: usize) -> &[Successor] {
        &self.transitions[(s * self.n_actions_p1 + a1) * self.n_actions_p2 + a2]
    }

    /// `max u - min u` over both players and every entry of the payoff table.
    pub fn payoff_range(&self) -> f64 {
        let (lo, hi) = self
            .payoffs
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &u| (lo.min(u), hi.max(u)));
        hi - lo
    }

    pub fn is_zero_sum(&self) -> bool {
        let half = self.payoffs.len() / 2;
        self.payoffs[..half]
            .iter()
            .zip(&self.payoffs[half..])
            .all(|(u1, u2)| u1 + u2 == 0.0)
    }

    pub fn check_state(&self, s: usize) -> Result<(), GameError> {
        check_index("state", s, self.n_states)
    }

    pub fn check_actions(&self, a1: usize, a2: usize) -> Result<(), GameError> {
        check_index("action_p1", a1, self.n_actions_p1)?;
        check_index("action_p2", a2, self.n_actions_p2)
    }

    /// Content hash of the game; checkpoints record it to detect mismatched games.
    pub fn fingerprint(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("game serializes");
        let digest = Sha256::digest(&bytes);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Draws `s' ~ P(. | s, a1, a2)`.
    pub fn transition_sample<R: Rng + ?Sized>(
        &self,
        s: usize,
        a1: usize,
        a2: usize,
        rng: &mut R,
    ) -> Result<usize, GameError> {
        self.check_state(s)?;
        self.check_actions(a1, a2)?;
        Ok(sample_successor(self.transition(s, a1, a2), rng))
    }

    /// Produces a fresh round-`round` game: a uniformly random state and a
    /// type drawn from `belief`.
    pub fn sub_reset<R: Rng + ?Sized>(
        &self,
        round: usize,
        belief: &Belief,
        rng: &mut R,
    ) -> Result<(usize, usize), GameError> {
        if round >= self.horizon {
            return Err(GameError::OutOfRange {
                what: "round",
                index: round,
                size: self.horizon,
            });
        }
        if belief.len() != self.n_types {
            return Err(GameError::invalid(
                "belief",
                format!("expected {} types, found {}", self.n_types, belief.len()),
            ));
        }
        let s = rng.gen_range(0..self.n_states);
        let ty = sample_index(belief.probs(), rng);
        Ok((s, ty))
    }

    /// Draws a type from the prior and a state from the initial distribution.
    pub fn reset<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        let s = sample_index(&self.initial_state_dist, rng);
        let ty = sample_index(&self.prior, rng);
        (s, ty)
    }

    /// Plays one round from `s` at `round`.
    pub fn step<R: Rng + ?Sized>(
        &self,
        round: usize,
        s: usize,
        ty: usize,
        a1: usize,
        a2: usize,
        rng: &mut R,
    ) -> Result<StageOutcome, GameError> {
        check_index("round", round, self.horizon)?;
        check_index("type", ty, self.n_types)?;
        let next_state = self.transition_sample(s, a1, a2, rng)?;
        Ok(StageOutcome {
            payoffs: (
                self.payoff(Player::One, ty, s, a1, a2),
                self.payoff(Player::Two, ty, s, a1, a2),
            ),
            next_state,
            terminal: round + 1 == self.horizon,
            deferred: self.deferred_rewards,
        })
    }

    /// Replaces the prior, keeping everything else.
    pub fn with_prior(&self, prior: Vec<f64>) -> Result<Self, GameError> {
        check_distribution("prior", &prior, self.n_types)?;
        let mut g = self.clone();
        g.prior = prior;
        Ok(g)
    }

    /// Replaces the horizon, keeping everything else.
    pub fn with_horizon(&self, horizon: usize) -> Result<Self, GameError> {
        if horizon == 0 {
            return Err(GameError::invalid("horizon", "must be at least 1"));
        }
        let mut g = self.clone();
        g.horizon = horizon;
        Ok(g)
    }
}

fn check_index(what: &'static str, index: usize, size: usize) -> Result<(), GameError> {
    if index >= size {
        Err(GameError::OutOfRange { what, index, size })
    } else {
        Ok(())
    }
}

pub(crate) fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = i;
            if u < acc {
                return i;
            }
        }
    }
    last
}

pub(crate) fn sample_successor<R: Rng + ?Sized>(row: &[Successor], rng: &mut R) -> usize {
    if row.len() == 1 {
        return row[0].0;
    }
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = row[0].0;
    for &(next, p) in row {
        if p > 0.0 {
            acc += p;
            last = next;
            if u < acc {
                return next;
            }
        }
    }
    last
}

/// Result of playing a single round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageOutcome {
    pub payoffs: (f64, f64),
    pub next_state: usize,
    pub terminal: bool,
    /// The payoffs are not observable until the play ends.
    pub deferred: bool,
}

/// One elapsed round of a history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub a1: usize,
    pub a2: usize,
    pub next_state: usize,
}

/// `h^l = {s0, (a1, a2, s1), ..., (a1, a2, s^l)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct History {
    pub initial_state: usize,
    pub steps: Vec<Step>,
}

impl History {
    pub fn new(initial_state: usize) -> Self {
        History {
            initial_state,
            steps: Vec::new(),
        }
    }

    pub fn rounds_elapsed(&self) -> usize {
        self.steps.len()
    }

    pub fn current_state(&self) -> usize {
        self.steps.last().map_or(self.initial_state, |st| st.next_state)
    }

    /// State at the start of round `j` (`j <= rounds_elapsed`).
    pub fn state_at(&self, j: usize) -> usize {
        if j == 0 {
            self.initial_state
        } else {
            self.steps[j - 1].next_state
        }
    }

    pub fn push(&mut self, a1: usize, a2: usize, next_state: usize) {
        self.steps.push(Step { a1, a2, next_state });
    }

    pub fn extended(&self, a1: usize, a2: usize, next_state: usize) -> Self {
        let mut h = self.clone();
        h.push(a1, a2, next_state);
        h
    }

    /// Checks lengths and indices against `spec`.
    pub fn validate(&self, spec: &GameSpec) -> Result<(), GameError> {
        spec.check_state(self.initial_state)?;
        if self.steps.len() >= spec.horizon() {
            return Err(GameError::invalid(
                "history",
                format!(
                    "{} rounds elapsed but the horizon is {}",
                    self.steps.len(),
                    spec.horizon()
                ),
            ));
        }
        for st in &self.steps {
            spec.check_actions(st.a1, st.a2)?;
            spec.check_state(st.next_state)?;
        }
        Ok(())
    }
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.initial_state)?;
        for st in &self.steps {
            write!(f, " ({},{})->s{}", st.a1, st.a2, st.next_state)?;
        }
        Ok(())
    }
}

/// Structured game file, discriminated by `kind`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameFile {
    pub version: String,
    #[serde(flatten)]
    pub source: GameSource,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GameSource {
    Explicit(ExplicitGame),
    Exposing,
    Security(crate::envs::security::SecurityParams),
    Tagging {
        #[serde(default)]
        config: crate::envs::tagging::TaggingConfig,
    },
}

/// Explicit tables as they appear on disk.
///
/// `transition[s][a1][a2]` is a list of `[next_state, probability]` pairs and
/// `payoff[player][type][s][a1][a2]` a real number.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExplicitGame {
    #[serde(default)]
    pub name: String,
    pub n_states: usize,
    pub n_types: usize,
    pub n_actions_p1: usize,
    pub n_actions_p2: usize,
    pub horizon: usize,
    pub discount: f64,
    pub initial_state_dist: Vec<f64>,
    pub prior: Vec<f64>,
    pub transition: Vec<Vec<Vec<Vec<(usize, f64)>>>>,
    pub payoff: Vec<Vec<Vec<Vec<Vec<f64>>>>>,
    #[serde(default)]
    pub action_names_p1: Vec<String>,
    #[serde(default)]
    pub action_names_p2: Vec<String>,
    #[serde(default)]
    pub deferred_rewards: bool,
}

impl ExplicitGame {
    pub fn from_spec(spec: &GameSpec) -> Self {
        let transition = (0..spec.n_states)
            .map(|s| {
                (0..spec.n_actions_p1)
                    .map(|a1| {
                        (0..spec.n_actions_p2)
                            .map(|a2| spec.transition(s, a1, a2).to_vec())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let payoff = Player::both()
            .iter()
            .map(|&p| {
                (0..spec.n_types)
                    .map(|ty| {
                        (0..spec.n_states)
                            .map(|s| {
                                (0..spec.n_actions_p1)
                                    .map(|a1| {
                                        (0..spec.n_actions_p2)
                                            .map(|a2| spec.payoff(p, ty, s, a1, a2))
                                            .collect()
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        ExplicitGame {
            name: spec.name.clone(),
            n_states: spec.n_states,
            n_types: spec.n_types,
            n_actions_p1: spec.n_actions_p1,
            n_actions_p2: spec.n_actions_p2,
            horizon: spec.horizon,
            discount: spec.discount,
            initial_state_dist: spec.initial_state_dist.clone(),
            prior: spec.prior.clone(),
            transition,
            payoff,
            action_names_p1: spec.action_names_p1.clone(),
            action_names_p2: spec.action_names_p2.clone(),
            deferred_rewards: spec.deferred_rewards,
        }
    }

    pub fn into_spec(self) -> Result<GameSpec, GameError> {
        let mut parts = GameParts::blank(
            &self.name,
            self.n_states,
            self.n_types,
            self.n_actions_p1,
            self.n_actions_p2,
            self.horizon,
        );
        parts.discount = self.discount;
        parts.initial_state_dist = self.initial_state_dist;
        parts.prior = self.prior;
        parts.action_names_p1 = self.action_names_p1;
        parts.action_names_p2 = self.action_names_p2;
        parts.deferred_rewards = self.deferred_rewards;

        let dims = |field: &str, got: usize, want: usize| -> Result<(), GameError> {
            if got != want {
                Err(GameError::invalid(field, format!("expected {want} entries, found {got}")))
            } else {
                Ok(())
            }
        };
        dims("transition", self.transition.len(), self.n_states)?;
        for (s, by_a1) in self.transition.into_iter().enumerate() {
            dims(&format!("transition[{s}]"), by_a1.len(), self.n_actions_p1)?;
            for (a1, by_a2) in by_a1.into_iter().enumerate() {
                dims(&format!("transition[{s}][{a1}]"), by_a2.len(), self.n_actions_p2)?;
                for (a2, row) in by_a2.into_iter().enumerate() {
                    parts.set_transition(s, a1, a2, row);
                }
            }
        }
        dims("payoff", self.payoff.len(), 2)?;
        for (pi, by_type) in self.payoff.into_iter().enumerate() {
            let player = if pi == 0 { Player::One } else { Player::Two };
            dims(&format!("payoff[{pi}]"), by_type.len(), self.n_types)?;
            for (ty, by_s) in by_type.into_iter().enumerate() {
                dims(&format!("payoff[{pi}][{ty}]"), by_s.len(), self.n_states)?;
                for (s, by_a1) in by_s.into_iter().enumerate() {
                    dims(&format!("payoff[{pi}][{ty}][{s}]"), by_a1.len(), self.n_actions_p1)?;
                    for (a1, by_a2) in by_a1.into_iter().enumerate() {
                        dims(
                            &format!("payoff[{pi}][{ty}][{s}][{a1}]"),
                            by_a2.len(),
                            self.n_actions_p2,
                        )?;
                        for (a2, u) in by_a2.into_iter().enumerate() {
                            parts.set_payoff(player, ty, s, a1, a2, u);
                        }
                    }
                }
            }
        }
        GameSpec::new(parts)
    }
}

impl GameSource {
    pub fn build(self) -> Result<GameSpec, GameError> {
        match self {
            GameSource::Explicit(g) => g.into_spec(),
            GameSource::Exposing => Ok(crate::envs::exposing::exposing_game()),
            GameSource::Security(p) => crate::envs::security::generate_security_game(&p),
            GameSource::Tagging { config } => crate::envs::tagging::tagging_game(&config),
        }
    }
}

/// Parses a game file from a string.
pub fn parse_game_spec(text: &str) -> Result<GameSpec, GameError> {
    let file: GameFile =
        serde_json::from_str(text).map_err(|e| GameError::Parse(e.to_string()))?;
    if file.version != GAME_SCHEMA {
        return Err(GameError::invalid(
            "version",
            format!("expected \"{GAME_SCHEMA}\", found \"{}\"", file.version),
        ));
    }
    file.source.build()
}

/// Loads and validates a game file.
pub fn load_game_spec(path: impl AsRef<Path>) -> Result<GameSpec, GameError> {
    let text = std::fs::read_to_string(path)?;
    parse_game_spec(&text)
}

/// Serializes `spec` as an explicit `ossbg-v1` game file.
pub fn game_spec_to_json(spec: &GameSpec) -> String {
    let file = GameFile {
        version: GAME_SCHEMA.to_string(),
        source: GameSource::Explicit(ExplicitGame::from_spec(spec)),
    };
    serde_json::to_string_pretty(&file).expect("game serializes")
}

pub fn save_game_spec(spec: &GameSpec, path: impl AsRef<Path>) -> Result<(), GameError> {
    std::fs::write(path, game_spec_to_json(spec))?;
    Ok(())
}
