use serde::{Deserialize, Serialize};

use crate::belief::InterpWeights;
use crate::error::SolverError;
use crate::game::{GameSpec, Player};

/// Action distributions of one round at every grid point.
///
/// `p1` is indexed `[k][s][type][a1]` and `p2` `[k][s][a2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundPolicy {
    pub n_points: usize,
    pub n_states: usize,
    pub n_types: usize,
    pub n_actions_p1: usize,
    pub n_actions_p2: usize,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
}

impl RoundPolicy {
    pub fn uniform(spec: &GameSpec, n_points: usize) -> Self {
        let (s, t, a1, a2) = dims(spec);
        RoundPolicy {
            n_points,
            n_states: s,
            n_types: t,
            n_actions_p1: a1,
            n_actions_p2: a2,
            p1: vec![1.0 / a1 as f64; n_points * s * t * a1],
            p2: vec![1.0 / a2 as f64; n_points * s * a2],
        }
    }

    pub fn point_len_p1(&self) -> usize {
        self.n_states * self.n_types * self.n_actions_p1
    }

    pub fn point_len_p2(&self) -> usize {
        self.n_states * self.n_actions_p2
    }

    #[inline]
    pub fn p1_row(&self, k: usize, s: usize, ty: usize) -> &[f64] {
        let i = ((k * self.n_states + s) * self.n_types + ty) * self.n_actions_p1;
        &self.p1[i..i + self.n_actions_p1]
    }

    #[inline]
    pub fn p2_row(&self, k: usize, s: usize) -> &[f64] {
        let i = (k * self.n_states + s) * self.n_actions_p2;
        &self.p2[i..i + self.n_actions_p2]
    }

    pub fn p1_row_mut(&mut self, k: usize, s: usize, ty: usize) -> &mut [f64] {
        let i = ((k * self.n_states + s) * self.n_types + ty) * self.n_actions_p1;
        &mut self.p1[i..i + self.n_actions_p1]
    }

    pub fn p2_row_mut(&mut self, k: usize, s: usize) -> &mut [f64] {
        let i = (k * self.n_states + s) * self.n_actions_p2;
        &mut self.p2[i..i + self.n_actions_p2]
    }

    /// Interpolated player-1 rows `[type][a1]` at state `s`.
    pub fn p1_at(&self, w: &InterpWeights, s: usize) -> Vec<Vec<f64>> {
        (0..self.n_types)
            .map(|ty| mix_rows(w, self.n_actions_p1, |k| self.p1_row(k, s, ty)))
            .collect()
    }

    /// Interpolated player-2 row at state `s`.
    pub fn p2_at(&self, w: &InterpWeights, s: usize) -> Vec<f64> {
        mix_rows(w, self.n_actions_p2, |k| self.p2_row(k, s))
    }

    pub fn check_shape(&self, spec: &GameSpec) -> Result<(), SolverError> {
        let (s, t, a1, a2) = dims(spec);
        if (self.n_states, self.n_types, self.n_actions_p1, self.n_actions_p2) != (s, t, a1, a2)
            || self.p1.len() != self.n_points * s * t * a1
            || self.p2.len() != self.n_points * s * a2
        {
            return Err(SolverError::Shape("round policy does not match the game".into()));
        }
        Ok(())
    }
}

fn mix_rows<'a>(w: &InterpWeights, n: usize, row: impl Fn(usize) -> &'a [f64]) -> Vec<f64> {
    match w.exact_point() {
        Some(k) => row(k).to_vec(),
        None => {
            let mut out = vec![0.0; n];
            for (k, wk) in w.iter() {
                for (o, p) in out.iter_mut().zip(row(k)) {
                    *o += wk * p;
                }
            }
            out
        }
    }
}

fn dims(spec: &GameSpec) -> (usize, usize, usize, usize) {
    (spec.n_states(), spec.n_types(), spec.n_actions_p1(), spec.n_actions_p2())
}

/// Values `V_i^type(b_k, s)` of one round, indexed `[player][k][s][type]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundValues {
    pub round: usize,
    pub n_points: usize,
    pub n_states: usize,
    pub n_types: usize,
    pub data: Vec<f64>,
}

impl RoundValues {
    pub fn zeros(round: usize, n_points: usize, n_states: usize, n_types: usize) -> Self {
        RoundValues {
            round,
            n_points,
            n_states,
            n_types,
            data: vec![0.0; 2 * n_points * n_states * n_types],
        }
    }

    #[inline]
    fn idx(&self, player: Player, k: usize, s: usize, ty: usize) -> usize {
        ((player.index() * self.n_points + k) * self.n_states + s) * self.n_types + ty
    }

    #[inline]
    pub fn get(&self, player: Player, k: usize, s: usize, ty: usize) -> f64 {
        self.data[self.idx(player, k, s, ty)]
    }

    pub fn set(&mut self, player: Player, k: usize, s: usize, ty: usize, v: f64) {
        let i = self.idx(player, k, s, ty);
        self.data[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == 0.0)
    }
}

/// Values of every round `0..=L`; round `L` is identically zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueTable {
    pub rounds: Vec<RoundValues>,
}

impl ValueTable {
    pub fn zeros(horizon: usize, n_points: usize, n_states: usize, n_types: usize) -> Self {
        ValueTable {
            rounds: (0..=horizon)
                .map(|l| RoundValues::zeros(l, n_points, n_states, n_types))
                .collect(),
        }
    }

    pub fn horizon(&self) -> usize {
        self.rounds.len() - 1
    }

    pub fn round(&self, l: usize) -> &RoundValues {
        &self.rounds[l]
    }

    pub fn get(&self, player: Player, l: usize, k: usize, s: usize, ty: usize) -> f64 {
        self.rounds[l].get(player, k, s, ty)
    }
}
