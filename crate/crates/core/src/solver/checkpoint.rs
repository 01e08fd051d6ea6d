use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::belief::{BeliefGrid, Interpolation};
use crate::error::SolverError;
use crate::game::GameSpec;
use crate::solver::config::LearnerConfig;
use crate::solver::tables::{RoundPolicy, ValueTable};

pub const CHECKPOINT_SCHEMA: &str = "tisp-ckpt-v1";

/// One sample of a learner's progress.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub p1_objective: f64,
    pub p2_objective: f64,
    /// Largest average external regret (regret matching only).
    pub max_avg_regret: f64,
    /// Largest ratio of average regret to its bound (regret matching only).
    pub bound_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDiagnostics {
    pub round: usize,
    pub point: usize,
    pub belief: Vec<f64>,
    pub trace: Vec<TraceEntry>,
    /// Largest squared gradient norm seen by a policy-gradient learner.
    pub max_grad_sq_norm: f64,
    /// Largest observed action-value range of a regret learner.
    pub q_range: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingDiagnostics {
    pub points: Vec<PointDiagnostics>,
}

impl TrainingDiagnostics {
    pub fn max_grad_sq_norm(&self) -> f64 {
        self.points.iter().fold(0.0, |m, p| m.max(p.max_grad_sq_norm))
    }

    pub fn max_q_range(&self) -> f64 {
        self.points.iter().fold(0.0, |m, p| m.max(p.q_range))
    }

    pub fn final_entry(&self, round: usize, point: usize) -> Option<&TraceEntry> {
        self.points
            .iter()
            .find(|p| p.round == round && p.point == point)
            .and_then(|p| p.trace.last())
    }
}

/// Everything needed to replay a trained strategy at test time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub schema: String,
    pub game_name: String,
    pub game_fingerprint: String,
    pub prior: Vec<f64>,
    pub horizon: usize,
    pub n_states: usize,
    pub n_types: usize,
    pub n_actions_p1: usize,
    pub n_actions_p2: usize,
    pub grid_resolution: Option<usize>,
    pub config: LearnerConfig,
    /// One grid per round.
    pub grids: Vec<BeliefGrid>,
    /// One policy table per round.
    pub policies: Vec<RoundPolicy>,
    pub values: ValueTable,
    pub diagnostics: TrainingDiagnostics,
}

impl Checkpoint {
    pub(crate) fn assemble(
        spec: &GameSpec,
        grid_resolution: Option<usize>,
        config: &LearnerConfig,
        grids: Vec<BeliefGrid>,
        policies: Vec<RoundPolicy>,
        values: ValueTable,
        diagnostics: TrainingDiagnostics,
    ) -> Self {
        Checkpoint {
            schema: CHECKPOINT_SCHEMA.to_string(),
            game_name: spec.name.clone(),
            game_fingerprint: spec.fingerprint(),
            prior: spec.prior().to_vec(),
            horizon: spec.horizon(),
            n_states: spec.n_states(),
            n_types: spec.n_types(),
            n_actions_p1: spec.n_actions_p1(),
            n_actions_p2: spec.n_actions_p2(),
            grid_resolution,
            config: config.clone(),
            grids,
            policies,
            values,
            diagnostics,
        }
    }

    pub fn interpolation(&self) -> Interpolation {
        self.config.interpolation()
    }

    /// Fails unless the checkpoint was trained on `spec`.
    pub fn verify_game(&self, spec: &GameSpec) -> Result<(), SolverError> {
        let fp = spec.fingerprint();
        if fp != self.game_fingerprint {
            return Err(SolverError::GameMismatch {
                expected: fp,
                found: self.game_fingerprint.clone(),
            });
        }
        Ok(())
    }

    /// Shapes of grids, policies and values agree with each other.
    pub fn check_consistency(&self) -> Result<(), SolverError> {
        let bad = |m: &str| Err(SolverError::Checkpoint(m.to_string()));
        if self.schema != CHECKPOINT_SCHEMA {
            return bad(&format!("unsupported schema `{}`", self.schema));
        }
        if self.grids.len() != self.horizon || self.policies.len() != self.horizon {
            return bad("expected one grid and one policy table per round");
        }
        if self.values.rounds.len() != self.horizon + 1 {
            return bad("value table must cover rounds 0..=horizon");
        }
        for (l, (g, p)) in self.grids.iter().zip(&self.policies).enumerate() {
            if g.n_types() != self.n_types || p.n_points != g.len() {
                return bad(&format!("round {l}: grid and policy disagree"));
            }
            let dims = (p.n_states, p.n_types, p.n_actions_p1, p.n_actions_p2);
            if dims != (self.n_states, self.n_types, self.n_actions_p1, self.n_actions_p2)
                || p.p1.len() != p.n_points * p.point_len_p1()
                || p.p2.len() != p.n_points * p.point_len_p2()
            {
                return bad(&format!("round {l}: policy shape mismatch"));
            }
            let v = &self.values.rounds[l];
            if v.n_points != g.len()
                || v.n_states != self.n_states
                || v.n_types != self.n_types
                || v.data.len() != 2 * v.n_points * v.n_states * v.n_types
            {
                return bad(&format!("round {l}: value shape mismatch"));
            }
        }
        if !self.values.rounds[self.horizon].is_zero() {
            return bad("round-L values must be zero");
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("checkpoint serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SolverError> {
        let ckpt: Checkpoint =
            serde_json::from_str(text).map_err(|e| SolverError::Checkpoint(e.to_string()))?;
        ckpt.check_consistency()?;
        Ok(ckpt)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SolverError> {
        std::fs::write(path, self.to_json()).map_err(|e| SolverError::Checkpoint(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SolverError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| SolverError::Checkpoint(e.to_string()))?;
        Checkpoint::from_json(&text)
    }
}
