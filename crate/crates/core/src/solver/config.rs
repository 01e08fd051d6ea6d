use serde::{Deserialize, Serialize};

use crate::belief::{Interpolation, DEFAULT_WEIGHT_CAP};
use crate::error::SolverError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algo {
    Pg,
    Cfr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackupMode {
    /// Expectations by enumeration over `(a1, a2, s')`.
    Exact,
    /// Expectations from one-round `sub_reset` batches.
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ablation {
    None,
    /// Forward self-play without backward induction.
    BpgForward,
    /// Nearest-grid-point lookup instead of interpolation.
    NearestNeighbor,
    /// Policy gradient without the belief-gradient term.
    NoBeliefTerm,
}

/// Which policy iterate a policy-gradient learner stores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Iterate {
    Final,
    Average,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub algo: Algo,
    /// Learner iterations `T` per (round, belief point).
    pub iterations: usize,
    /// Rollouts per iteration in sampled mode.
    pub batch_size: usize,
    /// `eta_t = eta0 * t^(-1/2)`.
    pub eta0: f64,
    pub backup_mode: BackupMode,
    pub ablation: Ablation,
    pub seed: u64,
    pub weight_cap: f64,
    /// Scale of the uniform noise added to the initial logits.
    pub init_noise: f64,
    /// Iterate stored by the policy-gradient learner; regret matching always
    /// stores its time average.
    pub pg_iterate: Iterate,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            algo: Algo::Pg,
            iterations: 1000,
            batch_size: 64,
            eta0: 1.0,
            backup_mode: BackupMode::Exact,
            ablation: Ablation::None,
            seed: 0,
            weight_cap: DEFAULT_WEIGHT_CAP,
            init_noise: 0.1,
            pg_iterate: Iterate::Average,
        }
    }
}

impl LearnerConfig {
    pub fn pg(iterations: usize, seed: u64) -> Self {
        LearnerConfig {
            iterations,
            seed,
            ..LearnerConfig::default()
        }
    }

    pub fn cfr(iterations: usize, seed: u64) -> Self {
        LearnerConfig {
            algo: Algo::Cfr,
            iterations,
            seed,
            ..LearnerConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if self.iterations == 0 {
            return Err(SolverError::Config("iterations must be at least 1".into()));
        }
        if !(self.eta0 > 0.0) || !self.eta0.is_finite() {
            return Err(SolverError::Config(format!("eta0 = {} must be positive", self.eta0)));
        }
        if self.backup_mode == BackupMode::Sampled && self.batch_size == 0 {
            return Err(SolverError::Config("batch_size must be at least 1".into()));
        }
        if !(self.weight_cap > 0.0) {
            return Err(SolverError::Config("weight_cap must be positive".into()));
        }
        if !(self.init_noise >= 0.0) || !self.init_noise.is_finite() {
            return Err(SolverError::Config("init_noise must be finite and non-negative".into()));
        }
        if self.algo == Algo::Cfr && self.ablation == Ablation::NoBeliefTerm {
            return Err(SolverError::Config(
                "the no-belief-term ablation applies to policy gradient only".into(),
            ));
        }
        Ok(())
    }

    /// Interpolation used both in training and at test time.
    pub fn interpolation(&self) -> Interpolation {
        match self.ablation {
            Ablation::NearestNeighbor | Ablation::BpgForward => Interpolation::Nearest,
            _ => Interpolation::Weighted {
                cap: self.weight_cap,
            },
        }
    }

    pub fn belief_term(&self) -> bool {
        self.ablation != Ablation::NoBeliefTerm
    }

    pub fn eta(&self, t: usize) -> f64 {
        self.eta0 / (t as f64).sqrt()
    }
}
