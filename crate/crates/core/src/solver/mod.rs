//! Training engine: backward induction over rounds with a policy-gradient
//! or regret-matching learner at every belief point.

pub mod backup;
pub mod cfr;
pub mod checkpoint;
pub mod config;
pub mod pg;
pub mod tables;
pub mod train;

pub use backup::{point_gradient, point_objective, softmax, stage_q, RoundContext};
pub use cfr::{cfr_step, regret_matching, CfrPoint, CfrStepLog};
pub use checkpoint::{Checkpoint, PointDiagnostics, TraceEntry, TrainingDiagnostics, CHECKPOINT_SCHEMA};
pub use config::{Ablation, Algo, BackupMode, Iterate, LearnerConfig};
pub use pg::{pg_step, PgPoint, PgStepStats};
pub use tables::{RoundPolicy, RoundValues, ValueTable};
pub use train::{
    evaluate_policies, evaluate_state, point_rng, train, train_forward_bpg, train_on_grid,
    train_round, train_with_progress, RoundOutput,
};
