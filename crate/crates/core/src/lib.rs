pub mod belief;
pub mod envs;
pub mod error;
pub mod eval;
pub mod game;
pub mod solver;

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
