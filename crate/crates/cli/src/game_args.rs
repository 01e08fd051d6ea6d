use std::path::PathBuf;

use clap::{Args, ValueEnum};

use tisp::envs::security::{generate_security_game, PayoffMode, SecurityParams};
use tisp::envs::tagging::{tagging_game, TaggingConfig};
use tisp::envs::exposing::exposing_game;
use tisp::error::GameError;
use tisp::game::{load_game_spec, GameSpec};

use crate::error::{CliError, CliResult, Code};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PayoffArg {
    ZeroSum,
    GeneralSum,
}

/// At most one of a built-in game name or a game file.
#[derive(Args, Debug, Clone)]
#[group(required = false, multiple = false, id = "source")]
pub struct GameSource {
    /// Built-in game: security, exposing or tagging.
    #[arg(long)]
    pub game: Option<String>,
    /// Game file in the `ossbg-v1` format.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct GameArgs {
    #[command(flatten)]
    pub source: GameSource,
    /// Security: number of targets.
    #[arg(long, default_value_t = 2)]
    pub targets: usize,
    /// Security: number of attacker types.
    #[arg(long, default_value_t = 2)]
    pub types: usize,
    /// Rounds; defaults to 10 for security and the episode length for tagging.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Security: payoff structure.
    #[arg(long, value_enum, default_value_t = PayoffArg::ZeroSum)]
    pub payoff_mode: PayoffArg,
    /// Security: seed of the payoff draw.
    #[arg(long, default_value_t = 0)]
    pub game_seed: u64,
    /// Tagging: JSON file overriding the default configuration.
    #[arg(long)]
    pub tagging_config: Option<PathBuf>,
}

pub const SECURITY_DEFAULT_HORIZON: usize = 10;

impl GameArgs {
    pub fn tagging_config(&self) -> CliResult<TaggingConfig> {
        let mut cfg = match &self.tagging_config {
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::new(Code::GameInvalid, format!("tagging config: {e}")))?
            }
            None => TaggingConfig::default(),
        };
        if let Some(h) = self.horizon {
            cfg.episode_length = h;
        }
        Ok(cfg)
    }

    pub fn build(&self) -> CliResult<GameSpec> {
        if let Some(path) = &self.source.spec {
            return load_game_spec(path).map_err(|e| match e {
                GameError::Io(io) => CliError::new(Code::GameNotFound, format!("{}: {io}", path.display())),
                other => other.into(),
            });
        }
        let Some(name) = self.source.game.as_deref() else {
            return Err(CliError::new(Code::ConfigInvalid, "one of --game or --spec is required"));
        };
        let spec = match name {
            "exposing" => {
                let g = exposing_game();
                match self.horizon {
                    Some(h) if h != g.horizon() => g.with_horizon(h)?,
                    _ => g,
                }
            }
            "security" => generate_security_game(&SecurityParams {
                n_targets: self.targets,
                n_types: self.types,
                horizon: self.horizon.unwrap_or(SECURITY_DEFAULT_HORIZON),
                payoff_mode: match self.payoff_mode {
                    PayoffArg::ZeroSum => PayoffMode::ZeroSum,
                    PayoffArg::GeneralSum => PayoffMode::GeneralSum,
                },
                seed: self.game_seed,
            })?,
            "tagging" => tagging_game(&self.tagging_config()?)?,
            other => return Err(GameError::UnknownGame(other.to_string()).into()),
        };
        Ok(spec)
    }
}
