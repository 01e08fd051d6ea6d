use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::Serialize;

use tisp::belief::Belief;
use tisp::envs::tagging::{Cell, TaggingLayout};
use tisp::eval::{
    bound_inputs, checkpoint_bound, epsilon_with_budget, induced_game_eval, policy_at,
    test_time_policy, EpsilonMode, EpsilonReport, DEFAULT_HISTORY_BUDGET,
};
use tisp::game::{save_game_spec, GameSpec, History, Player};
use tisp::solver::{
    train_with_progress, Ablation, Algo, BackupMode, Checkpoint, Iterate, LearnerConfig,
};

use crate::error::{CliError, CliResult, Code};
use crate::game_args::GameArgs;

pub const MANIFEST_SCHEMA: &str = "tisp-manifest-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Pg,
    Cfr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackupArg {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AblationArg {
    None,
    BpgForward,
    NearestNeighbor,
    NoBeliefTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IterateArg {
    Final,
    Average,
}

#[derive(Args, Debug, Clone)]
pub struct LearnerArgs {
    #[arg(long, value_enum, default_value_t = AlgoArg::Pg)]
    pub algo: AlgoArg,
    /// Learner iterations per belief point.
    #[arg(long, default_value_t = 1000)]
    pub iters: usize,
    /// Rollouts per iteration in sampled mode.
    #[arg(long, default_value_t = 64)]
    pub batch: usize,
    /// Step size scale: eta_t = eta0 / sqrt(t).
    #[arg(long, default_value_t = 1.0)]
    pub eta0: f64,
    #[arg(long, value_enum, default_value_t = BackupArg::Exact)]
    pub backup: BackupArg,
    #[arg(long, value_enum, default_value_t = AblationArg::None)]
    pub ablation: AblationArg,
    /// Stored policy-gradient iterate.
    #[arg(long, value_enum)]
    pub iterate: Option<IterateArg>,
    /// Scale of the uniform noise on initial logits.
    #[arg(long)]
    pub init_noise: Option<f64>,
    /// Floor on squared distances in interpolation weights.
    #[arg(long)]
    pub weight_cap: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl LearnerArgs {
    pub fn config(&self) -> LearnerConfig {
        let d = LearnerConfig::default();
        LearnerConfig {
            algo: match self.algo {
                AlgoArg::Pg => Algo::Pg,
                AlgoArg::Cfr => Algo::Cfr,
            },
            iterations: self.iters,
            batch_size: self.batch,
            eta0: self.eta0,
            backup_mode: match self.backup {
                BackupArg::Exact => BackupMode::Exact,
                BackupArg::Sampled => BackupMode::Sampled,
            },
            ablation: match self.ablation {
                AblationArg::None => Ablation::None,
                AblationArg::BpgForward => Ablation::BpgForward,
                AblationArg::NearestNeighbor => Ablation::NearestNeighbor,
                AblationArg::NoBeliefTerm => Ablation::NoBeliefTerm,
            },
            seed: self.seed,
            weight_cap: self.weight_cap.unwrap_or(d.weight_cap),
            init_noise: self.init_noise.unwrap_or(d.init_noise),
            pg_iterate: match self.iterate {
                Some(IterateArg::Final) => Iterate::Final,
                Some(IterateArg::Average) => Iterate::Average,
                None => d.pg_iterate,
            },
        }
    }
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    pub learner: LearnerArgs,
    /// Belief-grid resolution (points per unit along each simplex edge).
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalMode {
    Pbe,
    Ne,
    Both,
    Induced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[arg(long)]
    pub ckpt: PathBuf,
    #[arg(long, value_enum, default_value_t = EvalMode::Both)]
    pub mode: EvalMode,
    /// Maximum number of enumerated histories.
    #[arg(long, default_value_t = DEFAULT_HISTORY_BUDGET)]
    pub budget: u128,
    /// Induced mode: number of sampled games.
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Induced mode: rounds elapsed at the sampled roots.
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// Induced mode: exploiter training episodes per game and player.
    #[arg(long, default_value_t = 2000)]
    pub exploiter_budget: usize,
    /// Induced mode: sampling seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for reports; console only when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Format::Json, Format::Csv])]
    pub format: Vec<Format>,
}

#[derive(Args, Debug)]
pub struct InspectArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[arg(long)]
    pub ckpt: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub round: usize,
    /// Comma-separated belief; defaults to the prior.
    #[arg(long)]
    pub belief: Option<String>,
    /// State index; defaults to the first initial state.
    #[arg(long)]
    pub state: Option<usize>,
    /// Tagging: start state with player 2 at `row,col`.
    #[arg(long, conflicts_with = "state")]
    pub p2_cell: Option<String>,
    /// History `s0 (a1,a2)->s1 ...`; replays the test-time belief and
    /// overrides round, belief and state.
    #[arg(long, conflicts_with_all = ["round", "belief", "state", "p2_cell"])]
    pub history: Option<String>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// Read the bound inputs from a checkpoint instead of the flags below.
    #[arg(long)]
    pub ckpt: Option<PathBuf>,
    #[arg(long, required_unless_present = "ckpt")]
    pub rounds: Option<usize>,
    #[arg(long, required_unless_present = "ckpt")]
    pub density: Option<f64>,
    #[arg(long, required_unless_present = "ckpt")]
    pub iters: Option<usize>,
    #[arg(long, required_unless_present = "ckpt")]
    pub payoff_range: Option<f64>,
    #[arg(long, required_unless_present = "ckpt")]
    pub actions: Option<usize>,
    #[arg(long, value_enum, default_value_t = AlgoArg::Cfr)]
    pub algo: AlgoArg,
    /// Policy gradient: bound on the gradient norm; `c` is its square.
    #[arg(long, default_value_t = 0.0)]
    pub grad_norm: f64,
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema: &'a str,
    tool_version: &'a str,
    library_version: &'a str,
    command: &'a str,
    argv: &'a [String],
    threads: Option<usize>,
    game_name: &'a str,
    game_fingerprint: String,
    game_file: Option<String>,
    grid_resolution: Option<usize>,
    config: &'a LearnerConfig,
    outputs: Vec<String>,
}

fn write_file(dir: &Path, name: &str, contents: &str, outputs: &mut Vec<String>) -> CliResult<()> {
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| CliError::new(Code::IoError, format!("{}: {e}", path.display())))?;
    outputs.push(name.to_string());
    Ok(())
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::new(Code::IoError, format!("{}: {e}", dir.display())))
}

fn load_checkpoint(path: &Path, spec: &GameSpec) -> CliResult<Checkpoint> {
    let ckpt = Checkpoint::load(path)
        .map_err(|e| CliError::new(Code::CkptInvalid, format!("{}: {e}", path.display())))?;
    ckpt.verify_game(spec)?;
    Ok(ckpt)
}

fn fmt_probs(p: &[f64]) -> String {
    p.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ")
}

/// First initial state with positive probability.
fn first_state(spec: &GameSpec) -> usize {
    spec.initial_state_dist().iter().position(|&p| p > 0.0).unwrap_or(0)
}

/// Interpolated value of `player`, type `ty`, at `(round, b, s)`.
fn value_at(ckpt: &Checkpoint, player: Player, round: usize, b: &[f64], s: usize, ty: usize) -> f64 {
    ckpt.grids[round]
        .weights(b, ckpt.interpolation())
        .value(|k| ckpt.values.get(player, round, k, s, ty))
}

/// Per-type action probabilities and values at a query point.
pub fn policy_dump(spec: &GameSpec, ckpt: &Checkpoint, round: usize, b: &[f64], s: usize) -> String {
    let (p1, p2) = policy_at(ckpt, round, b, s);
    let mut out = format!("round {round}, belief ({}), state {s}\n", fmt_probs(b));
    let name_w = 16;
    let _ = write!(out, "{:<10}", "player 1");
    for a in 0..spec.n_actions_p1() {
        let _ = write!(out, "{:>name_w$}", spec.action_name(Player::One, a));
    }
    let _ = writeln!(out, "{:>12}{:>12}", "V1", "V2");
    for ty in 0..spec.n_types() {
        let _ = write!(out, "{:<10}", format!("type {}", ty + 1));
        for a in 0..spec.n_actions_p1() {
            let _ = write!(out, "{:>name_w$.4}", p1[ty][a]);
        }
        let _ = writeln!(
            out,
            "{:>12.4}{:>12.4}",
            value_at(ckpt, Player::One, round, b, s, ty),
            value_at(ckpt, Player::Two, round, b, s, ty)
        );
    }
    let _ = write!(out, "{:<10}", "player 2");
    for a in 0..spec.n_actions_p2() {
        let _ = write!(out, "{:>name_w$}", spec.action_name(Player::Two, a));
    }
    out.push('\n');
    let _ = write!(out, "{:<10}", "");
    for a in 0..spec.n_actions_p2() {
        let _ = write!(out, "{:>name_w$.4}", p2[a]);
    }
    out.push('\n');
    out
}

pub fn run_train(args: &TrainArgs, argv: &[String], threads: Option<usize>) -> CliResult<()> {
    let spec = args.game.build()?;
    let config = args.learner.config();
    config.validate()?;
    ensure_dir(&args.out)?;
    println!(
        "training {} ({} rounds, {} states, {} types) with {:?}, grid {}, {} iterations, seed {}",
        spec.name,
        spec.horizon(),
        spec.n_states(),
        spec.n_types(),
        config.algo,
        args.grid,
        config.iterations,
        config.seed
    );
    let start = Instant::now();
    let ckpt = train_with_progress(&spec, args.grid, &config, &mut |round, dt| {
        println!("round {round}: {:.3} s", dt.as_secs_f64());
    })?;
    println!("total: {:.3} s", start.elapsed().as_secs_f64());

    for l in 0..ckpt.horizon {
        let points: Vec<_> = ckpt.diagnostics.points.iter().filter(|p| p.round == l).collect();
        if points.is_empty() {
            continue;
        }
        let finals: Vec<_> = points.iter().filter_map(|p| p.trace.last()).collect();
        let n = finals.len().max(1) as f64;
        let j1 = finals.iter().map(|e| e.p1_objective).sum::<f64>() / n;
        let j2 = finals.iter().map(|e| e.p2_objective).sum::<f64>() / n;
        let regret = finals.iter().fold(0.0f64, |m, e| m.max(e.max_avg_regret));
        let grad = points.iter().fold(0.0f64, |m, p| m.max(p.max_grad_sq_norm));
        println!(
            "round {l}: {} points, mean final objective p1 {j1:.4} p2 {j2:.4}, max avg regret {regret:.4}, max grad sq norm {grad:.4}",
            points.len()
        );
    }

    let mut outputs = Vec::new();
    write_file(&args.out, "checkpoint.json", &ckpt.to_json(), &mut outputs)?;
    let diag = serde_json::to_string_pretty(&ckpt.diagnostics).expect("diagnostics serialize");
    write_file(&args.out, "diagnostics.json", &diag, &mut outputs)?;
    let game_path = args.out.join("game.json");
    save_game_spec(&spec, &game_path)?;
    outputs.push("game.json".into());
    let manifest = Manifest {
        schema: MANIFEST_SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        library_version: tisp::VERSION,
        command: "train",
        argv,
        threads,
        game_name: &spec.name,
        game_fingerprint: spec.fingerprint(),
        game_file: Some("game.json".into()),
        grid_resolution: Some(args.grid),
        config: &config,
        outputs: outputs.clone(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&args.out, "manifest.json", &text, &mut Vec::new())?;
    println!("wrote {}", args.out.join("checkpoint.json").display());
    Ok(())
}

fn print_report(name: &str, r: &EpsilonReport) {
    let worst = r
        .worst_history
        .as_ref()
        .map(|h| format!("player {} at {h}", r.worst_player))
        .unwrap_or_else(|| "none".into());
    let bound = r.bound.as_ref().map_or(f64::NAN, |b| b.value);
    println!(
        "{name:<12} epsilon = {:.6}   bound = {:.6}   worst: {worst}   ({} histories)",
        r.epsilon, bound, r.audited_histories
    );
}

pub fn run_eval(args: &EvalArgs, argv: &[String], threads: Option<usize>) -> CliResult<()> {
    let spec = args.game.build()?;
    let ckpt = load_checkpoint(&args.ckpt, &spec)?;
    let mut files: Vec<(String, String)> = Vec::new();
    let json = args.format.contains(&Format::Json);
    let csv = args.format.contains(&Format::Csv);

    if args.mode == EvalMode::Induced {
        let report = induced_game_eval(&spec, &ckpt, args.n, args.depth, args.exploiter_budget, args.seed)?;
        let names: Vec<String> = if spec.name.starts_with("tagging") {
            vec!["ally".into(), "enemy".into()]
        } else {
            (0..spec.n_types()).map(|t| format!("type {}", t + 1)).collect()
        };
        println!(
            "induced games: {} at depth {}, {} exploiter episodes",
            report.n_games, report.depth, report.exploiter_budget
        );
        print!("{}", report.table(&names));
        if json {
            files.push(("induced.json".into(), report.to_json()));
        }
        if csv {
            files.push(("induced.csv".into(), report.to_csv()));
        }
    } else {
        let modes: &[(EpsilonMode, &str)] = match args.mode {
            EvalMode::Pbe => &[(EpsilonMode::Pbe, "pbe")],
            EvalMode::Ne => &[(EpsilonMode::Ne, "ne")],
            _ => &[(EpsilonMode::Pbe, "pbe"), (EpsilonMode::Ne, "ne")],
        };
        for &(mode, tag) in modes {
            let r = epsilon_with_budget(&spec, &ckpt, mode, args.budget)?;
            print_report(&format!("epsilon_{tag}"), &r);
            if json {
                files.push((format!("report_{tag}.json"), r.to_json()));
            }
            if csv {
                files.push((format!("report_{tag}.csv"), r.to_csv()));
            }
        }
        let s0 = first_state(&spec);
        println!("first-round policy:");
        print!("{}", policy_dump(&spec, &ckpt, 0, spec.prior(), s0));
    }

    if let Some(dir) = &args.out {
        ensure_dir(dir)?;
        let mut outputs = Vec::new();
        for (name, text) in &files {
            write_file(dir, name, text, &mut outputs)?;
        }
        let manifest = Manifest {
            schema: MANIFEST_SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION"),
            library_version: tisp::VERSION,
            command: "eval",
            argv,
            threads,
            game_name: &spec.name,
            game_fingerprint: spec.fingerprint(),
            game_file: args.game.source.spec.as_ref().map(|p| p.display().to_string()),
            grid_resolution: ckpt.grid_resolution,
            config: &ckpt.config,
            outputs,
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        write_file(dir, "manifest.json", &text, &mut Vec::new())?;
    }
    Ok(())
}

fn bad_query(msg: impl Into<String>) -> CliError {
    CliError::new(Code::BadQuery, msg)
}

/// Parses `s0 (a1,a2)->s1 (a1,a2)->s2 ...`, the format histories print in.
pub fn parse_history(text: &str) -> CliResult<History> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let state = |tok: &str| -> CliResult<usize> {
        tok.strip_prefix('s')
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| bad_query(format!("bad state `{tok}` in history `{text}`")))
    };
    let mut parts = compact.split('(');
    let first = parts.next().unwrap_or_default();
    let mut h = History::new(state(first)?);
    for step in parts {
        let (actions, next) = step
            .split_once(")->")
            .ok_or_else(|| bad_query(format!("bad step `({step}` in history `{text}`")))?;
        let (a1, a2) = actions
            .split_once(',')
            .and_then(|(x, y)| Some((x.parse().ok()?, y.parse().ok()?)))
            .ok_or_else(|| bad_query(format!("bad actions `({actions})` in history `{text}`")))?;
        h.push(a1, a2, state(next)?);
    }
    Ok(h)
}

fn parse_belief(text: &str, n_types: usize) -> CliResult<Vec<f64>> {
    let probs: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad_query(format!("belief `{text}` is not a comma-separated list of numbers")))?;
    if probs.len() != n_types {
        return Err(bad_query(format!("belief has {} entries, the game has {n_types} types", probs.len())));
    }
    Belief::new(probs.clone()).map_err(|e| bad_query(e.to_string()))?;
    Ok(probs)
}

pub fn run_inspect(args: &InspectArgs) -> CliResult<()> {
    let spec = args.game.build()?;
    let ckpt = load_checkpoint(&args.ckpt, &spec)?;
    if let Some(text) = &args.history {
        let h = parse_history(text)?;
        h.validate(&spec).map_err(|e| bad_query(e.to_string()))?;
        let (_, _, state) = test_time_policy(&ckpt, &h)?;
        println!("history {h}");
        if state.fallback_used {
            println!("an observed action had zero probability under every type; the belief fell back to uniform");
        }
        print!(
            "{}",
            policy_dump(&spec, &ckpt, h.rounds_elapsed(), state.belief.probs(), h.current_state())
        );
        return Ok(());
    }
    if args.round >= spec.horizon() {
        return Err(bad_query(format!("round {} is not below the horizon {}", args.round, spec.horizon())));
    }
    let b = match &args.belief {
        Some(t) => parse_belief(t, spec.n_types())?,
        None => spec.prior().to_vec(),
    };
    let s = match (&args.state, &args.p2_cell) {
        (Some(s), _) => {
            spec.check_state(*s).map_err(|e| bad_query(e.to_string()))?;
            *s
        }
        (None, Some(cell)) => {
            if args.game.source.game.as_deref() != Some("tagging") {
                return Err(bad_query("--p2-cell applies to the tagging game only"));
            }
            let (r, c) = cell
                .split_once(',')
                .and_then(|(r, c)| Some((r.trim().parse().ok()?, c.trim().parse().ok()?)))
                .ok_or_else(|| bad_query(format!("cell `{cell}` is not `row,col`")))?;
            let layout = TaggingLayout::new(&args.game.tagging_config()?)?;
            layout
                .start_state(Cell { row: r, col: c })
                .ok_or_else(|| bad_query(format!("({r},{c}) is not a valid player-2 start cell")))?
        }
        (None, None) => first_state(&spec),
    };
    print!("{}", policy_dump(&spec, &ckpt, args.round, &b, s));
    Ok(())
}

pub fn run_bound(args: &BoundArgs) -> CliResult<()> {
    let inputs = match &args.ckpt {
        Some(path) => {
            let spec = args.game.build()?;
            let ckpt = load_checkpoint(path, &spec)?;
            checkpoint_bound(&spec, &ckpt)
        }
        None => {
            let (rounds, density, iters, range, actions) = (
                args.rounds.unwrap_or_default(),
                args.density.unwrap_or_default(),
                args.iters.unwrap_or_default(),
                args.payoff_range.unwrap_or_default(),
                args.actions.unwrap_or_default(),
            );
            if rounds == 0 || iters == 0 || actions == 0 || !(density >= 0.0) || !(range >= 0.0) {
                return Err(CliError::new(
                    Code::ConfigInvalid,
                    "rounds, iters and actions must be positive; density and payoff range non-negative",
                ));
            }
            let algo = match args.algo {
                AlgoArg::Pg => Algo::Pg,
                AlgoArg::Cfr => Algo::Cfr,
            };
            bound_inputs(rounds, density, iters, range, actions, algo, args.grad_norm)
        }
    };
    println!(
        "L = {}, d = {}, T = {}, payoff range = {}, U = {}, c = {}",
        inputs.rounds,
        inputs.density,
        inputs.iterations,
        inputs.payoff_range,
        inputs.rounds as f64 * inputs.payoff_range,
        inputs.c
    );
    println!("bound = {:.6}", inputs.value);
    Ok(())
}
