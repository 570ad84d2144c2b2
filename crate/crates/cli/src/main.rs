//! `heatplan` command line: simulate one episode, train a policy, run a
//! parameter sweep, or plot results.
//!
//! Exit codes: 0 success, 1 runtime fault, 2 configuration error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use heatplan_core::control::{just_in_time_schedule, run_controller, BangBang};
use heatplan_core::mcts::run_mcts_episode_traced;
use heatplan_core::plot::emit_scatter;
use heatplan_core::ppo::{curve_to_csv, train, UniformSpecSampler};
use heatplan_core::sweep::ControllerKind;
use heatplan_core::{
    load_policy, run_schedule, save_policy, EpisodeResult, EpisodeSpec, HeatplanError, MctsConfig,
    PpoConfig, RewardParams, SweepAxis, SweepRow, SweepSpec,
};

#[derive(Parser)]
#[command(
    name = "heatplan",
    version,
    about = "Deadline-aware water heater control benchmark"
)]
struct Cli {
    /// Flat key=value config file; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single episode under one controller and write its trajectory CSV.
    Simulate(SimulateArgs),
    /// Train a policy and write the policy file plus learning curve CSV.
    Train(TrainArgs),
    /// Evaluate controllers over a one-dimensional grid, writing a results CSV.
    Sweep(SweepArgs),
    /// Render a results CSV to an SVG chart (with a data sidecar CSV).
    Plot(PlotArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Initial water temperature, degC.
    #[arg(long)]
    t0: Option<f64>,
    /// Target temperature at the deadline, degC.
    #[arg(long)]
    target: Option<f64>,
    /// Episode length in control steps.
    #[arg(long)]
    deadline: Option<usize>,
    /// bangbang | mcts | ppo | oracle
    #[arg(long)]
    controller: Option<String>,
    /// Policy file (required when controller=ppo).
    #[arg(long)]
    policy: Option<PathBuf>,
    /// MCTS simulations per decision.
    #[arg(long)]
    sims: Option<usize>,
    /// RNG seed (MCTS); falls back to HEATPLAN_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Trajectory CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the MCTS per-decision search trace as JSON lines here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// Total environment steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Training RNG seed; falls back to HEATPLAN_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Policy output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Learning-curve CSV path (default: policy path with .csv extension).
    #[arg(long)]
    curve: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Axis to vary: initial_temp | deadline | target_temp
    #[arg(long)]
    vary: Option<String>,
    /// Comma-separated controller list.
    #[arg(long)]
    controllers: Option<String>,
    /// Results CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Policy file (required when controllers include ppo).
    #[arg(long)]
    policy: Option<PathBuf>,
    /// MCTS simulations per decision.
    #[arg(long)]
    sims: Option<usize>,
    /// Comma-separated seed list for stochastic controllers.
    #[arg(long)]
    seeds: Option<String>,
    /// Worker cap for parallel grid evaluation.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct PlotArgs {
    /// Results CSV produced by `sweep`.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Chart kind; only scatter_by_axis is defined.
    #[arg(long)]
    kind: Option<String>,
    /// SVG output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Axis for the x coordinate; inferred from the CSV when omitted.
    #[arg(long)]
    axis: Option<String>,
}

/// Errors split by exit code: config problems exit 2, runtime faults exit 1.
enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Runtime(m) => m,
        }
    }
}

/// Validation-flavored core errors are config errors; the rest are faults.
fn classify(err: HeatplanError) -> CliError {
    match err {
        HeatplanError::InvalidParams(_)
        | HeatplanError::InvalidSpec(_)
        | HeatplanError::InvalidReward(_)
        | HeatplanError::SweepConfig(_)
        | HeatplanError::PolicyFormat(_) => CliError::Config(err.to_string()),
        other => CliError::Runtime(other.to_string()),
    }
}

fn io_fault(context: &str, err: std::io::Error) -> CliError {
    CliError::Runtime(format!("{context}: {err}"))
}

/// Flat key=value config file: one pair per line, `#` starts a comment.
fn load_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "{}:{}: expected key=value, got {raw:?}",
                path.display(),
                lineno + 1
            ))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Resolved option: command-line flag, then config file, then default.
fn resolve<T: std::str::FromStr>(
    flag: Option<T>,
    file: &BTreeMap<String, String>,
    key: &str,
    default: T,
) -> Result<T, CliError> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match file.get(key) {
        Some(raw) => raw
            .parse()
            .map_err(|_| CliError::Config(format!("config key {key}: cannot parse {raw:?}"))),
        None => Ok(default),
    }
}

fn resolve_opt<T: std::str::FromStr>(
    flag: Option<T>,
    file: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        Some(raw) => raw
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("config key {key}: cannot parse {raw:?}"))),
        None => Ok(None),
    }
}

/// Seed precedence: flag, config file, HEATPLAN_SEED env var, 0.
fn resolve_seed(flag: Option<u64>, file: &BTreeMap<String, String>) -> Result<u64, CliError> {
    if let Some(s) = resolve_opt(flag, file, "seed")? {
        return Ok(s);
    }
    match std::env::var("HEATPLAN_SEED") {
        Ok(raw) => raw
            .parse()
            .map_err(|_| CliError::Config(format!("HEATPLAN_SEED: cannot parse {raw:?}"))),
        Err(_) => Ok(0),
    }
}

/// Echo the fully resolved configuration to stderr for provenance.
fn echo_config(command: &str, pairs: &[(&str, String)]) {
    let mut line = format!("# resolved-config command={command}");
    for (k, v) in pairs {
        let _ = write!(line, " {k}={v}");
    }
    eprintln!("{line}");
}

fn parse_controller(name: &str) -> Result<ControllerKind, CliError> {
    name.parse::<ControllerKind>().map_err(classify)
}

fn cmd_simulate(args: SimulateArgs, file: &BTreeMap<String, String>) -> Result<(), CliError> {
    let t0 = resolve(args.t0, file, "t0", 20.0)?;
    let target = resolve(args.target, file, "target", 60.0)?;
    let deadline = resolve(args.deadline, file, "deadline", 60)?;
    let controller = resolve(args.controller, file, "controller", "bangbang".to_string())?;
    let sims = resolve(args.sims, file, "sims", MctsConfig::default().n_simulations)?;
    let seed = resolve_seed(args.seed, file)?;
    let out = resolve(args.out, file, "out", PathBuf::from("trajectory.csv"))?;
    let policy_path = resolve_opt(args.policy, file, "policy")?;
    let trace_path = resolve_opt(args.trace, file, "trace")?;

    let kind = parse_controller(&controller)?;
    echo_config(
        "simulate",
        &[
            ("t0", t0.to_string()),
            ("target", target.to_string()),
            ("deadline", deadline.to_string()),
            ("controller", kind.name().to_string()),
            ("sims", sims.to_string()),
            ("seed", seed.to_string()),
            ("out", out.display().to_string()),
            (
                "policy",
                policy_path
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default(),
            ),
            (
                "trace",
                trace_path
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default(),
            ),
        ],
    );

    let spec = EpisodeSpec::new(t0, target, deadline).map_err(classify)?;
    let reward = RewardParams::default();
    let result: EpisodeResult = match kind {
        ControllerKind::BangBang => {
            run_controller(&spec, reward, &mut BangBang).map_err(classify)?
        }
        ControllerKind::Oracle => {
            let oracle = just_in_time_schedule(&spec);
            run_schedule(&spec, reward, &oracle.schedule).map_err(classify)?
        }
        ControllerKind::Mcts => {
            let cfg = MctsConfig {
                n_simulations: sims,
                rng_seed: seed,
                ..MctsConfig::default()
            };
            let (result, trace) = run_mcts_episode_traced(&spec, reward, &cfg).map_err(classify)?;
            if let Some(path) = &trace_path {
                let mut lines = String::new();
                for entry in &trace {
                    let json = serde_json::to_string(entry)
                        .map_err(|e| CliError::Runtime(format!("trace serialization: {e}")))?;
                    lines.push_str(&json);
                    lines.push('\n');
                }
                std::fs::write(path, lines).map_err(|e| io_fault("writing trace", e))?;
            }
            result
        }
        ControllerKind::Ppo => {
            let path = policy_path
                .as_ref()
                .ok_or_else(|| CliError::Config("controller=ppo requires --policy".into()))?;
            let net = load_policy(path).map_err(classify)?;
            run_controller(&spec, reward, &mut |obs: &heatplan_core::Observation| {
                net.greedy_action(obs)
            })
            .map_err(classify)?
        }
    };

    result.write_trajectory_csv(&out).map_err(classify)?;
    println!(
        "energy_wh={} terminal_c={:.3} success={}",
        result.energy_wh, result.terminal_temp_c, result.success
    );
    Ok(())
}

fn cmd_train(args: TrainArgs, file: &BTreeMap<String, String>) -> Result<(), CliError> {
    let steps = resolve(args.steps, file, "steps", PpoConfig::default().total_steps)?;
    let seed = resolve_seed(args.seed, file)?;
    let out = resolve(args.out, file, "out", PathBuf::from("policy.json"))?;
    let curve_path = match resolve_opt(args.curve, file, "curve")? {
        Some(p) => p,
        None => out.with_extension("csv"),
    };
    echo_config(
        "train",
        &[
            ("steps", steps.to_string()),
            ("seed", seed.to_string()),
            ("out", out.display().to_string()),
            ("curve", curve_path.display().to_string()),
        ],
    );

    let cfg = PpoConfig {
        total_steps: steps,
        rng_seed: seed,
        ..PpoConfig::default()
    };
    let started = Instant::now();
    let (net, curve) =
        train(&cfg, RewardParams::default(), &mut UniformSpecSampler).map_err(classify)?;
    save_policy(&net, &out).map_err(classify)?;
    std::fs::write(&curve_path, curve_to_csv(&curve)).map_err(|e| io_fault("writing curve", e))?;
    println!(
        "trained steps={steps} batches={} wall_s={:.1} policy={} curve={}",
        curve.len(),
        started.elapsed().as_secs_f64(),
        out.display(),
        curve_path.display()
    );
    Ok(())
}

fn cmd_sweep(args: SweepArgs, file: &BTreeMap<String, String>) -> Result<(), CliError> {
    let vary = resolve(args.vary, file, "vary", "deadline".to_string())?;
    let controllers_raw = resolve(
        args.controllers,
        file,
        "controllers",
        "bangbang,mcts,ppo,oracle".to_string(),
    )?;
    let out = resolve(args.out, file, "out", PathBuf::from("results.csv"))?;
    let policy_path = resolve_opt(args.policy, file, "policy")?;
    let sims = resolve(args.sims, file, "sims", MctsConfig::default().n_simulations)?;
    let seeds_raw = resolve(args.seeds, file, "seeds", "0,1,2,3,4".to_string())?;
    let jobs = resolve(args.jobs, file, "jobs", 1)?;

    let axis: SweepAxis = vary.parse().map_err(classify)?;
    let mut controllers = Vec::new();
    for name in controllers_raw.split(',').filter(|s| !s.trim().is_empty()) {
        controllers.push(parse_controller(name.trim())?);
    }
    let mut seeds = Vec::new();
    for s in seeds_raw.split(',').filter(|s| !s.trim().is_empty()) {
        seeds.push(
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Config(format!("bad seed {s:?}")))?,
        );
    }
    echo_config(
        "sweep",
        &[
            ("vary", axis.label().to_string()),
            ("controllers", controllers_raw.clone()),
            ("seeds", seeds_raw.clone()),
            ("sims", sims.to_string()),
            ("jobs", jobs.to_string()),
            ("out", out.display().to_string()),
            (
                "policy",
                policy_path
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default(),
            ),
        ],
    );

    let mut spec = SweepSpec::new(axis, controllers);
    spec.seeds = seeds;
    spec.policy_path = policy_path;
    spec.mcts.n_simulations = sims;
    spec.jobs = jobs.max(1);
    let rows = heatplan_core::run_sweep(&spec).map_err(classify)?;
    std::fs::write(&out, heatplan_core::sweep::rows_to_csv(&rows))
        .map_err(|e| io_fault("writing results", e))?;
    println!("wrote {} rows to {}", rows.len(), out.display());
    Ok(())
}

/// Pick the swept axis by looking at which spec column actually varies.
fn infer_axis(rows: &[SweepRow]) -> SweepAxis {
    for axis in [
        SweepAxis::Deadline,
        SweepAxis::InitialTemp,
        SweepAxis::TargetTemp,
    ] {
        let mut values: Vec<f64> = rows.iter().map(|r| r.axis_value(axis)).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        if values.len() > 1 {
            return axis;
        }
    }
    SweepAxis::Deadline
}

fn cmd_plot(args: PlotArgs, file: &BTreeMap<String, String>) -> Result<(), CliError> {
    let input = resolve(args.input, file, "in", PathBuf::from("results.csv"))?;
    let kind = resolve(args.kind, file, "kind", "scatter_by_axis".to_string())?;
    let out = resolve(args.out, file, "out", PathBuf::from("fig.svg"))?;
    let axis_flag = resolve_opt(args.axis, file, "axis")?;
    if kind != "scatter_by_axis" {
        return Err(CliError::Config(format!(
            "unknown plot kind {kind:?} (expected scatter_by_axis)"
        )));
    }

    let csv = std::fs::read_to_string(&input)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", input.display())))?;
    let rows = heatplan_core::sweep::rows_from_csv(&csv).map_err(classify)?;
    let axis = match axis_flag {
        Some(name) => name.parse::<SweepAxis>().map_err(classify)?,
        None => infer_axis(&rows),
    };
    echo_config(
        "plot",
        &[
            ("in", input.display().to_string()),
            ("kind", kind.clone()),
            ("axis", axis.label().to_string()),
            ("out", out.display().to_string()),
        ],
    );
    emit_scatter(&rows, axis, &out).map_err(classify)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(path) => load_config_file(path)?,
        None => BTreeMap::new(),
    };
    match cli.command {
        Command::Simulate(args) => cmd_simulate(args, &file),
        Command::Train(args) => cmd_train(args, &file),
        Command::Sweep(args) => cmd_sweep(args, &file),
        Command::Plot(args) => cmd_plot(args, &file),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}
