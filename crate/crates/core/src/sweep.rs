//! One-dimensional experiment sweeps over initial temperature, deadline,
//! and target temperature, with all controllers run under identical
//! physics and timing.
//!
//! Deterministic controllers (bang-bang, oracle, greedy-policy) produce
//! one row per grid point; the stochastic planner produces one row per
//! seed with its RNG stream derived from (axis value, controller, seed),
//! so scheduling and parallelism never change results.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use crate::control::{just_in_time_schedule, run_controller, BangBang};
use crate::env::{run_schedule, EpisodeResult, EpisodeSpec, Observation, RewardParams};
use crate::error::HeatplanError;
use crate::mcts::{run_mcts_episode, MctsConfig};
use crate::ppo::{load_policy, PolicyNet};
use crate::thermal::TankParams;

/// Which episode setting the sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    InitialTemp,
    Deadline,
    TargetTemp,
}

impl SweepAxis {
    /// The experiment grid for this axis.
    pub fn default_grid(self) -> Vec<f64> {
        match self {
            SweepAxis::InitialTemp => vec![10.0, 15.0, 20.0, 25.0, 30.0],
            SweepAxis::Deadline => vec![30.0, 45.0, 60.0, 75.0, 90.0],
            SweepAxis::TargetTemp => vec![40.0, 50.0, 60.0, 70.0, 80.0],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SweepAxis::InitialTemp => "initial_temp",
            SweepAxis::Deadline => "deadline",
            SweepAxis::TargetTemp => "target_temp",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = HeatplanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "initial_temp" => Ok(SweepAxis::InitialTemp),
            "deadline" => Ok(SweepAxis::Deadline),
            "target_temp" => Ok(SweepAxis::TargetTemp),
            other => Err(HeatplanError::SweepConfig(format!(
                "unknown axis {other:?} (expected initial_temp, deadline, or target_temp)"
            ))),
        }
    }
}

/// Controllers the sweep can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ControllerKind {
    BangBang,
    Mcts,
    Ppo,
    Oracle,
}

impl ControllerKind {
    pub fn name(self) -> &'static str {
        match self {
            ControllerKind::BangBang => "bangbang",
            ControllerKind::Mcts => "mcts",
            ControllerKind::Ppo => "ppo",
            ControllerKind::Oracle => "oracle",
        }
    }

    fn is_stochastic(self) -> bool {
        matches!(self, ControllerKind::Mcts)
    }
}

impl FromStr for ControllerKind {
    type Err = HeatplanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bangbang" => Ok(ControllerKind::BangBang),
            "mcts" => Ok(ControllerKind::Mcts),
            "ppo" => Ok(ControllerKind::Ppo),
            "oracle" => Ok(ControllerKind::Oracle),
            other => Err(HeatplanError::SweepConfig(format!(
                "unknown controller {other:?} (expected bangbang, mcts, ppo, or oracle)"
            ))),
        }
    }
}

/// Full description of one sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub fixed_t0_c: f64,
    pub fixed_target_c: f64,
    pub fixed_deadline: usize,
    pub controllers: Vec<ControllerKind>,
    pub seeds: Vec<u64>,
    pub policy_path: Option<PathBuf>,
    pub mcts: MctsConfig,
    pub reward: RewardParams,
    pub params: TankParams,
    /// Worker cap for parallel grid evaluation.
    pub jobs: usize,
}

impl SweepSpec {
    pub fn new(axis: SweepAxis, controllers: Vec<ControllerKind>) -> Self {
        Self {
            axis,
            values: axis.default_grid(),
            fixed_t0_c: 20.0,
            fixed_target_c: 60.0,
            fixed_deadline: 60,
            controllers,
            seeds: vec![0, 1, 2, 3, 4],
            policy_path: None,
            mcts: MctsConfig::default(),
            reward: RewardParams::default(),
            params: TankParams::default(),
            jobs: 1,
        }
    }

    fn episode_spec(&self, value: f64) -> Result<EpisodeSpec, HeatplanError> {
        let (t0, target, deadline) = match self.axis {
            SweepAxis::InitialTemp => (value, self.fixed_target_c, self.fixed_deadline),
            SweepAxis::TargetTemp => (self.fixed_t0_c, value, self.fixed_deadline),
            SweepAxis::Deadline => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(HeatplanError::SweepConfig(format!(
                        "deadline grid value {value} is not a positive integer"
                    )));
                }
                (self.fixed_t0_c, self.fixed_target_c, value as usize)
            }
        };
        EpisodeSpec::with_params(t0, target, deadline, self.params.clone())
    }
}

/// One evaluated episode.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub controller: String,
    pub t0_c: f64,
    pub t_target_c: f64,
    pub deadline_steps: usize,
    pub seed: u64,
    pub energy_wh: f64,
    pub terminal_temp_c: f64,
    pub success: bool,
    pub on_steps: usize,
    pub episode_return: f64,
    pub wall_ms: f64,
    /// Fingerprint of the physics the episode ran under; identical for
    /// every row of one sweep by construction, recorded so tests can
    /// assert it.
    pub params_fingerprint: u64,
}

/// Stable fingerprint of the physical constants.
pub fn params_fingerprint(params: &TankParams) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut hasher = std::collections::hash_map::DefaultHasher::new();
    for v in [
        params.mass_kg,
        params.cp,
        params.h,
        params.area_m2,
        params.eta,
        params.p_on_w,
        params.p_off_w,
        params.dt_s,
        params.t_ambient_c,
    ] {
        v.to_bits().hash(&mut hasher);
    }
    hasher.finish()
}

pub const RESULTS_CSV_HEADER: &str =
    "controller,t0_c,t_target_c,deadline_steps,seed,energy_wh,terminal_temp_c,success,on_steps,episode_return,wall_ms";

impl SweepRow {
    fn from_result(
        controller: ControllerKind,
        seed: u64,
        result: &EpisodeResult,
        wall_ms: f64,
    ) -> Self {
        Self {
            controller: controller.name().to_string(),
            t0_c: result.spec.t0_c,
            t_target_c: result.spec.t_target_c,
            deadline_steps: result.spec.deadline_steps,
            seed,
            energy_wh: result.energy_wh,
            terminal_temp_c: result.terminal_temp_c,
            success: result.success,
            on_steps: result.on_steps(),
            episode_return: result.episode_return,
            wall_ms,
            params_fingerprint: params_fingerprint(&result.spec.params),
        }
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{:.2},{:.2},{},{},{:.3},{:.6},{},{},{:.6},{:.3}",
            self.controller,
            self.t0_c,
            self.t_target_c,
            self.deadline_steps,
            self.seed,
            self.energy_wh,
            self.terminal_temp_c,
            self.success,
            self.on_steps,
            self.episode_return,
            self.wall_ms
        )
    }

    pub fn from_csv_line(line: &str) -> Result<Self, HeatplanError> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(HeatplanError::SweepConfig(format!(
                "expected 11 CSV fields, found {} in {line:?}",
                fields.len()
            )));
        }
        let parse_f = |s: &str| {
            s.parse::<f64>().map_err(|_| {
                HeatplanError::SweepConfig(format!("bad numeric field {s:?} in {line:?}"))
            })
        };
        Ok(Self {
            controller: fields[0].to_string(),
            t0_c: parse_f(fields[1])?,
            t_target_c: parse_f(fields[2])?,
            deadline_steps: fields[3]
                .parse()
                .map_err(|_| HeatplanError::SweepConfig(format!("bad deadline in {line:?}")))?,
            seed: fields[4]
                .parse()
                .map_err(|_| HeatplanError::SweepConfig(format!("bad seed in {line:?}")))?,
            energy_wh: parse_f(fields[5])?,
            terminal_temp_c: parse_f(fields[6])?,
            success: fields[7] == "true",
            on_steps: fields[8]
                .parse()
                .map_err(|_| HeatplanError::SweepConfig(format!("bad on_steps in {line:?}")))?,
            episode_return: parse_f(fields[9])?,
            wall_ms: parse_f(fields[10])?,
            params_fingerprint: 0,
        })
    }

    /// The grid coordinate of this row along `axis`.
    pub fn axis_value(&self, axis: SweepAxis) -> f64 {
        match axis {
            SweepAxis::InitialTemp => self.t0_c,
            SweepAxis::Deadline => self.deadline_steps as f64,
            SweepAxis::TargetTemp => self.t_target_c,
        }
    }
}

/// Render rows to the results CSV (header included).
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(RESULTS_CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.to_csv_line());
    }
    out
}

/// Parse a results CSV produced by [`rows_to_csv`].
pub fn rows_from_csv(csv: &str) -> Result<Vec<SweepRow>, HeatplanError> {
    let mut lines = csv.lines();
    match lines.next() {
        Some(h) if h == RESULTS_CSV_HEADER => {}
        other => {
            return Err(HeatplanError::SweepConfig(format!(
                "missing or wrong results CSV header: {other:?}"
            )))
        }
    }
    lines.map(SweepRow::from_csv_line).collect()
}

fn derived_mcts_seed(base: u64, axis_value: f64, controller: ControllerKind, seed: u64) -> u64 {
    // Stable mixing of (axis value, controller, seed) into the stream seed.
    let mut x = base ^ axis_value.to_bits() ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    x ^= (controller as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^ (x >> 31)
}

struct Task {
    value: f64,
    controller: ControllerKind,
    seed: u64,
}

fn run_task(
    spec: &SweepSpec,
    policy: Option<&PolicyNet>,
    task: &Task,
) -> Result<SweepRow, HeatplanError> {
    let ep_spec = spec.episode_spec(task.value)?;
    let started = Instant::now();
    let result = match task.controller {
        ControllerKind::BangBang => run_controller(&ep_spec, spec.reward, &mut BangBang)?,
        ControllerKind::Oracle => {
            let oracle = just_in_time_schedule(&ep_spec);
            run_schedule(&ep_spec, spec.reward, &oracle.schedule)?
        }
        ControllerKind::Mcts => {
            let cfg = MctsConfig {
                rng_seed: derived_mcts_seed(
                    spec.mcts.rng_seed,
                    task.value,
                    task.controller,
                    task.seed,
                ),
                ..spec.mcts.clone()
            };
            run_mcts_episode(&ep_spec, spec.reward, &cfg)?
        }
        ControllerKind::Ppo => {
            let net = policy.expect("policy presence checked before running");
            let mut ctl = |obs: &Observation| net.greedy_action(obs);
            run_controller(&ep_spec, spec.reward, &mut ctl)?
        }
    };
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(SweepRow::from_result(
        task.controller,
        task.seed,
        &result,
        wall_ms,
    ))
}

/// Run the full sweep: one row per (grid value, controller, seed) for the
/// stochastic planner, one row per (grid value, controller) otherwise.
/// Rows come back sorted by (controller, grid value, seed).
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, HeatplanError> {
    let policy = match (
        spec.controllers.contains(&ControllerKind::Ppo),
        &spec.policy_path,
    ) {
        (false, _) => None,
        (true, Some(path)) => Some(load_policy(path)?),
        (true, None) => {
            return Err(HeatplanError::SweepConfig(
                "ppo requested but no policy file configured".into(),
            ))
        }
    };

    let mut controllers = spec.controllers.clone();
    controllers.sort();
    controllers.dedup();

    let mut tasks = Vec::new();
    for &controller in &controllers {
        for &value in &spec.values {
            let seeds: &[u64] = if controller.is_stochastic() {
                &spec.seeds
            } else {
                &spec.seeds[..spec.seeds.len().min(1)]
            };
            for &seed in seeds {
                tasks.push(Task {
                    value,
                    controller,
                    seed,
                });
            }
        }
    }

    let results: Mutex<Vec<Option<Result<SweepRow, HeatplanError>>>> =
        Mutex::new((0..tasks.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = spec.jobs.clamp(1, tasks.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= tasks.len() {
                    break;
                }
                let row = run_task(spec, policy.as_ref(), &tasks[i]);
                results.lock().unwrap()[i] = Some(row);
            });
        }
    });

    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("every task ran"))
        .collect()
}

/// Per-controller, per-grid-point aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub controller: String,
    pub axis_value: f64,
    pub mean_energy_wh: f64,
    pub min_energy_wh: f64,
    pub max_energy_wh: f64,
    /// `1 - E / E_bangbang` at the same grid point; `None` when bang-bang
    /// is absent or consumed zero energy.
    pub savings_vs_bangbang: Option<f64>,
}

/// Aggregate rows per (controller, grid point) and compute savings against
/// the bang-bang baseline where possible.
pub fn summarize(rows: &[SweepRow], axis: SweepAxis) -> Vec<Aggregate> {
    let mut grouped: BTreeMap<(String, u64), Vec<f64>> = BTreeMap::new();
    for row in rows {
        grouped
            .entry((row.controller.clone(), row.axis_value(axis).to_bits()))
            .or_default()
            .push(row.energy_wh);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let baseline: BTreeMap<u64, f64> = grouped
        .iter()
        .filter(|((c, _), _)| c == "bangbang")
        .map(|((_, v), energies)| (*v, mean(energies)))
        .collect();

    grouped
        .into_iter()
        .map(|((controller, value_bits), energies)| {
            let m = mean(&energies);
            let savings = baseline.get(&value_bits).and_then(|&bb| {
                if bb > 0.0 {
                    Some(1.0 - m / bb)
                } else {
                    None
                }
            });
            Aggregate {
                controller,
                axis_value: f64::from_bits(value_bits),
                mean_energy_wh: m,
                min_energy_wh: energies.iter().cloned().fold(f64::INFINITY, f64::min),
                max_energy_wh: energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                savings_vs_bangbang: savings,
            }
        })
        .collect()
}
