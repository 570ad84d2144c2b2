//! Finite-horizon control episode: observation construction, reward,
//! deadline truncation, and energy accounting.
//!
//! One episode runs a fixed number of control intervals. Every step pays an
//! energy penalty proportional to the electrical energy drawn; the step that
//! lands on the deadline additionally pays a terminal penalty proportional
//! to the absolute miss from the target temperature. Both terms are
//! penalties, so every reward is <= 0 and the episode return lives in a
//! compact interval near [-1.2, 0] at nominal settings.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::HeatplanError;
use crate::thermal::{self, Action, Schedule, TankParams};

/// Temperatures this library treats as physically sane. Leaving the range
/// is reported as an error, never silently clipped.
pub const TEMP_SANE_MIN_C: f64 = -50.0;
pub const TEMP_SANE_MAX_C: f64 = 150.0;

/// One experiment instance: where the water starts, where it must be at the
/// deadline, and how tightly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeSpec {
    /// Initial water temperature (degC).
    pub t0_c: f64,
    /// Target temperature at the deadline (degC).
    pub t_target_c: f64,
    /// Deadline in control steps.
    pub deadline_steps: usize,
    /// Half-width of the terminal service band (degC).
    pub band_c: f64,
    /// Terminal time tolerance in steps, used at evaluation time only;
    /// episodes always truncate exactly at the deadline.
    pub tol_steps: usize,
    pub params: TankParams,
}

impl EpisodeSpec {
    /// Spec with nominal physics, a 1 degC band, and 1-step time tolerance.
    pub fn new(t0_c: f64, t_target_c: f64, deadline_steps: usize) -> Result<Self, HeatplanError> {
        Self::with_params(t0_c, t_target_c, deadline_steps, TankParams::default())
    }

    pub fn with_params(
        t0_c: f64,
        t_target_c: f64,
        deadline_steps: usize,
        params: TankParams,
    ) -> Result<Self, HeatplanError> {
        let spec = Self {
            t0_c,
            t_target_c,
            deadline_steps,
            band_c: 1.0,
            tol_steps: 1,
            params,
        };
        spec.validate()?;
        Ok(spec)
    }

    // negated comparisons are deliberate: they also reject NaN inputs
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), HeatplanError> {
        let bad = |what: &str| Err(HeatplanError::InvalidSpec(what.to_string()));
        if self.deadline_steps < 1 {
            return bad("deadline_steps must be >= 1");
        }
        if !(self.band_c > 0.0) {
            return bad("band_c must be > 0");
        }
        if self.tol_steps < 1 {
            return bad("tol_steps must be >= 1");
        }
        if !self.t0_c.is_finite() || !self.t_target_c.is_finite() {
            return bad("temperatures must be finite");
        }
        if !(TEMP_SANE_MIN_C..=TEMP_SANE_MAX_C).contains(&self.t0_c) {
            return bad("t0_c outside the sane range");
        }
        Ok(())
    }
}

/// Reward coefficients: a uniform per-joule energy penalty and a uniform
/// per-degC terminal-miss penalty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardParams {
    /// Energy penalty per joule of electrical energy (1/J).
    pub alpha: f64,
    /// Terminal penalty per degC of miss (1/degC).
    pub beta: f64,
}

impl RewardParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, HeatplanError> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(HeatplanError::InvalidReward("alpha must be > 0".into()));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(HeatplanError::InvalidReward("beta must be > 0".into()));
        }
        Ok(Self { alpha, beta })
    }

    /// Penultimate-step dominance: one extra on-step must cost less than
    /// the benefit of a 1 degC terminal improvement. The check uses the
    /// *delivered* energy per on-step (`eta * P_on * dt`).
    pub fn dominance_holds(&self, params: &TankParams) -> bool {
        let delivered_step_j = params.eta * params.p_on_w * params.dt_s;
        self.alpha * delivered_step_j < self.beta * 1.0
    }
}

impl Default for RewardParams {
    fn default() -> Self {
        Self {
            alpha: 1.86e-8,
            beta: 0.03,
        }
    }
}

/// What every controller sees at each step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub t_c: f64,
    pub t_target_c: f64,
    pub t_ambient_c: f64,
    /// Steps until the deadline.
    pub steps_remaining: usize,
}

/// Result of one environment transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub obs: Observation,
    pub reward: f64,
    /// Electrical energy drawn this step (J).
    pub energy_j: f64,
    pub done: bool,
}

/// Full record of one finished episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    /// The spec the episode ran under.
    pub spec: EpisodeSpec,
    /// Temperature before each step plus the terminal temperature
    /// (length D + 1).
    pub temps: Vec<f64>,
    pub actions: Schedule,
    /// Per-step rewards (length D).
    pub rewards: Vec<f64>,
    /// Total electrical energy (Wh).
    pub energy_wh: f64,
    pub terminal_temp_c: f64,
    /// Whether the terminal temperature landed inside the service band.
    pub success: bool,
    pub episode_return: f64,
}

impl EpisodeResult {
    pub fn on_steps(&self) -> usize {
        self.actions.iter().filter(|a| a.is_on()).count()
    }

    /// Trajectory CSV: one row per executed step, temperatures in 6-decimal
    /// fixed point.
    pub fn to_trajectory_csv(&self) -> String {
        let mut out = String::from("step,temp_c,action,power_w,reward,cum_energy_wh\n");
        let params = &self.spec.params;
        let per_on_wh = params.energy_per_on_step_j() / 3600.0;
        let mut cum_wh = 0.0;
        for (i, &action) in self.actions.iter().enumerate() {
            let power_w = action.power_w(params);
            if action.is_on() {
                cum_wh += per_on_wh;
            }
            let _ = writeln!(
                out,
                "{},{:.6},{},{:.0},{:.7},{:.3}",
                i,
                self.temps[i + 1],
                if action.is_on() { 1 } else { 0 },
                power_w,
                self.rewards[i],
                cum_wh
            );
        }
        out
    }

    pub fn write_trajectory_csv(&self, path: &Path) -> Result<(), HeatplanError> {
        std::fs::write(path, self.to_trajectory_csv())?;
        Ok(())
    }
}

/// A running episode. Single-threaded by construction (mutable clock);
/// distinct instances are independent.
#[derive(Debug, Clone)]
pub struct Episode {
    spec: EpisodeSpec,
    reward: RewardParams,
    t_c: f64,
    step_index: usize,
    done: bool,
}

impl Episode {
    pub fn new(spec: EpisodeSpec, reward: RewardParams) -> Result<Self, HeatplanError> {
        spec.validate()?;
        if !reward.dominance_holds(&spec.params) {
            return Err(HeatplanError::InvalidReward(
                "alpha * delivered step energy must be < beta * 1 degC".into(),
            ));
        }
        let t0 = spec.t0_c;
        Ok(Self {
            spec,
            reward,
            t_c: t0,
            step_index: 0,
            done: false,
        })
    }

    pub fn spec(&self) -> &EpisodeSpec {
        &self.spec
    }

    pub fn reward_params(&self) -> RewardParams {
        self.reward
    }

    /// Restart the episode clock and return the initial observation.
    pub fn reset(&mut self) -> Observation {
        self.t_c = self.spec.t0_c;
        self.step_index = 0;
        self.done = false;
        self.observe()
    }

    pub fn observe(&self) -> Observation {
        Observation {
            t_c: self.t_c,
            t_target_c: self.spec.t_target_c,
            t_ambient_c: self.spec.params.t_ambient_c,
            steps_remaining: self.spec.deadline_steps - self.step_index,
        }
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Advance one control interval. The reward is `-alpha * E_t`, plus
    /// `-beta * |T_target - T'|` when this step lands on the deadline.
    pub fn step(&mut self, action: Action) -> Result<StepOutcome, HeatplanError> {
        if self.done {
            return Err(HeatplanError::EpisodeFinished);
        }
        let power_w = action.power_w(&self.spec.params);
        let next_t = thermal::step_temperature(self.t_c, power_w, &self.spec.params)?;
        if !(TEMP_SANE_MIN_C..=TEMP_SANE_MAX_C).contains(&next_t) {
            return Err(HeatplanError::TemperatureOutOfRange(next_t));
        }
        let energy_j = power_w * self.spec.params.dt_s;
        self.t_c = next_t;
        self.step_index += 1;
        self.done = self.step_index == self.spec.deadline_steps;

        let mut reward = -self.reward.alpha * energy_j;
        if self.done {
            reward -= self.reward.beta * (self.spec.t_target_c - next_t).abs();
        }
        Ok(StepOutcome {
            obs: self.observe(),
            reward,
            energy_j,
            done: self.done,
        })
    }
}

/// Run a fixed schedule through a fresh episode and collect the full
/// trajectory record. The schedule length must equal the deadline.
pub fn run_schedule(
    spec: &EpisodeSpec,
    reward: RewardParams,
    schedule: &[Action],
) -> Result<EpisodeResult, HeatplanError> {
    if schedule.len() != spec.deadline_steps {
        return Err(HeatplanError::InvalidSpec(format!(
            "schedule length {} != deadline {}",
            schedule.len(),
            spec.deadline_steps
        )));
    }
    let mut ep = Episode::new(spec.clone(), reward)?;
    let mut obs = ep.reset();
    let mut temps = vec![obs.t_c];
    let mut rewards = Vec::with_capacity(schedule.len());
    let mut energy_j = 0.0;
    let mut episode_return = 0.0;
    for &a in schedule {
        let out = ep.step(a)?;
        obs = out.obs;
        temps.push(obs.t_c);
        rewards.push(out.reward);
        energy_j += out.energy_j;
        episode_return += out.reward;
    }
    let terminal = obs.t_c;
    Ok(EpisodeResult {
        spec: spec.clone(),
        temps,
        actions: schedule.to_vec(),
        rewards,
        energy_wh: energy_j / 3600.0,
        terminal_temp_c: terminal,
        success: (terminal - spec.t_target_c).abs() <= spec.band_c,
        episode_return,
    })
}

/// Bounds on the achievable episode return: the upper bound is 0 (both
/// reward terms are penalties); the lower bound charges the all-on energy
/// cost plus the worst terminal miss over temperatures reachable at the
/// deadline.
pub fn episode_return_bounds(spec: &EpisodeSpec, rp: &RewardParams) -> (f64, f64) {
    let d = spec.deadline_steps;
    let energy_cost = rp.alpha * spec.params.energy_per_on_step_j() * d as f64;

    let all_off = vec![Action::Off; d];
    let all_on = vec![Action::On; d];
    let coldest = thermal::deviation_after_schedule(spec.t0_c, &all_off, &spec.params);
    let hottest = thermal::deviation_after_schedule(spec.t0_c, &all_on, &spec.params);
    let max_miss = (spec.t_target_c - coldest)
        .abs()
        .max((spec.t_target_c - hottest).abs());

    (-(energy_cost + rp.beta * max_miss), 0.0)
}
