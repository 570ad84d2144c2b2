//! Deadline-aware, energy-minimizing immersion water-heater control
//! benchmark.
//!
//! One deterministic thermal simulator, four controllers evaluated under
//! identical physics and timing, and a sweep harness:
//!
//! - [`thermal`] — the lumped tank model and its closed forms
//! - [`env`] — the finite-horizon control episode (reward, truncation,
//!   energy accounting)
//! - [`control`] — bang-bang baseline and the exact minimal-energy oracle
//! - [`mcts`] — zero-shot UCB1 tree-search planner
//! - [`ppo`] — from-scratch clipped-surrogate policy-gradient learner
//! - [`sweep`] — one-dimensional experiment sweeps and aggregation
//! - [`plot`] — SVG scatter/trajectory plots with sidecar CSVs

pub mod control;
pub mod env;
pub mod error;
pub mod mcts;
pub mod plot;
pub mod ppo;
pub mod sweep;
pub mod thermal;

pub use control::{
    bang_bang_action, brute_force_schedule, just_in_time_schedule, run_controller, BangBang,
    Controller, OracleResult,
};
pub use env::{
    episode_return_bounds, run_schedule, Episode, EpisodeResult, EpisodeSpec, Observation,
    RewardParams, StepOutcome,
};
pub use error::HeatplanError;
pub use mcts::{run_mcts_episode, MctsConfig};
pub use ppo::{load_policy, save_policy, PolicyNet, PpoConfig};
pub use sweep::{run_sweep, summarize, SweepAxis, SweepRow, SweepSpec};
pub use thermal::{
    cooling_factor, deviation_after_schedule, max_steady_temperature, step_temperature, Action,
    Schedule, TankParams,
};
