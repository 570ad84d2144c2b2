//! Clipped-surrogate policy-gradient training on the heater episode.
//!
//! On-policy loop: collect a fixed batch of environment steps with the
//! current stochastic policy, compute generalized advantage estimates,
//! then run several epochs of minibatch updates on the clipped objective
//! with an Adam step under global-norm gradient clipping. Training is
//! single-threaded and fully determined by the seed.

mod net;

pub use net::{
    load_policy, policy_from_json, policy_to_json, save_policy, ForwardCache, ObsNorm, PolicyNet,
    HIDDEN, N_ACTIONS, N_PARAMS, OBS_DIM,
};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::control::run_controller;
use crate::env::{Episode, EpisodeResult, EpisodeSpec, Observation, RewardParams};
use crate::error::HeatplanError;
use crate::thermal::Action;

/// Training hyperparameters. Defaults are the standard on-policy recipe;
/// the step budget defaults to desk scale (500k), with the full-scale
/// budget available through the CLI.
#[derive(Debug, Clone, PartialEq)]
pub struct PpoConfig {
    pub total_steps: usize,
    pub steps_per_batch: usize,
    pub minibatch_size: usize,
    pub epochs_per_batch: usize,
    pub learning_rate: f64,
    pub clip_ratio: f64,
    pub discount: f64,
    pub gae_lambda: f64,
    pub value_coef: f64,
    pub entropy_coef: f64,
    pub grad_clip_norm: f64,
    pub rng_seed: u64,
}

impl Default for PpoConfig {
    fn default() -> Self {
        Self {
            total_steps: 500_000,
            steps_per_batch: 2048,
            minibatch_size: 64,
            epochs_per_batch: 10,
            learning_rate: 3e-4,
            clip_ratio: 0.2,
            discount: 0.99,
            gae_lambda: 0.95,
            value_coef: 0.5,
            entropy_coef: 0.0,
            grad_clip_norm: 0.5,
            rng_seed: 0,
        }
    }
}

impl PpoConfig {
    pub fn validate(&self) -> Result<(), HeatplanError> {
        let bad = |w: &str| Err(HeatplanError::TrainingFault(w.to_string()));
        if !(self.clip_ratio > 0.0 && self.clip_ratio < 1.0) {
            return bad("clip_ratio must be in (0, 1)");
        }
        if !(self.discount > 0.0 && self.discount <= 1.0) {
            return bad("discount must be in (0, 1]");
        }
        if self.total_steps == 0
            || self.steps_per_batch == 0
            || self.minibatch_size == 0
            || self.epochs_per_batch == 0
        {
            return bad("all counts must be >= 1");
        }
        Ok(())
    }
}

/// One on-policy batch of transitions plus derived training targets.
#[derive(Debug, Clone, Default)]
pub struct RolloutBatch {
    pub observations: Vec<[f64; OBS_DIM]>,
    pub actions: Vec<usize>,
    pub log_probs: Vec<f64>,
    pub rewards: Vec<f64>,
    pub values: Vec<f64>,
    pub dones: Vec<bool>,
    pub advantages: Vec<f64>,
    pub returns: Vec<f64>,
}

impl RolloutBatch {
    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }
}

/// Backward-recursion generalized advantage estimation.
///
/// `bootstrap_value` is the value estimate of the state after the final
/// stored step (0 if that step was terminal). Fills `advantages` and
/// `returns` (targets = advantage + value).
pub fn gae_advantages(batch: &mut RolloutBatch, gamma: f64, lambda: f64, bootstrap_value: f64) {
    let n = batch.len();
    batch.advantages = vec![0.0; n];
    batch.returns = vec![0.0; n];
    let mut acc = 0.0;
    for t in (0..n).rev() {
        let next_value = if batch.dones[t] {
            0.0
        } else if t + 1 < n {
            batch.values[t + 1]
        } else {
            bootstrap_value
        };
        let not_done = if batch.dones[t] { 0.0 } else { 1.0 };
        let delta = batch.rewards[t] + gamma * next_value - batch.values[t];
        acc = delta + gamma * lambda * not_done * acc;
        batch.advantages[t] = acc;
        batch.returns[t] = acc + batch.values[t];
    }
}

/// Normalize advantages to zero mean / unit variance in place.
pub fn normalize_advantages(advantages: &mut [f64]) {
    let n = advantages.len() as f64;
    if n < 2.0 {
        return;
    }
    let mean = advantages.iter().sum::<f64>() / n;
    let var = advantages
        .iter()
        .map(|a| (a - mean) * (a - mean))
        .sum::<f64>()
        / n;
    let std = var.sqrt().max(1e-8);
    for a in advantages.iter_mut() {
        *a = (*a - mean) / std;
    }
}

/// Scalar diagnostics from one [`ppo_update`].
#[derive(Debug, Clone, Copy, Default)]
pub struct UpdateStats {
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub clip_fraction: f64,
}

/// Adam state over the flat parameter vector.
#[derive(Debug, Clone)]
pub struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
    beta1: f64,
    beta2: f64,
    eps: f64,
}

impl Adam {
    pub fn new(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t as i32);
        let bc2 = 1.0 - self.beta2.powi(self.t as i32);
        for i in 0..params.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grad[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grad[i] * grad[i];
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            params[i] -= lr * m_hat / (v_hat.sqrt() + self.eps);
        }
    }
}

/// Loss and gradient of the PPO objective on a set of samples.
///
/// Loss = clipped policy surrogate + `value_coef` * value MSE
/// - `entropy_coef` * entropy, averaged over the samples. The gradient is
///   accumulated into `grad` (length [`N_PARAMS`]); pass `None` to evaluate
///   the loss alone (used by the finite-difference check).
pub fn ppo_loss_and_grad(
    net: &PolicyNet,
    batch: &RolloutBatch,
    indices: &[usize],
    cfg: &PpoConfig,
    mut grad: Option<&mut [f64]>,
) -> (f64, UpdateStats) {
    let n = indices.len() as f64;
    let eps = cfg.clip_ratio;
    let mut stats = UpdateStats::default();
    let mut total_loss = 0.0;
    let mut clipped = 0usize;

    for &i in indices {
        let cache = net.forward_raw(batch.observations[i]);
        let lp = cache.log_probs();
        let probs = cache.probs();
        let a = batch.actions[i];
        let adv = batch.advantages[i];
        let ratio = (lp[a] - batch.log_probs[i]).exp();
        let clamped = ratio.clamp(1.0 - eps, 1.0 + eps);
        let surr_unclipped = ratio * adv;
        let surr_clipped = clamped * adv;
        let use_unclipped = surr_unclipped <= surr_clipped;
        let policy_loss = -surr_unclipped.min(surr_clipped);
        if ratio != clamped && !use_unclipped {
            clipped += 1;
        }

        let v_err = cache.value - batch.returns[i];
        let value_loss = v_err * v_err;
        let entropy = -(probs[0] * lp[0] + probs[1] * lp[1]);

        total_loss += policy_loss + cfg.value_coef * value_loss - cfg.entropy_coef * entropy;
        stats.policy_loss += policy_loss;
        stats.value_loss += value_loss;
        stats.entropy += entropy;

        if let Some(g) = grad.as_deref_mut() {
            // d policy_loss / d logp[a]; the clipped branch is constant.
            let dlogp_a = if use_unclipped { -ratio * adv / n } else { 0.0 };
            let mut dlogits = [0.0; N_ACTIONS];
            for k in 0..N_ACTIONS {
                let indicator = if k == a { 1.0 } else { 0.0 };
                dlogits[k] += dlogp_a * (indicator - probs[k]);
            }
            // Entropy term: dH/dlogit_k = -p_k (logp_k + H).
            if cfg.entropy_coef != 0.0 {
                for k in 0..N_ACTIONS {
                    dlogits[k] -= cfg.entropy_coef / n * (-probs[k] * (lp[k] + entropy));
                }
            }
            let dvalue = cfg.value_coef * 2.0 * v_err / n;
            net.backward(&cache, dlogits, dvalue, g);
        }
    }

    stats.policy_loss /= n;
    stats.value_loss /= n;
    stats.entropy /= n;
    stats.clip_fraction = clipped as f64 / n;
    (total_loss / n, stats)
}

fn clip_global_norm(grad: &mut [f64], max_norm: f64) {
    let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    if norm > max_norm {
        let scale = max_norm / norm;
        for g in grad.iter_mut() {
            *g *= scale;
        }
    }
}

/// One full PPO update (all epochs, all minibatches) on a collected batch.
/// Advantages must already be normalized.
pub fn ppo_update(
    net: &mut PolicyNet,
    adam: &mut Adam,
    batch: &RolloutBatch,
    cfg: &PpoConfig,
    rng: &mut ChaCha8Rng,
) -> Result<UpdateStats, HeatplanError> {
    let mut last_stats = UpdateStats::default();
    let mut indices: Vec<usize> = (0..batch.len()).collect();
    let mut grad = vec![0.0; N_PARAMS];
    for _ in 0..cfg.epochs_per_batch {
        indices.shuffle(rng);
        for chunk in indices.chunks(cfg.minibatch_size) {
            grad.iter_mut().for_each(|g| *g = 0.0);
            let (loss, stats) = ppo_loss_and_grad(net, batch, chunk, cfg, Some(&mut grad));
            if !loss.is_finite() {
                return Err(HeatplanError::TrainingFault(format!(
                    "non-finite loss {loss}"
                )));
            }
            clip_global_norm(&mut grad, cfg.grad_clip_norm);
            adam.step(&mut net.params, &grad, cfg.learning_rate);
            last_stats = stats;
        }
    }
    net.assert_finite()?;
    Ok(last_stats)
}

/// Draws a fresh episode spec per training episode.
pub trait SpecSampler {
    fn sample(&mut self, rng: &mut ChaCha8Rng) -> EpisodeSpec;
}

/// Training distribution covering the experiment grids: start 10-30 degC,
/// target 40-80 degC, deadline 30-90 steps, nominal physics.
#[derive(Debug, Clone, Default)]
pub struct UniformSpecSampler;

impl SpecSampler for UniformSpecSampler {
    fn sample(&mut self, rng: &mut ChaCha8Rng) -> EpisodeSpec {
        let t0 = rng.random_range(10.0..=30.0);
        let target = rng.random_range(40.0..=80.0);
        let deadline = rng.random_range(30..=90);
        EpisodeSpec::new(t0, target, deadline).expect("sampled spec within valid ranges")
    }
}

/// Always the same spec; handy for focused experiments and tests.
#[derive(Debug, Clone)]
pub struct FixedSpecSampler(pub EpisodeSpec);

impl SpecSampler for FixedSpecSampler {
    fn sample(&mut self, _rng: &mut ChaCha8Rng) -> EpisodeSpec {
        self.0.clone()
    }
}

/// One learning-curve sample, emitted per collected batch.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub env_steps: usize,
    pub mean_return: f64,
    pub mean_energy_wh: f64,
}

/// Learning-curve CSV: `env_steps,mean_return,mean_energy_wh`.
pub fn curve_to_csv(curve: &[CurvePoint]) -> String {
    let mut out = String::from("env_steps,mean_return,mean_energy_wh\n");
    for p in curve {
        out.push_str(&format!(
            "{},{:.6},{:.3}\n",
            p.env_steps, p.mean_return, p.mean_energy_wh
        ));
    }
    out
}

/// Full training loop. Returns the trained network and the learning curve
/// (one point per batch).
pub fn train<S: SpecSampler>(
    cfg: &PpoConfig,
    reward: RewardParams,
    sampler: &mut S,
) -> Result<(PolicyNet, Vec<CurvePoint>), HeatplanError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut net = PolicyNet::init(&mut rng);
    let mut adam = Adam::new(N_PARAMS);

    let mut curve = Vec::new();
    let mut env_steps = 0usize;

    // Persistent episode state across batch boundaries.
    let mut episode: Option<(Episode, Observation, f64, f64)> = None; // (env, obs, ep_return, ep_energy_j)
    let mut finished_returns: Vec<f64> = Vec::new();
    let mut finished_energies: Vec<f64> = Vec::new();

    while env_steps < cfg.total_steps {
        let steps = cfg.steps_per_batch.min(cfg.total_steps - env_steps);
        let mut batch = RolloutBatch::default();
        finished_returns.clear();
        finished_energies.clear();

        for _ in 0..steps {
            if episode.is_none() {
                let spec = sampler.sample(&mut rng);
                let mut ep = Episode::new(spec, reward)?;
                let obs = ep.reset();
                episode = Some((ep, obs, 0.0, 0.0));
            }
            let (ep, obs, ep_ret, ep_energy) = episode.as_mut().expect("episode initialized above");

            let input = net.obs_norm.apply(obs);
            let cache = net.forward_raw(input);
            let lp = cache.log_probs();
            let p1 = lp[1].exp();
            let action_idx = usize::from(rng.random::<f64>() < p1);
            let action = if action_idx == 1 {
                Action::On
            } else {
                Action::Off
            };

            let out = ep.step(action)?;
            *ep_ret += out.reward;
            *ep_energy += out.energy_j;

            batch.observations.push(input);
            batch.actions.push(action_idx);
            batch.log_probs.push(lp[action_idx]);
            batch.rewards.push(out.reward);
            batch.values.push(cache.value);
            batch.dones.push(out.done);

            if out.done {
                finished_returns.push(*ep_ret);
                finished_energies.push(*ep_energy / 3600.0);
                episode = None;
            } else {
                *obs = out.obs;
            }
        }
        env_steps += steps;

        // Bootstrap from the value of the dangling state, if any.
        let bootstrap = match &episode {
            Some((_, obs, _, _)) => net.forward_raw(net.obs_norm.apply(obs)).value,
            None => 0.0,
        };
        gae_advantages(&mut batch, cfg.discount, cfg.gae_lambda, bootstrap);
        normalize_advantages(&mut batch.advantages);
        ppo_update(&mut net, &mut adam, &batch, cfg, &mut rng)?;

        let mean = |v: &[f64]| {
            if v.is_empty() {
                f64::NAN
            } else {
                v.iter().sum::<f64>() / v.len() as f64
            }
        };
        curve.push(CurvePoint {
            env_steps,
            mean_return: mean(&finished_returns),
            mean_energy_wh: mean(&finished_energies),
        });
    }

    Ok((net, curve))
}

/// Deterministic greedy evaluation of a trained policy on one spec.
pub fn evaluate_policy(
    net: &PolicyNet,
    spec: &EpisodeSpec,
    reward: RewardParams,
) -> Result<EpisodeResult, HeatplanError> {
    let mut controller = |obs: &Observation| net.greedy_action(obs);
    run_controller(spec, reward, &mut controller)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tiny_batch(n: usize, seed: u64) -> (PolicyNet, RolloutBatch) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = PolicyNet::init(&mut rng);
        let mut batch = RolloutBatch::default();
        for _ in 0..n {
            let obs: [f64; OBS_DIM] = [
                rng.random_range(0.0..1.0),
                rng.random_range(0.3..0.9),
                0.2,
                rng.random_range(0.0..0.9),
            ];
            let cache = net.forward_raw(obs);
            let lp = cache.log_probs();
            let a = usize::from(rng.random_bool(0.5));
            batch.observations.push(obs);
            batch.actions.push(a);
            // Offset old log-probs a little so ratios are not exactly 1.
            batch.log_probs.push(lp[a] + rng.random_range(-0.2..0.2));
            batch.rewards.push(rng.random_range(-0.05..0.0));
            batch.values.push(cache.value);
            batch.dones.push(false);
            batch.advantages.push(rng.random_range(-1.5..1.5));
            batch.returns.push(rng.random_range(-1.0..0.0));
        }
        (net, batch)
    }

    #[test]
    fn gae_single_step_terminal() {
        let mut batch = RolloutBatch::default();
        batch.observations.push([0.0; OBS_DIM]);
        batch.actions.push(0);
        batch.log_probs.push(0.0);
        batch.rewards.push(-0.0134);
        batch.values.push(0.0);
        batch.dones.push(true);
        gae_advantages(&mut batch, 1.0, 1.0, 0.0);
        assert_abs_diff_eq!(batch.advantages[0], -0.0134, epsilon = 1e-12);
    }

    #[test]
    fn gae_zero_rewards_zero_values() {
        let mut batch = RolloutBatch::default();
        for i in 0..5 {
            batch.observations.push([0.0; OBS_DIM]);
            batch.actions.push(0);
            batch.log_probs.push(0.0);
            batch.rewards.push(0.0);
            batch.values.push(0.0);
            batch.dones.push(i == 4);
        }
        gae_advantages(&mut batch, 0.99, 0.95, 0.0);
        assert!(batch.advantages.iter().all(|&a| a == 0.0));
    }

    #[test]
    fn gae_three_step_hand_case() {
        let mut batch = RolloutBatch::default();
        for (i, r) in [0.0, 0.0, -0.06].iter().enumerate() {
            batch.observations.push([0.0; OBS_DIM]);
            batch.actions.push(0);
            batch.log_probs.push(0.0);
            batch.rewards.push(*r);
            batch.values.push(0.0);
            batch.dones.push(i == 2);
        }
        gae_advantages(&mut batch, 0.99, 0.95, 0.0);
        assert_abs_diff_eq!(batch.advantages[0], -0.05307, epsilon = 1e-5);
    }

    #[test]
    fn gae_reduces_to_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut batch = RolloutBatch::default();
        let n = 20;
        for i in 0..n {
            batch.observations.push([0.0; OBS_DIM]);
            batch.actions.push(0);
            batch.log_probs.push(0.0);
            batch.rewards.push(rng.random_range(-0.1..0.0));
            batch.values.push(0.0);
            batch.dones.push(i == n - 1);
        }
        gae_advantages(&mut batch, 1.0, 1.0, 0.0);
        for t in 0..n {
            let mc: f64 = batch.rewards[t..].iter().sum();
            assert_abs_diff_eq!(batch.advantages[t], mc, epsilon = 1e-12);
        }
    }

    #[test]
    fn clip_bound_elementwise() {
        let (net, batch) = tiny_batch(64, 10);
        let cfg = PpoConfig::default();
        for i in 0..batch.len() {
            let cache = net.forward_raw(batch.observations[i]);
            let lp = cache.log_probs();
            let a = batch.actions[i];
            let adv = batch.advantages[i];
            let ratio = (lp[a] - batch.log_probs[i]).exp();
            let clamped = ratio.clamp(1.0 - cfg.clip_ratio, 1.0 + cfg.clip_ratio);
            let m = (ratio * adv).min(clamped * adv);
            if adv >= 0.0 {
                assert!(m <= ratio * adv + 1e-15);
            } else {
                assert!(m <= clamped * adv + 1e-15);
            }
        }
    }

    #[test]
    fn ratio_one_policy_loss_is_zero_mean_advantage() {
        // With old log-probs exactly equal to current, ratio = 1 and the
        // policy loss is -mean(advantage), which is 0 after normalization.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let net = PolicyNet::init(&mut rng);
        let mut batch = RolloutBatch::default();
        for _ in 0..128 {
            let obs = [
                rng.random_range(0.0..1.0),
                0.6,
                0.2,
                rng.random_range(0.0..0.9),
            ];
            let cache = net.forward_raw(obs);
            let lp = cache.log_probs();
            let a = usize::from(rng.random_bool(0.5));
            batch.observations.push(obs);
            batch.actions.push(a);
            batch.log_probs.push(lp[a]);
            batch.rewards.push(0.0);
            batch.values.push(cache.value);
            batch.dones.push(false);
            batch.advantages.push(rng.random_range(-1.0..1.0));
            batch.returns.push(0.0);
        }
        normalize_advantages(&mut batch.advantages);
        let indices: Vec<usize> = (0..batch.len()).collect();
        let cfg = PpoConfig::default();
        let (_, stats) = ppo_loss_and_grad(&net, &batch, &indices, &cfg, None);
        assert_abs_diff_eq!(stats.policy_loss, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let (net, mut batch) = tiny_batch(10, 12);
        normalize_advantages(&mut batch.advantages);
        let cfg = PpoConfig::default();
        let indices: Vec<usize> = (0..batch.len()).collect();

        let mut grad = vec![0.0; N_PARAMS];
        ppo_loss_and_grad(&net, &batch, &indices, &cfg, Some(&mut grad));

        // Probe a spread of parameters across every layer.
        let h = 1e-5;
        let mut checked = 0;
        for idx in (0..N_PARAMS).step_by(97) {
            let mut plus = net.clone();
            plus.params[idx] += h;
            let (lp, _) = ppo_loss_and_grad(&plus, &batch, &indices, &cfg, None);
            let mut minus = net.clone();
            minus.params[idx] -= h;
            let (lm, _) = ppo_loss_and_grad(&minus, &batch, &indices, &cfg, None);
            let numeric = (lp - lm) / (2.0 * h);
            let denom = numeric.abs().max(grad[idx].abs()).max(1e-8);
            assert!(
                (numeric - grad[idx]).abs() / denom < 1e-4,
                "param {idx}: analytic {} vs numeric {}",
                grad[idx],
                numeric
            );
            checked += 1;
        }
        assert!(checked > 40);
    }

    #[test]
    fn gradient_with_entropy_matches_finite_differences() {
        let (net, mut batch) = tiny_batch(10, 13);
        normalize_advantages(&mut batch.advantages);
        let cfg = PpoConfig {
            entropy_coef: 0.01,
            ..PpoConfig::default()
        };
        let indices: Vec<usize> = (0..batch.len()).collect();
        let mut grad = vec![0.0; N_PARAMS];
        ppo_loss_and_grad(&net, &batch, &indices, &cfg, Some(&mut grad));
        let h = 1e-5;
        for idx in (0..N_PARAMS).step_by(131) {
            let mut plus = net.clone();
            plus.params[idx] += h;
            let (lp, _) = ppo_loss_and_grad(&plus, &batch, &indices, &cfg, None);
            let mut minus = net.clone();
            minus.params[idx] -= h;
            let (lm, _) = ppo_loss_and_grad(&minus, &batch, &indices, &cfg, None);
            let numeric = (lp - lm) / (2.0 * h);
            let denom = numeric.abs().max(grad[idx].abs()).max(1e-8);
            assert!((numeric - grad[idx]).abs() / denom < 1e-4, "param {idx}");
        }
    }

    #[test]
    fn short_training_run_is_deterministic() {
        let cfg = PpoConfig {
            total_steps: 4096,
            rng_seed: 21,
            ..PpoConfig::default()
        };
        let reward = RewardParams::default();
        let (net_a, curve_a) = train(&cfg, reward, &mut UniformSpecSampler).unwrap();
        let (net_b, curve_b) = train(&cfg, reward, &mut UniformSpecSampler).unwrap();
        assert_eq!(net_a.params, net_b.params);
        assert_eq!(curve_a.len(), curve_b.len());
        for (a, b) in curve_a.iter().zip(&curve_b) {
            assert_eq!(a.env_steps, b.env_steps);
            assert!(
                a.mean_return == b.mean_return
                    || (a.mean_return.is_nan() && b.mean_return.is_nan())
            );
        }
    }

    #[test]
    fn curve_rows_match_batches() {
        let cfg = PpoConfig {
            total_steps: 2048,
            rng_seed: 1,
            ..PpoConfig::default()
        };
        let (_, curve) = train(&cfg, RewardParams::default(), &mut UniformSpecSampler).unwrap();
        assert_eq!(curve.len(), 1);
        assert_eq!(curve[0].env_steps, 2048);
    }
}
