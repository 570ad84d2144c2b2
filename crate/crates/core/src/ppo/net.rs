//! Small feed-forward policy/value network with hand-written backprop.
//!
//! Architecture is fixed: 4 normalized inputs, two tanh hidden layers of
//! width 64, a 2-logit action head and a scalar value head off the shared
//! trunk. All parameters live in one flat `Vec<f64>`, which keeps the
//! optimizer, gradient clipping, and finite-difference checks trivial.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::Observation;
use crate::error::HeatplanError;

pub const OBS_DIM: usize = 4;
pub const HIDDEN: usize = 64;
pub const N_ACTIONS: usize = 2;

// Flat parameter layout: [W1, b1, W2, b2, Wp, bp, Wv, bv].
const W1: usize = 0;
const B1: usize = W1 + HIDDEN * OBS_DIM;
const W2: usize = B1 + HIDDEN;
const B2: usize = W2 + HIDDEN * HIDDEN;
const WP: usize = B2 + HIDDEN;
const BP: usize = WP + N_ACTIONS * HIDDEN;
const WV: usize = BP + N_ACTIONS;
const BV: usize = WV + HIDDEN;
pub const N_PARAMS: usize = BV + 1;

/// Observation scaling stored with the policy so evaluation matches
/// training.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObsNorm {
    pub temp_scale: f64,
    pub time_scale: f64,
}

impl Default for ObsNorm {
    fn default() -> Self {
        Self {
            temp_scale: 100.0,
            time_scale: 100.0,
        }
    }
}

impl ObsNorm {
    pub fn apply(&self, obs: &Observation) -> [f64; OBS_DIM] {
        [
            obs.t_c / self.temp_scale,
            obs.t_target_c / self.temp_scale,
            obs.t_ambient_c / self.temp_scale,
            obs.steps_remaining as f64 / self.time_scale,
        ]
    }
}

/// Policy/value network parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyNet {
    pub params: Vec<f64>,
    pub obs_norm: ObsNorm,
}

/// Intermediate activations kept for the backward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub input: [f64; OBS_DIM],
    pub h1: [f64; HIDDEN],
    pub h2: [f64; HIDDEN],
    pub logits: [f64; N_ACTIONS],
    pub value: f64,
}

impl ForwardCache {
    pub fn log_probs(&self) -> [f64; N_ACTIONS] {
        log_softmax(&self.logits)
    }

    pub fn probs(&self) -> [f64; N_ACTIONS] {
        let lp = self.log_probs();
        [lp[0].exp(), lp[1].exp()]
    }
}

pub fn log_softmax(logits: &[f64; N_ACTIONS]) -> [f64; N_ACTIONS] {
    let m = logits[0].max(logits[1]);
    let z = ((logits[0] - m).exp() + (logits[1] - m).exp()).ln() + m;
    [logits[0] - z, logits[1] - z]
}

fn matvec(w: &[f64], rows: usize, cols: usize, x: &[f64], b: &[f64], out: &mut [f64]) {
    for r in 0..rows {
        let row = &w[r * cols..(r + 1) * cols];
        let mut acc = b[r];
        for c in 0..cols {
            acc += row[c] * x[c];
        }
        out[r] = acc;
    }
}

/// Orthogonal-style init: Gram-Schmidt over Gaussian draws on the smaller
/// dimension, scaled by `gain`.
fn orthogonal(rows: usize, cols: usize, gain: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let (n, m, transpose) = if rows >= cols {
        (rows, cols, false)
    } else {
        (cols, rows, true)
    };
    // n x m Gaussian with orthonormalized columns.
    let mut a = vec![0.0; n * m];
    for v in a.iter_mut() {
        // Box-Muller from two uniforms keeps us on ChaCha's documented
        // stream without extra distribution dependencies.
        let u1: f64 = rng.random::<f64>().max(1e-12);
        let u2: f64 = rng.random();
        *v = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
    }
    for j in 0..m {
        for k in 0..j {
            let mut dot = 0.0;
            for i in 0..n {
                dot += a[i * m + j] * a[i * m + k];
            }
            for i in 0..n {
                a[i * m + j] -= dot * a[i * m + k];
            }
        }
        let mut norm = 0.0;
        for i in 0..n {
            norm += a[i * m + j] * a[i * m + j];
        }
        let norm = norm.sqrt().max(1e-12);
        for i in 0..n {
            a[i * m + j] /= norm;
        }
    }
    let mut w = vec![0.0; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let v = if transpose {
                a[c * m + r]
            } else {
                a[r * m + c]
            };
            w[r * cols + c] = gain * v;
        }
    }
    w
}

impl PolicyNet {
    /// Fresh network: orthogonal-style hidden layers, policy head scaled by
    /// 0.01 so the initial action distribution is near uniform.
    pub fn init(rng: &mut ChaCha8Rng) -> Self {
        let mut params = vec![0.0; N_PARAMS];
        let sqrt2 = std::f64::consts::SQRT_2;
        params[W1..B1].copy_from_slice(&orthogonal(HIDDEN, OBS_DIM, sqrt2, rng));
        params[W2..B2].copy_from_slice(&orthogonal(HIDDEN, HIDDEN, sqrt2, rng));
        params[WP..BP].copy_from_slice(&orthogonal(N_ACTIONS, HIDDEN, 0.01, rng));
        params[WV..BV].copy_from_slice(&orthogonal(1, HIDDEN, 1.0, rng));
        Self {
            params,
            obs_norm: ObsNorm::default(),
        }
    }

    pub fn assert_finite(&self) -> Result<(), HeatplanError> {
        if self.params.iter().all(|p| p.is_finite()) {
            Ok(())
        } else {
            Err(HeatplanError::TrainingFault(
                "non-finite network parameter".into(),
            ))
        }
    }

    /// Forward pass on a pre-normalized input vector.
    pub fn forward_raw(&self, input: [f64; OBS_DIM]) -> ForwardCache {
        let p = &self.params;
        let mut z1 = [0.0; HIDDEN];
        matvec(&p[W1..B1], HIDDEN, OBS_DIM, &input, &p[B1..W2], &mut z1);
        let mut h1 = [0.0; HIDDEN];
        for i in 0..HIDDEN {
            h1[i] = z1[i].tanh();
        }
        let mut z2 = [0.0; HIDDEN];
        matvec(&p[W2..B2], HIDDEN, HIDDEN, &h1, &p[B2..WP], &mut z2);
        let mut h2 = [0.0; HIDDEN];
        for i in 0..HIDDEN {
            h2[i] = z2[i].tanh();
        }
        let mut logits = [0.0; N_ACTIONS];
        matvec(&p[WP..BP], N_ACTIONS, HIDDEN, &h2, &p[BP..WV], &mut logits);
        let mut value = [0.0];
        matvec(&p[WV..BV], 1, HIDDEN, &h2, &p[BV..], &mut value);
        ForwardCache {
            input,
            h1,
            h2,
            logits,
            value: value[0],
        }
    }

    /// Forward pass on an observation: action probabilities and value.
    pub fn forward(&self, obs: &Observation) -> ([f64; N_ACTIONS], f64) {
        let cache = self.forward_raw(self.obs_norm.apply(obs));
        (cache.probs(), cache.value)
    }

    /// Greedy action, ties toward off.
    pub fn greedy_action(&self, obs: &Observation) -> crate::thermal::Action {
        let (p, _) = self.forward(obs);
        if p[1] > p[0] {
            crate::thermal::Action::On
        } else {
            crate::thermal::Action::Off
        }
    }

    /// Accumulate parameter gradients for one sample given the gradients
    /// at the heads. `grad` must have length [`N_PARAMS`].
    pub fn backward(
        &self,
        cache: &ForwardCache,
        dlogits: [f64; N_ACTIONS],
        dvalue: f64,
        grad: &mut [f64],
    ) {
        let p = &self.params;
        // Heads.
        let mut dh2 = [0.0; HIDDEN];
        for a in 0..N_ACTIONS {
            grad[BP + a] += dlogits[a];
            for i in 0..HIDDEN {
                grad[WP + a * HIDDEN + i] += dlogits[a] * cache.h2[i];
                dh2[i] += dlogits[a] * p[WP + a * HIDDEN + i];
            }
        }
        grad[BV] += dvalue;
        for i in 0..HIDDEN {
            grad[WV + i] += dvalue * cache.h2[i];
            dh2[i] += dvalue * p[WV + i];
        }
        // Hidden layer 2 (tanh').
        let mut dh1 = [0.0; HIDDEN];
        for i in 0..HIDDEN {
            let dz = dh2[i] * (1.0 - cache.h2[i] * cache.h2[i]);
            grad[B2 + i] += dz;
            for j in 0..HIDDEN {
                grad[W2 + i * HIDDEN + j] += dz * cache.h1[j];
                dh1[j] += dz * p[W2 + i * HIDDEN + j];
            }
        }
        // Hidden layer 1.
        for i in 0..HIDDEN {
            let dz = dh1[i] * (1.0 - cache.h1[i] * cache.h1[i]);
            grad[B1 + i] += dz;
            for j in 0..OBS_DIM {
                grad[W1 + i * OBS_DIM + j] += dz * cache.input[j];
            }
        }
    }
}

// --- persistence -----------------------------------------------------------

const FORMAT_TAG: &str = "heatplan-ppo-v1";

#[derive(Serialize, Deserialize)]
struct LayerFile {
    rows: usize,
    cols: usize,
    weights: Vec<f64>,
    bias: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PolicyFile {
    format: String,
    layers: Vec<LayerFile>,
    obs_norm: ObsNorm,
}

const LAYER_SPANS: [(usize, usize, usize, usize); 4] = [
    (HIDDEN, OBS_DIM, W1, B1),
    (HIDDEN, HIDDEN, W2, B2),
    (N_ACTIONS, HIDDEN, WP, BP),
    (1, HIDDEN, WV, BV),
];

/// Serialize a policy to the self-describing JSON format.
pub fn save_policy(net: &PolicyNet, path: &std::path::Path) -> Result<(), HeatplanError> {
    std::fs::write(path, policy_to_json(net)?)?;
    Ok(())
}

pub fn policy_to_json(net: &PolicyNet) -> Result<String, HeatplanError> {
    let layers = LAYER_SPANS
        .iter()
        .map(|&(rows, cols, w_off, b_off)| LayerFile {
            rows,
            cols,
            weights: net.params[w_off..w_off + rows * cols].to_vec(),
            bias: net.params[b_off..b_off + rows].to_vec(),
        })
        .collect();
    let file = PolicyFile {
        format: FORMAT_TAG.to_string(),
        layers,
        obs_norm: net.obs_norm,
    };
    Ok(serde_json::to_string(&file)?)
}

pub fn load_policy(path: &std::path::Path) -> Result<PolicyNet, HeatplanError> {
    policy_from_json(&std::fs::read_to_string(path)?)
}

pub fn policy_from_json(json: &str) -> Result<PolicyNet, HeatplanError> {
    let file: PolicyFile =
        serde_json::from_str(json).map_err(|e| HeatplanError::PolicyFormat(e.to_string()))?;
    if file.format != FORMAT_TAG {
        return Err(HeatplanError::PolicyFormat(format!(
            "unsupported format tag {:?}, expected {:?}",
            file.format, FORMAT_TAG
        )));
    }
    if file.layers.len() != LAYER_SPANS.len() {
        return Err(HeatplanError::PolicyFormat(format!(
            "expected {} layers, found {}",
            LAYER_SPANS.len(),
            file.layers.len()
        )));
    }
    let mut params = vec![0.0; N_PARAMS];
    for (layer, &(rows, cols, w_off, b_off)) in file.layers.iter().zip(&LAYER_SPANS) {
        if layer.rows != rows
            || layer.cols != cols
            || layer.weights.len() != rows * cols
            || layer.bias.len() != rows
        {
            return Err(HeatplanError::PolicyFormat(format!(
                "layer shape mismatch: expected {rows}x{cols}, found {}x{} ({} weights)",
                layer.rows,
                layer.cols,
                layer.weights.len()
            )));
        }
        params[w_off..w_off + rows * cols].copy_from_slice(&layer.weights);
        params[b_off..b_off + rows].copy_from_slice(&layer.bias);
    }
    Ok(PolicyNet {
        params,
        obs_norm: file.obs_norm,
    })
}
