//! Zero-shot online planner: UCB1 tree search over the binary action space
//! using the exact simulator for rollouts.
//!
//! Every decision runs a fresh search from the current state (no tree
//! reuse): selection by UCB1, expansion of one unvisited action, a
//! uniform-random rollout to the deadline through the exact thermal step,
//! and backup of the undiscounted reward-to-go along the path. The root
//! action with the highest visit count is executed; ties go to `Off`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::env::{run_schedule, EpisodeResult, EpisodeSpec, RewardParams};
use crate::error::HeatplanError;
use crate::thermal::{step_temperature, Action};

/// Search budget and constants for one planning decision.
#[derive(Debug, Clone, PartialEq)]
pub struct MctsConfig {
    /// Simulations per decision.
    pub n_simulations: usize,
    /// UCB1 exploration constant.
    pub c_ucb: f64,
    /// Base seed; each decision derives its stream as `seed ^ time_index`.
    pub rng_seed: u64,
    /// Rollout depth cap; `None` rolls to the episode deadline.
    pub max_rollout_depth: Option<usize>,
}

impl Default for MctsConfig {
    fn default() -> Self {
        Self {
            n_simulations: 25_000,
            c_ucb: std::f64::consts::SQRT_2,
            rng_seed: 0,
            max_rollout_depth: None,
        }
    }
}

/// Per-decision search summary, one JSON line per step when traced.
#[derive(Debug, Clone, Serialize)]
pub struct PlanTrace {
    pub step: usize,
    /// Root-child visit counts, `[n_off, n_on]`.
    pub root_visits: [u64; 2],
    /// Root-child mean action values, `[q_off, q_on]` (NaN if unvisited).
    pub q: [f64; 2],
    /// 0 = off, 1 = on.
    pub chosen: u8,
}

/// UCB1 selection score: `Q/n + c * sqrt(ln N / n)`, with unvisited
/// children forced to `+inf`.
pub fn ucb1_score(total_return: f64, visits: u64, parent_visits: u64, c: f64) -> f64 {
    if visits == 0 {
        return f64::INFINITY;
    }
    total_return / visits as f64 + c * ((parent_visits as f64).ln() / visits as f64).sqrt()
}

#[derive(Debug, Clone)]
struct Node {
    temp_c: f64,
    time_index: usize,
    visits: u64,
    total_return: f64,
    /// Reward of the transition that led into this node.
    edge_reward: f64,
    /// Child arena indices by action (0 = off, 1 = on).
    children: [Option<usize>; 2],
}

struct Search<'a> {
    arena: Vec<Node>,
    spec: &'a EpisodeSpec,
    reward: RewardParams,
    c_ucb: f64,
}

impl<'a> Search<'a> {
    fn new(spec: &'a EpisodeSpec, reward: RewardParams, c_ucb: f64) -> Self {
        Self {
            arena: Vec::new(),
            spec,
            reward,
            c_ucb,
        }
    }

    /// One environment transition with the identical reward rule the
    /// episode applies.
    fn transition(&self, temp_c: f64, time_index: usize, action: Action) -> (f64, f64) {
        let params = &self.spec.params;
        let power = action.power_w(params);
        let next = step_temperature(temp_c, power, params)
            .expect("search states stay finite under valid params");
        let mut reward = -self.reward.alpha * power * params.dt_s;
        if time_index + 1 == self.spec.deadline_steps {
            reward -= self.reward.beta * (self.spec.t_target_c - next).abs();
        }
        (next, reward)
    }

    fn is_terminal(&self, idx: usize) -> bool {
        self.arena[idx].time_index == self.spec.deadline_steps
    }

    fn rollout(
        &self,
        mut temp_c: f64,
        mut time_index: usize,
        rng: &mut ChaCha8Rng,
        depth_cap: usize,
    ) -> f64 {
        let mut ret = 0.0;
        let mut depth = 0;
        while time_index < self.spec.deadline_steps && depth < depth_cap {
            let action = if rng.random_bool(0.5) {
                Action::On
            } else {
                Action::Off
            };
            let (next, r) = self.transition(temp_c, time_index, action);
            ret += r;
            temp_c = next;
            time_index += 1;
            depth += 1;
        }
        ret
    }

    fn simulate_once(&mut self, root: usize, rng: &mut ChaCha8Rng, depth_cap: usize) {
        let mut path = vec![root];
        let mut idx = root;

        // Selection: descend while fully expanded.
        loop {
            if self.is_terminal(idx) {
                break;
            }
            let node = &self.arena[idx];
            if node.children.iter().any(|c| c.is_none()) {
                break;
            }
            let parent_visits = node.visits.max(1);
            let mut best = 0usize;
            let mut best_score = f64::NEG_INFINITY;
            for (a, child) in node.children.iter().enumerate() {
                let child = &self.arena[child.unwrap()];
                let score = ucb1_score(child.total_return, child.visits, parent_visits, self.c_ucb);
                if score > best_score {
                    best_score = score;
                    best = a;
                }
            }
            idx = self.arena[idx].children[best].unwrap();
            path.push(idx);
        }

        // Expansion + rollout (skipped at terminal leaves).
        let mut ret = 0.0;
        if !self.is_terminal(idx) {
            let action_index = self.arena[idx]
                .children
                .iter()
                .position(|c| c.is_none())
                .expect("selection stopped at a node with an unvisited action");
            let action = if action_index == 1 {
                Action::On
            } else {
                Action::Off
            };
            let (temp_c, time_index) = (self.arena[idx].temp_c, self.arena[idx].time_index);
            let (next_temp, edge_reward) = self.transition(temp_c, time_index, action);
            let child = Node {
                temp_c: next_temp,
                time_index: time_index + 1,
                visits: 0,
                total_return: 0.0,
                edge_reward,
                children: [None, None],
            };
            self.arena.push(child);
            let child_idx = self.arena.len() - 1;
            self.arena[idx].children[action_index] = Some(child_idx);
            path.push(child_idx);
            idx = child_idx;
            ret = self.rollout(next_temp, time_index + 1, rng, depth_cap);
        }
        let _ = idx;

        // Backup: each node accumulates the return from the edge into it
        // plus everything below.
        for &node_idx in path.iter().rev() {
            if node_idx != root {
                ret += self.arena[node_idx].edge_reward;
            }
            self.arena[node_idx].visits += 1;
            self.arena[node_idx].total_return += ret;
        }
    }
}

/// Plan one action from `(temp_c, time_index)` with a fresh search tree.
pub fn plan_action(
    temp_c: f64,
    time_index: usize,
    spec: &EpisodeSpec,
    reward: RewardParams,
    cfg: &MctsConfig,
) -> Action {
    plan_action_traced(temp_c, time_index, spec, reward, cfg).0
}

/// As [`plan_action`], also reporting root statistics.
pub fn plan_action_traced(
    temp_c: f64,
    time_index: usize,
    spec: &EpisodeSpec,
    reward: RewardParams,
    cfg: &MctsConfig,
) -> (Action, PlanTrace) {
    assert!(
        time_index < spec.deadline_steps,
        "planning past the deadline"
    );
    let mut search = Search::new(spec, reward, cfg.c_ucb);
    search.arena.push(Node {
        temp_c,
        time_index,
        visits: 0,
        total_return: 0.0,
        edge_reward: 0.0,
        children: [None, None],
    });
    let depth_cap = cfg.max_rollout_depth.unwrap_or(spec.deadline_steps);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ time_index as u64);
    for _ in 0..cfg.n_simulations {
        search.simulate_once(0, &mut rng, depth_cap);
    }

    let mut visits = [0u64; 2];
    let mut q = [f64::NAN; 2];
    for a in 0..2 {
        if let Some(child) = search.arena[0].children[a] {
            let child = &search.arena[child];
            visits[a] = child.visits;
            if child.visits > 0 {
                q[a] = child.total_return / child.visits as f64;
            }
        }
    }
    // Highest visit count; tie goes to Off.
    let chosen = if visits[1] > visits[0] {
        Action::On
    } else {
        Action::Off
    };
    let trace = PlanTrace {
        step: time_index,
        root_visits: visits,
        q,
        chosen: chosen.is_on() as u8,
    };
    (chosen, trace)
}

/// Closed-loop episode with a fresh search at every step.
pub fn run_mcts_episode(
    spec: &EpisodeSpec,
    reward: RewardParams,
    cfg: &MctsConfig,
) -> Result<EpisodeResult, HeatplanError> {
    run_mcts_episode_traced(spec, reward, cfg).map(|(r, _)| r)
}

/// As [`run_mcts_episode`], also returning one [`PlanTrace`] per step.
pub fn run_mcts_episode_traced(
    spec: &EpisodeSpec,
    reward: RewardParams,
    cfg: &MctsConfig,
) -> Result<(EpisodeResult, Vec<PlanTrace>), HeatplanError> {
    let mut ep = crate::env::Episode::new(spec.clone(), reward)?;
    let mut obs = ep.reset();
    let mut schedule = Vec::with_capacity(spec.deadline_steps);
    let mut traces = Vec::with_capacity(spec.deadline_steps);
    let mut t = 0;
    while !ep.is_done() {
        let (action, trace) = plan_action_traced(obs.t_c, t, spec, reward, cfg);
        let out = ep.step(action)?;
        obs = out.obs;
        schedule.push(action);
        traces.push(trace);
        t += 1;
    }
    Ok((run_schedule(spec, reward, &schedule)?, traces))
}
