//! Analytic ground-truth environments: pendulum swing-up, 2R planar leg
//! trajectory tracking, and a linear-quadratic system for regret diagnostics.
//!
//! Environments are value-semantic: `step` is a pure function of
//! `(state, action)` and repeated calls agree bitwise. Episodes end on the
//! fixed horizon only (tracked by the rollout driver), never early — except
//! that a non-finite state fails fast with an error.

pub mod leg2r;
pub mod lq;
pub mod pendulum;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::rng::RngStream;

pub use leg2r::{leg_forward_kinematics, leg_reward, semi_ellipse_target, LegTarget, TwoLinkLeg};
pub use lq::LqEnv;
pub use pendulum::Pendulum;

/// Static description of an environment's interface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvSpec {
    pub name: String,
    pub state_dim: usize,
    pub action_dim: usize,
    pub action_low: Vec<f64>,
    pub action_high: Vec<f64>,
    /// Episode length in control steps.
    pub horizon: usize,
    pub gamma: f64,
}

impl EnvSpec {
    pub fn validate(&self) -> Result<()> {
        if self.state_dim == 0 || self.action_dim == 0 {
            return Err(Error::Parameter("env dims must be >= 1".into()));
        }
        if self.action_low.len() != self.action_dim || self.action_high.len() != self.action_dim {
            return Err(Error::Dimension("action bound lengths".into()));
        }
        if self
            .action_low
            .iter()
            .zip(&self.action_high)
            .any(|(lo, hi)| !(lo < hi))
        {
            return Err(Error::Parameter("action bounds must satisfy low < high".into()));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::Parameter("gamma must be in (0,1)".into()));
        }
        if self.horizon == 0 {
            return Err(Error::Parameter("horizon must be >= 1".into()));
        }
        Ok(())
    }

    pub fn clipped_action(&self, action: &[f64]) -> Vec<f64> {
        action
            .iter()
            .zip(self.action_low.iter().zip(&self.action_high))
            .map(|(u, (lo, hi))| u.clamp(*lo, *hi))
            .collect()
    }
}

/// One (state, action, reward, next-state, done) tuple; the unit of replay.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Transition {
    pub state: Vec<f64>,
    pub action: Vec<f64>,
    pub reward: f64,
    pub next_state: Vec<f64>,
    pub done: bool,
}

impl Transition {
    pub fn is_finite(&self) -> bool {
        self.state.iter().all(|v| v.is_finite())
            && self.action.iter().all(|v| v.is_finite())
            && self.reward.is_finite()
            && self.next_state.iter().all(|v| v.is_finite())
    }
}

pub trait Env {
    fn spec(&self) -> &EnvSpec;

    /// Draw an initial state from the environment's configured distribution.
    fn reset(&self, rng: &mut RngStream) -> Vec<f64>;

    /// Pure transition: clips the action to bounds, integrates, returns
    /// `(next_state, reward, done)`. Errors on non-finite states.
    fn step(&self, state: &[f64], action: &[f64]) -> Result<(Vec<f64>, f64, bool)>;

    /// Upper bound on |reward| where the environment has one.
    fn reward_bound(&self) -> Option<f64>;
}

/// Environment selector (value enum so trainers stay clonable).
#[derive(Debug, Clone)]
pub enum EnvKind {
    Pendulum(Pendulum),
    Leg(TwoLinkLeg),
    Lq(LqEnv),
}

impl EnvKind {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "pendulum" => Ok(EnvKind::Pendulum(Pendulum::default())),
            "leg2r" => Ok(EnvKind::Leg(TwoLinkLeg::default())),
            "lq" => Ok(EnvKind::Lq(LqEnv::default_instance())),
            other => Err(Error::Config(format!(
                "unknown env '{other}' (expected pendulum, leg2r, or lq)"
            ))),
        }
    }
}

impl Env for EnvKind {
    fn spec(&self) -> &EnvSpec {
        match self {
            EnvKind::Pendulum(e) => e.spec(),
            EnvKind::Leg(e) => e.spec(),
            EnvKind::Lq(e) => e.spec(),
        }
    }

    fn reset(&self, rng: &mut RngStream) -> Vec<f64> {
        match self {
            EnvKind::Pendulum(e) => e.reset(rng),
            EnvKind::Leg(e) => e.reset(rng),
            EnvKind::Lq(e) => e.reset(rng),
        }
    }

    fn step(&self, state: &[f64], action: &[f64]) -> Result<(Vec<f64>, f64, bool)> {
        match self {
            EnvKind::Pendulum(e) => e.step(state, action),
            EnvKind::Leg(e) => e.step(state, action),
            EnvKind::Lq(e) => e.step(state, action),
        }
    }

    fn reward_bound(&self) -> Option<f64> {
        match self {
            EnvKind::Pendulum(e) => e.reward_bound(),
            EnvKind::Leg(e) => e.reward_bound(),
            EnvKind::Lq(e) => e.reward_bound(),
        }
    }
}

pub(crate) fn check_finite_state(state: &[f64], what: &str) -> Result<()> {
    if state.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("{what}: non-finite state")))
    }
}
