//! Two-loop model-based reinforcement learning.
//!
//! The inner loop is a dynamic-mirror-descent MPC planner (CEM with elite
//! fractions over a learned ensemble dynamics model); the outer loop is a
//! soft actor-critic learner whose replay data is enriched with the
//! planner's model rollouts. Analytic desk-scale environments and a regret
//! diagnostics harness round out the crate.

pub mod buffers;
pub mod config;
pub mod dmdmpc;
pub mod envs;
pub mod error;
pub mod model;
pub mod numerics;
pub mod regret;
pub mod sac;
pub mod trainer;

pub use error::{Error, Result};
