//! Linear-quadratic synthetic system: `x' = A x + B u` exactly, reward
//! `-(xᵀQx + uᵀRu)`. The exact `(A, B, Q, R)` are exposed so an external
//! oracle can compute the planner's optimum.

use crate::envs::{check_finite_state, Env, EnvSpec};
use crate::error::{Error, Result};
use crate::numerics::matrix::Matrix;
use crate::numerics::rng::RngStream;

/// Initial-state distribution.
#[derive(Debug, Clone)]
pub enum LqInit {
    /// Degenerate ρ₀ = δ(x₀).
    Delta(Vec<f64>),
    /// Uniform over a centered box with the given per-dim half-width.
    Box(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct LqEnv {
    spec: EnvSpec,
    pub a: Matrix,
    pub b: Matrix,
    pub q: Matrix,
    pub r: Matrix,
    pub init: LqInit,
}

impl LqEnv {
    pub fn new(a: Matrix, b: Matrix, q: Matrix, r: Matrix, init: LqInit, gamma: f64, horizon: usize) -> Result<Self> {
        let n = a.rows();
        let m = b.cols();
        if a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n || r.rows() != m || r.cols() != m {
            return Err(Error::Dimension("lq: inconsistent system shapes".into()));
        }
        let spec = EnvSpec {
            name: "lq".into(),
            state_dim: n,
            action_dim: m,
            action_low: vec![-10.0; m],
            action_high: vec![10.0; m],
            horizon,
            gamma,
        };
        spec.validate()?;
        Ok(Self { spec, a, b, q, r, init })
    }

    /// The stock diagnostics instance: a damped rotation with single-input
    /// control, spectral norm of `A` below one.
    pub fn default_instance() -> Self {
        let a = Matrix::from_rows(&[vec![0.95, 0.08], vec![-0.08, 0.95]]).unwrap();
        let b = Matrix::from_rows(&[vec![0.0], vec![0.1]]).unwrap();
        let q = Matrix::identity(2);
        let r = Matrix::identity(1).scale(0.1);
        Self::new(a, b, q, r, LqInit::Box(vec![3.0, 3.0]), 0.95, 50).unwrap()
    }

    /// Same system with additively perturbed dynamics (used as an imperfect
    /// model of this environment).
    pub fn perturbed(&self, delta_a: &Matrix, delta_b: &Matrix) -> Result<Self> {
        let mut out = self.clone();
        out.a = self.a.add(delta_a)?;
        out.b = self.b.add(delta_b)?;
        Ok(out)
    }

    pub fn cost(&self, x: &[f64], u: &[f64]) -> f64 {
        self.q.quad_form(x).unwrap() + self.r.quad_form(u).unwrap()
    }

    /// Next state without reward bookkeeping.
    pub fn dynamics(&self, x: &[f64], u: &[f64]) -> Vec<f64> {
        let ax = self.a.matvec(x).unwrap();
        let bu = self.b.matvec(u).unwrap();
        ax.iter().zip(&bu).map(|(p, q)| p + q).collect()
    }
}

impl Env for LqEnv {
    fn spec(&self) -> &EnvSpec {
        &self.spec
    }

    fn reset(&self, rng: &mut RngStream) -> Vec<f64> {
        match &self.init {
            LqInit::Delta(x0) => x0.clone(),
            LqInit::Box(half) => half.iter().map(|h| rng.uniform_in(-h, *h)).collect(),
        }
    }

    fn step(&self, state: &[f64], action: &[f64]) -> Result<(Vec<f64>, f64, bool)> {
        check_finite_state(state, "lq")?;
        if state.len() != self.spec.state_dim {
            return Err(Error::Dimension("lq: state length".into()));
        }
        let u = self.spec.clipped_action(action);
        let next = self.dynamics(state, &u);
        let reward = -self.cost(state, &u);
        check_finite_state(&next, "lq")?;
        Ok((next, reward, false))
    }

    fn reward_bound(&self) -> Option<f64> {
        None
    }
}
