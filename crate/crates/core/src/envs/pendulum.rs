//! Torque-limited pendulum swing-up.
//!
//! State observation is `(cos θ, sin θ, ω)` with θ measured from the
//! downward vertical; the upright goal is θ = π. Dynamics integrate with
//! semi-implicit Euler substeps, which keeps the torque-free energy drift
//! below 1e-3 over a hundred control steps.

use crate::envs::{check_finite_state, Env, EnvSpec};
use crate::error::Result;
use crate::numerics::rng::RngStream;

#[derive(Debug, Clone)]
pub struct Pendulum {
    spec: EnvSpec,
    pub mass: f64,
    pub length: f64,
    pub gravity: f64,
    pub dt: f64,
    pub substeps: usize,
    pub max_speed: f64,
}

impl Default for Pendulum {
    fn default() -> Self {
        let torque = 2.0;
        Self {
            spec: EnvSpec {
                name: "pendulum".into(),
                state_dim: 3,
                action_dim: 1,
                action_low: vec![-torque],
                action_high: vec![torque],
                horizon: 200,
                gamma: 0.99,
            },
            mass: 1.0,
            length: 1.0,
            gravity: 9.81,
            dt: 0.05,
            substeps: 20,
            max_speed: 8.0,
        }
    }
}

impl Pendulum {
    /// Angle wrapped to [-π, π].
    pub fn wrap_angle(theta: f64) -> f64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut t = (theta + std::f64::consts::PI) % two_pi;
        if t < 0.0 {
            t += two_pi;
        }
        t - std::f64::consts::PI
    }

    pub fn observation(theta: f64, omega: f64) -> Vec<f64> {
        vec![theta.cos(), theta.sin(), omega]
    }

    fn unpack(state: &[f64]) -> (f64, f64) {
        (state[1].atan2(state[0]), state[2])
    }

    /// Total mechanical energy of the torque-free pendulum.
    pub fn energy(&self, state: &[f64]) -> f64 {
        let (theta, omega) = Self::unpack(state);
        0.5 * self.mass * self.length * self.length * omega * omega
            - self.mass * self.gravity * self.length * theta.cos()
    }
}

impl Env for Pendulum {
    fn spec(&self) -> &EnvSpec {
        &self.spec
    }

    fn reset(&self, rng: &mut RngStream) -> Vec<f64> {
        let theta = rng.uniform_in(-std::f64::consts::PI, std::f64::consts::PI);
        let omega = rng.uniform_in(-1.0, 1.0);
        Self::observation(theta, omega)
    }

    fn step(&self, state: &[f64], action: &[f64]) -> Result<(Vec<f64>, f64, bool)> {
        check_finite_state(state, "pendulum")?;
        let u = self.spec.clipped_action(action)[0];
        let (mut theta, mut omega) = Self::unpack(state);
        let h = self.dt / self.substeps as f64;
        let inertia = self.mass * self.length * self.length;
        for _ in 0..self.substeps {
            let acc = -(self.gravity / self.length) * theta.sin() + u / inertia;
            omega = (omega + h * acc).clamp(-self.max_speed, self.max_speed);
            theta += h * omega;
        }
        // Cost is squared distance from upright plus speed and effort penalties.
        let from_upright = Self::wrap_angle(theta - std::f64::consts::PI);
        let reward = -(from_upright * from_upright + 0.1 * omega * omega + 0.001 * u * u);
        let next = Self::observation(theta, omega);
        check_finite_state(&next, "pendulum")?;
        Ok((next, reward, false))
    }

    fn reward_bound(&self) -> Option<f64> {
        let pi = std::f64::consts::PI;
        let u_max = self.spec.action_high[0];
        Some(pi * pi + 0.1 * self.max_speed * self.max_speed + 0.001 * u_max * u_max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::Env;

    #[test]
    fn upright_is_a_fixed_point() {
        let env = Pendulum::default();
        let up = Pendulum::observation(std::f64::consts::PI, 0.0);
        let (next, reward, done) = env.step(&up, &[0.0]).unwrap();
        for (a, b) in next.iter().zip(&up) {
            assert!((a - b).abs() < 1e-9, "{next:?} vs {up:?}");
        }
        assert!(reward.abs() < 1e-9);
        assert!(!done);
    }

    #[test]
    fn energy_conserved_without_torque() {
        let env = Pendulum::default();
        let mut state = Pendulum::observation(0.15, 0.0);
        let e0 = env.energy(&state);
        for _ in 0..100 {
            state = env.step(&state, &[0.0]).unwrap().0;
            assert!((env.energy(&state) - e0).abs() < 1e-3);
        }
    }

    #[test]
    fn step_is_deterministic() {
        let env = Pendulum::default();
        let s = Pendulum::observation(1.3, -0.4);
        let a = env.step(&s, &[1.5]).unwrap();
        let b = env.step(&s, &[1.5]).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn action_is_clipped_before_integration() {
        let env = Pendulum::default();
        let s = Pendulum::observation(0.7, 0.0);
        let huge = env.step(&s, &[50.0]).unwrap();
        let clipped = env.step(&s, &[2.0]).unwrap();
        assert_eq!(huge.0, clipped.0);
    }

    #[test]
    fn reset_angle_is_uniform() {
        // χ² goodness-of-fit for the angle marginal at the 1% level.
        let env = Pendulum::default();
        let mut rng = RngStream::from_seed(31415);
        let bins = 16;
        let n = 10_000;
        let mut counts = vec![0usize; bins];
        for _ in 0..n {
            let s = env.reset(&mut rng);
            let theta = s[1].atan2(s[0]); // in [-π, π]
            let frac = (theta + std::f64::consts::PI) / (2.0 * std::f64::consts::PI);
            let k = ((frac * bins as f64) as usize).min(bins - 1);
            counts[k] += 1;
        }
        let expected = n as f64 / bins as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        let crit = statrs::distribution::ContinuousCDF::inverse_cdf(
            &statrs::distribution::ChiSquared::new((bins - 1) as f64).unwrap(),
            0.99,
        );
        assert!(chi2 < crit, "chi2 {chi2} >= {crit}");
    }

    #[test]
    fn same_seed_same_initial_state() {
        let env = Pendulum::default();
        let a = env.reset(&mut RngStream::from_seed(7));
        let b = env.reset(&mut RngStream::from_seed(7));
        assert_eq!(a, b);
    }

    #[test]
    fn non_finite_state_fails_fast() {
        let env = Pendulum::default();
        assert!(env.step(&[f64::NAN, 0.0, 0.0], &[0.0]).is_err());
    }

    #[test]
    fn reward_bound_holds_on_random_transitions() {
        let env = Pendulum::default();
        let bound = env.reward_bound().unwrap();
        let mut rng = RngStream::from_seed(5);
        let mut s = env.reset(&mut rng);
        for _ in 0..500 {
            let u = rng.uniform_in(-2.0, 2.0);
            let (next, r, _) = env.step(&s, &[u]).unwrap();
            assert!(r.abs() <= bound);
            s = next;
        }
    }
}
