//! Planar two-link leg tracking a semi-elliptical foot trajectory.
//!
//! The hip is pinned at the origin, gravity points along -y, and the foot
//! target alternates between a straight stance chord on the ground line and
//! an elliptical swing arc above it. State is `(q1, q2, q̇1, q̇2, phase)`,
//! actions are raw joint torques applied at the control rate with
//! semi-implicit Euler substeps.

use crate::envs::{check_finite_state, Env, EnvSpec};
use crate::error::Result;
use crate::numerics::rng::RngStream;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Desired foot position/velocity at a phase of the gait cycle.
#[derive(Debug, Clone)]
pub struct LegTarget {
    pub position: [f64; 2],
    pub velocity: [f64; 2],
    pub phase: f64,
}

/// Forward kinematics of the two-link chain:
/// `p = (l₁cos q₁ + l₂cos(q₁+q₂), l₁sin q₁ + l₂sin(q₁+q₂))` and its
/// analytic 2×2 Jacobian (rows: x,y; columns: q₁,q₂).
pub fn leg_forward_kinematics(q: &[f64; 2], lengths: &[f64; 2]) -> ([f64; 2], [[f64; 2]; 2]) {
    let (l1, l2) = (lengths[0], lengths[1]);
    let (s1, c1) = q[0].sin_cos();
    let (s12, c12) = (q[0] + q[1]).sin_cos();
    let p = [l1 * c1 + l2 * c12, l1 * s1 + l2 * s12];
    let jac = [
        [-l1 * s1 - l2 * s12, -l2 * s12],
        [l1 * c1 + l2 * c12, l2 * c12],
    ];
    (p, jac)
}

/// Tracking reward in (0, 1]: position and velocity error terms with
/// weights 0.8 / 0.2.
pub fn leg_reward(p: &[f64; 2], p_d: &[f64; 2], pdot: &[f64; 2], pdot_d: &[f64; 2]) -> f64 {
    let dp = (p[0] - p_d[0]).powi(2) + (p[1] - p_d[1]).powi(2);
    let dv = (pdot[0] - pdot_d[0]).powi(2) + (pdot[1] - pdot_d[1]).powi(2);
    0.8 * (-dp).exp() + 0.2 * (-dv).exp()
}

/// Point on the gait path at `phase` ∈ [0, 2π): first half is the stance
/// chord swept left-to-right along the ground line, second half the
/// elliptical swing arc back. Velocity is the analytic time derivative for
/// the given cycle `period`.
pub fn semi_ellipse_target(
    phase: f64,
    center: &[f64; 2],
    semi_axes: &[f64; 2],
    period: f64,
) -> LegTarget {
    let phase = phase.rem_euclid(TWO_PI);
    let (a, b) = (semi_axes[0], semi_axes[1]);
    let phase_rate = TWO_PI / period;
    let (position, velocity) = if phase < std::f64::consts::PI {
        let x = center[0] - a + 2.0 * a * (phase / std::f64::consts::PI);
        let vx = (2.0 * a / std::f64::consts::PI) * phase_rate;
        ([x, center[1]], [vx, 0.0])
    } else {
        let s = phase - std::f64::consts::PI;
        let (sin_s, cos_s) = s.sin_cos();
        (
            [center[0] + a * cos_s, center[1] + b * sin_s],
            [-a * sin_s * phase_rate, b * cos_s * phase_rate],
        )
    };
    LegTarget {
        position,
        velocity,
        phase,
    }
}

/// Closed-form inverse kinematics; `elbow` selects the knee bend direction.
pub fn leg_inverse_kinematics(p: &[f64; 2], lengths: &[f64; 2], elbow: f64) -> Option<[f64; 2]> {
    let (l1, l2) = (lengths[0], lengths[1]);
    let r2 = p[0] * p[0] + p[1] * p[1];
    let c2 = (r2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
    if !(-1.0..=1.0).contains(&c2) {
        return None;
    }
    let q2 = elbow.signum() * c2.acos();
    let q1 = p[1].atan2(p[0]) - (l2 * q2.sin()).atan2(l1 + l2 * q2.cos());
    Some([q1, q2])
}

#[derive(Debug, Clone)]
pub struct TwoLinkLeg {
    spec: EnvSpec,
    pub lengths: [f64; 2],
    pub masses: [f64; 2],
    pub gravity: f64,
    pub damping: f64,
    pub dt: f64,
    pub substeps: usize,
    pub max_speed: f64,
    pub ellipse_center: [f64; 2],
    pub semi_axes: [f64; 2],
    pub period: f64,
    /// Joint noise half-width applied around the nominal reset pose.
    pub reset_noise: f64,
}

impl Default for TwoLinkLeg {
    fn default() -> Self {
        let torque = 8.0;
        let dt: f64 = 0.002;
        let period = 1.0;
        Self {
            spec: EnvSpec {
                name: "leg2r".into(),
                state_dim: 5,
                action_dim: 2,
                action_low: vec![-torque; 2],
                action_high: vec![torque; 2],
                horizon: (period / dt).round() as usize,
                gamma: 0.995,
            },
            lengths: [0.5, 0.5],
            masses: [0.5, 0.5],
            gravity: 9.81,
            damping: 0.1,
            dt,
            substeps: 10,
            max_speed: 25.0,
            ellipse_center: [0.0, -0.75],
            semi_axes: [0.25, 0.12],
            period,
            reset_noise: 0.05,
        }
    }
}

impl TwoLinkLeg {
    pub fn target_at(&self, phase: f64) -> LegTarget {
        semi_ellipse_target(phase, &self.ellipse_center, &self.semi_axes, self.period)
    }

    /// Nominal joint pose: foot at the stance-chord start.
    pub fn nominal_pose(&self) -> [f64; 2] {
        let start = self.target_at(0.0).position;
        leg_inverse_kinematics(&start, &self.lengths, -1.0)
            .expect("stance start inside the workspace")
    }

    /// Mass matrix, Coriolis vector, and gravity vector for point masses at
    /// the link ends.
    fn dynamics_terms(&self, q: &[f64; 2], qd: &[f64; 2]) -> ([[f64; 2]; 2], [f64; 2], [f64; 2]) {
        let (l1, l2) = (self.lengths[0], self.lengths[1]);
        let (m1, m2) = (self.masses[0], self.masses[1]);
        let (s2, c2) = q[1].sin_cos();
        let m11 = (m1 + m2) * l1 * l1 + m2 * l2 * l2 + 2.0 * m2 * l1 * l2 * c2;
        let m12 = m2 * l2 * l2 + m2 * l1 * l2 * c2;
        let m22 = m2 * l2 * l2;
        let coriolis = [
            -m2 * l1 * l2 * s2 * (2.0 * qd[0] * qd[1] + qd[1] * qd[1]),
            m2 * l1 * l2 * s2 * qd[0] * qd[0],
        ];
        let c1 = q[0].cos();
        let c12 = (q[0] + q[1]).cos();
        let grav = [
            self.gravity * (m1 * l1 * c1 + m2 * (l1 * c1 + l2 * c12)),
            self.gravity * m2 * l2 * c12,
        ];
        ([[m11, m12], [m12, m22]], coriolis, grav)
    }

    /// Foot position/velocity from a state vector.
    pub fn foot_state(&self, state: &[f64]) -> ([f64; 2], [f64; 2]) {
        let q = [state[0], state[1]];
        let qd = [state[2], state[3]];
        let (p, jac) = leg_forward_kinematics(&q, &self.lengths);
        let v = [
            jac[0][0] * qd[0] + jac[0][1] * qd[1],
            jac[1][0] * qd[0] + jac[1][1] * qd[1],
        ];
        (p, v)
    }

    /// Tracking error ‖p - p_d‖ at the state's phase.
    pub fn tracking_error(&self, state: &[f64]) -> f64 {
        let (p, _) = self.foot_state(state);
        let t = self.target_at(state[4]);
        ((p[0] - t.position[0]).powi(2) + (p[1] - t.position[1]).powi(2)).sqrt()
    }
}

impl Env for TwoLinkLeg {
    fn spec(&self) -> &EnvSpec {
        &self.spec
    }

    fn reset(&self, rng: &mut RngStream) -> Vec<f64> {
        let nominal = self.nominal_pose();
        let q1 = nominal[0] + rng.uniform_in(-self.reset_noise, self.reset_noise);
        let q2 = nominal[1] + rng.uniform_in(-self.reset_noise, self.reset_noise);
        vec![q1, q2, 0.0, 0.0, 0.0]
    }

    fn step(&self, state: &[f64], action: &[f64]) -> Result<(Vec<f64>, f64, bool)> {
        check_finite_state(state, "leg2r")?;
        let tau = self.spec.clipped_action(action);
        let mut q = [state[0], state[1]];
        let mut qd = [state[2], state[3]];
        let h = self.dt / self.substeps as f64;
        for _ in 0..self.substeps {
            let (m, cor, grav) = self.dynamics_terms(&q, &qd);
            let rhs = [
                tau[0] - cor[0] - grav[0] - self.damping * qd[0],
                tau[1] - cor[1] - grav[1] - self.damping * qd[1],
            ];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let qdd = [
                (m[1][1] * rhs[0] - m[0][1] * rhs[1]) / det,
                (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
            ];
            qd[0] = (qd[0] + h * qdd[0]).clamp(-self.max_speed, self.max_speed);
            qd[1] = (qd[1] + h * qdd[1]).clamp(-self.max_speed, self.max_speed);
            q[0] += h * qd[0];
            q[1] += h * qd[1];
        }
        let phase = (state[4] + TWO_PI * self.dt / self.period).rem_euclid(TWO_PI);
        let next = vec![q[0], q[1], qd[0], qd[1], phase];
        check_finite_state(&next, "leg2r")?;

        let (p, v) = self.foot_state(&next);
        let target = self.target_at(phase);
        let reward = leg_reward(&p, &target.position, &v, &target.velocity);
        Ok((next, reward, false))
    }

    fn reward_bound(&self) -> Option<f64> {
        Some(1.0)
    }
}
