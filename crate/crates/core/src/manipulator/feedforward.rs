use serde::{Deserialize, Serialize};

use super::ArmGeometry;
use crate::error::{ensure, ValidationError};

/// Diagonal gains of the acceleration-level joint controller.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArmControlGains {
    pub kp_joint: [f64; 3],
    pub kv_joint: [f64; 3],
}

impl Default for ArmControlGains {
    fn default() -> Self {
        Self {
            kp_joint: [4.0; 3],
            kv_joint: [2.0; 3],
        }
    }
}

impl ArmControlGains {
    pub fn validate(&self) -> Result<(), ValidationError> {
        ensure(
            self.kp_joint.iter().all(|k| *k >= 0.0),
            "arm_gains.kp_joint",
            "must be >= 0",
        )?;
        ensure(
            self.kv_joint.iter().all(|k| *k >= 0.0),
            "arm_gains.kv_joint",
            "must be >= 0",
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JointState {
    pub q: [f64; 3],
    pub q_dot: [f64; 3],
    pub q_ddot: [f64; 3],
    pub time: f64,
}

impl JointState {
    pub fn at_rest(q: [f64; 3]) -> Self {
        Self { q, ..Self::default() }
    }
}

/// Desired joint position, velocity and acceleration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JointTrajectoryPoint {
    pub q_target: [f64; 3],
    pub q_dot_target: [f64; 3],
    pub q_ddot_target: [f64; 3],
}

impl JointTrajectoryPoint {
    pub fn hold(q: [f64; 3]) -> Self {
        Self {
            q_target: q,
            ..Self::default()
        }
    }
}

/// Commanded joint acceleration: feed-forward of the reference acceleration
/// plus velocity and position feedback, clamped per joint.
pub fn accel_feedforward(
    gains: &ArmControlGains,
    traj: &JointTrajectoryPoint,
    state: &JointState,
    geom: &ArmGeometry,
) -> [f64; 3] {
    std::array::from_fn(|j| {
        let cmd = traj.q_ddot_target[j]
            + gains.kv_joint[j] * (traj.q_dot_target[j] - state.q_dot[j])
            + gains.kp_joint[j] * (traj.q_target[j] - state.q[j]);
        let limit = geom.joint_accel_limit[j];
        cmd.clamp(-limit, limit)
    })
}

/// Semi-implicit integration of an acceleration command; a joint that hits
/// a limit is pinned there with zero velocity.
///
/// # Panics
/// If `dt` is not positive.
pub fn integrate_joint_command(state: &JointState, q_ddot_cmd: &[f64; 3], geom: &ArmGeometry, dt: f64) -> JointState {
    assert!(dt > 0.0, "integrate_joint_command needs dt > 0, got {dt}");
    let mut next = JointState {
        q_ddot: *q_ddot_cmd,
        time: state.time + dt,
        ..*state
    };
    for (j, accel) in q_ddot_cmd.iter().enumerate() {
        next.q_dot[j] += accel * dt;
        next.q[j] += next.q_dot[j] * dt;
        let [lo, hi] = geom.joint_limits[j];
        if next.q[j] <= lo {
            next.q[j] = lo;
            next.q_dot[j] = 0.0;
        } else if next.q[j] >= hi {
            next.q[j] = hi;
            next.q_dot[j] = 0.0;
        }
    }
    next
}
