use serde::{Deserialize, Serialize};

use super::WrenchCommand;
use crate::error::{ensure, ValidationError};
use crate::geometry::{wrap_angle, Pose4};

const YAW: usize = 3;

/// Per-axis gains over `[x, y, z, ψ]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PidGains {
    pub kp: [f64; 4],
    pub ki: [f64; 4],
    pub kd: [f64; 4],
    /// Symmetric clamp on each integral accumulator [error·s].
    pub integral_limit: [f64; 4],
    /// Errors with magnitude strictly below this produce zero output on that axis.
    pub deadband: [f64; 4],
}

impl Default for PidGains {
    fn default() -> Self {
        Self {
            kp: [100.0, 100.0, 150.0, 40.0],
            ki: [4.0, 4.0, 5.0, 1.0],
            kd: [300.0, 300.0, 400.0, 90.0],
            integral_limit: [5.0, 5.0, 2.0, 1.0],
            deadband: [0.02, 0.02, 0.02, 0.005],
        }
    }
}

impl PidGains {
    pub fn validate(&self) -> Result<(), ValidationError> {
        let nonneg = |v: &[f64; 4]| v.iter().all(|g| *g >= 0.0 && g.is_finite());
        ensure(nonneg(&self.kp), "pid.kp", "gains must be finite and >= 0")?;
        ensure(nonneg(&self.ki), "pid.ki", "gains must be finite and >= 0")?;
        ensure(nonneg(&self.kd), "pid.kd", "gains must be finite and >= 0")?;
        ensure(
            self.integral_limit.iter().all(|l| *l > 0.0),
            "pid.integral_limit",
            "limits must be > 0",
        )?;
        ensure(nonneg(&self.deadband), "pid.deadband", "must be finite and >= 0")?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PidState {
    pub integral: [f64; 4],
    pub previous_error: [f64; 4],
    pub initialized: bool,
}

/// `waypoint − pose`, with the yaw component wrapped to the short way around.
pub fn pose_error(waypoint: &Pose4, pose: &Pose4) -> [f64; 4] {
    [
        waypoint.north - pose.north,
        waypoint.east - pose.east,
        waypoint.down - pose.down,
        wrap_angle(waypoint.yaw - pose.yaw),
    ]
}

/// One PID update on all four axes.
///
/// Inside the deadband an axis outputs zero and its integral is frozen.
/// Outside, the integral accumulates `e·dt` and is clamped to
/// `±integral_limit`. The derivative is a backward difference on the error,
/// zero on the first call, with the yaw difference wrapped.
///
/// # Panics
/// If `dt` is not positive.
pub fn pid_step(gains: &PidGains, state: &PidState, error: [f64; 4], dt: f64) -> (WrenchCommand, PidState) {
    assert!(dt > 0.0, "pid_step needs dt > 0, got {dt}");
    let mut next = PidState {
        initialized: true,
        ..*state
    };
    let mut output = [0.0; 4];
    for axis in 0..4 {
        let e = error[axis];
        let derivative = if state.initialized {
            let de = e - state.previous_error[axis];
            let de = if axis == YAW { wrap_angle(de) } else { de };
            de / dt
        } else {
            0.0
        };
        next.previous_error[axis] = e;
        if e.abs() < gains.deadband[axis] {
            continue;
        }
        let limit = gains.integral_limit[axis];
        next.integral[axis] = (state.integral[axis] + e * dt).clamp(-limit, limit);
        output[axis] = gains.kp[axis] * e + gains.ki[axis] * next.integral[axis] + gains.kd[axis] * derivative;
    }
    (WrenchCommand::from_array(output, super::Frame::World), next)
}
