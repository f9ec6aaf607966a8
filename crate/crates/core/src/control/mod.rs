//! World-frame PID station keeping, the yaw rotation into the body frame, and
//! thruster allocation.

mod allocation;
mod pid;
mod station;

pub use allocation::{allocate_thrusters, AllocationError, ThrusterLayout, THRUSTER_COUNT};
pub use pid::{pid_step, pose_error, PidGains, PidState};
pub use station::{ControlOutput, PositionController};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    World,
    Body,
}

/// Force/moment command over the four controlled axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrenchCommand {
    pub fx: f64,
    pub fy: f64,
    pub fz: f64,
    pub tau_yaw: f64,
    pub frame: Frame,
}

impl WrenchCommand {
    pub const fn zero(frame: Frame) -> Self {
        Self {
            fx: 0.0,
            fy: 0.0,
            fz: 0.0,
            tau_yaw: 0.0,
            frame,
        }
    }

    pub const fn world(fx: f64, fy: f64, fz: f64, tau_yaw: f64) -> Self {
        Self {
            fx,
            fy,
            fz,
            tau_yaw,
            frame: Frame::World,
        }
    }

    pub const fn body(fx: f64, fy: f64, fz: f64, tau_yaw: f64) -> Self {
        Self {
            fx,
            fy,
            fz,
            tau_yaw,
            frame: Frame::Body,
        }
    }

    pub fn from_array(v: [f64; 4], frame: Frame) -> Self {
        Self {
            fx: v[0],
            fy: v[1],
            fz: v[2],
            tau_yaw: v[3],
            frame,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.fx, self.fy, self.fz, self.tau_yaw]
    }

    pub fn norm(&self) -> f64 {
        self.as_array().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|c| c.is_finite())
    }
}

/// Rotates a world-frame wrench into the body frame using heading `yaw`.
/// Heave force and yaw moment pass through unchanged.
///
/// # Panics
/// If `wrench` is not a world-frame command.
pub fn world_to_body(wrench: &WrenchCommand, yaw: f64) -> WrenchCommand {
    assert_eq!(wrench.frame, Frame::World, "world_to_body expects a world-frame wrench");
    let (s, c) = yaw.sin_cos();
    WrenchCommand::body(
        c * wrench.fx + s * wrench.fy,
        -s * wrench.fx + c * wrench.fy,
        wrench.fz,
        wrench.tau_yaw,
    )
}

/// Inverse of [`world_to_body`].
pub fn body_to_world(wrench: &WrenchCommand, yaw: f64) -> WrenchCommand {
    assert_eq!(wrench.frame, Frame::Body, "body_to_world expects a body-frame wrench");
    let (s, c) = yaw.sin_cos();
    WrenchCommand::world(
        c * wrench.fx - s * wrench.fy,
        s * wrench.fx + c * wrench.fy,
        wrench.fz,
        wrench.tau_yaw,
    )
}
