//! Frame helpers shared by every module.
//!
//! World coordinates are NED (North, East, Down). The vehicle body frame is
//! x forward, y starboard, z down, so a pure yaw rotation relates the two.

use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(angle: f64) -> f64 {
    if angle > -PI && angle <= PI {
        return angle;
    }
    let mut wrapped = angle.rem_euclid(TAU);
    if wrapped > PI {
        wrapped -= TAU;
    }
    // rem_euclid can land on exactly -π after the subtraction above.
    if wrapped <= -PI {
        wrapped += TAU;
    }
    wrapped
}

/// Rotates a body-frame horizontal vector into the world frame.
#[inline]
pub fn body_to_world_xy(yaw: f64, x: f64, y: f64) -> (f64, f64) {
    let (s, c) = yaw.sin_cos();
    (c * x - s * y, s * x + c * y)
}

/// Rotates a world-frame horizontal vector into the body frame.
#[inline]
pub fn world_to_body_xy(yaw: f64, north: f64, east: f64) -> (f64, f64) {
    let (s, c) = yaw.sin_cos();
    (c * north + s * east, -s * north + c * east)
}

/// Yaw rotation of a 3-vector (z passes through).
pub fn rotate_yaw(yaw: f64, v: &Vector3<f64>) -> Vector3<f64> {
    let (x, y) = body_to_world_xy(yaw, v.x, v.y);
    Vector3::new(x, y, v.z)
}

/// Inverse yaw rotation of a 3-vector.
pub fn unrotate_yaw(yaw: f64, v: &Vector3<f64>) -> Vector3<f64> {
    let (x, y) = world_to_body_xy(yaw, v.x, v.y);
    Vector3::new(x, y, v.z)
}

/// A world-frame pose restricted to the four controlled degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pose4 {
    pub north: f64,
    pub east: f64,
    pub down: f64,
    pub yaw: f64,
}

impl Pose4 {
    pub const fn new(north: f64, east: f64, down: f64, yaw: f64) -> Self {
        Self { north, east, down, yaw }
    }

    pub fn position(&self) -> Vector3<f64> {
        Vector3::new(self.north, self.east, self.down)
    }

    pub fn from_position(p: &Vector3<f64>, yaw: f64) -> Self {
        Self::new(p.x, p.y, p.z, yaw)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.north, self.east, self.down, self.yaw]
    }
}
