//! Geometric kinematics of the 3-DOF arm.
//!
//! The chain is a base yaw joint θ1 followed by a planar two-link elbow
//! (θ2, θ3) with link lengths `l1`, `l2`. In the arm-base frame:
//!
//! ```text
//! ρ = l1·cos θ2 + l2·cos(θ2 + θ3)
//! z = l1·sin θ2 + l2·sin(θ2 + θ3)
//! x = ρ·cos θ1,  y = ρ·sin θ1
//! ```
//!
//! The inverse takes the elbow branch θ3 ≤ 0. The arm-base frame shares the
//! vehicle body axes (x forward, y starboard, z down) rotated by the mount yaw,
//! so a positive θ2 tilts the arm toward the seafloor.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{ensure, ValidationError};
use crate::geometry::{rotate_yaw, unrotate_yaw, wrap_angle, Pose4};

/// Reach tolerance on the annulus bounds [m].
pub const REACH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArmGeometry {
    pub l1: f64,
    pub l2: f64,
    /// Arm base position in the vehicle body frame [m].
    pub mount_position: [f64; 3],
    /// Arm base yaw relative to the vehicle body [rad].
    pub mount_yaw: f64,
    /// Per-joint `[min, max]` [rad].
    pub joint_limits: [[f64; 2]; 3],
    /// Per-joint acceleration bound [rad/s²].
    pub joint_accel_limit: [f64; 3],
}

impl Default for ArmGeometry {
    /// Illustrative forward-bottom mount.
    fn default() -> Self {
        use std::f64::consts::PI;
        Self {
            l1: 0.4,
            l2: 0.3,
            mount_position: [0.3, 0.0, 0.4],
            mount_yaw: 0.0,
            joint_limits: [[-PI, PI], [-1.2, 2.8], [-PI, 0.0]],
            joint_accel_limit: [2.0, 2.0, 2.0],
        }
    }
}

impl ArmGeometry {
    pub fn validate(&self) -> Result<(), ValidationError> {
        ensure(self.l1 > 0.0, "arm.l1", "must be > 0")?;
        ensure(self.l2 > 0.0, "arm.l2", "must be > 0")?;
        ensure(
            self.joint_limits.iter().all(|[lo, hi]| lo < hi),
            "arm.joint_limits",
            "min must be < max for every joint",
        )?;
        ensure(
            self.joint_accel_limit.iter().all(|a| *a > 0.0),
            "arm.joint_accel_limit",
            "must be > 0",
        )?;
        Ok(())
    }

    pub fn mount(&self) -> Vector3<f64> {
        Vector3::from(self.mount_position)
    }

    pub fn max_reach(&self) -> f64 {
        self.l1 + self.l2
    }

    pub fn min_reach(&self) -> f64 {
        (self.l1 - self.l2).abs()
    }

    pub fn within_limits(&self, q: &[f64; 3]) -> bool {
        q.iter()
            .zip(&self.joint_limits)
            .all(|(v, [lo, hi])| *v >= *lo && *v <= *hi)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KinematicsError {
    #[error("target at distance {distance:.6} m outside reach [{min:.6}, {max:.6}]")]
    Unreachable { distance: f64, min: f64, max: f64 },
    #[error("joint {joint} solution {value:.6} rad outside [{min:.6}, {max:.6}]")]
    JointLimitViolation {
        joint: usize,
        value: f64,
        min: f64,
        max: f64,
    },
}

/// Joint angles placing the tool at `target` (arm-base frame).
pub fn inverse_kinematics(geom: &ArmGeometry, target: &Vector3<f64>) -> Result<[f64; 3], KinematicsError> {
    let (l1, l2) = (geom.l1, geom.l2);
    let (x, y, z) = (target.x, target.y, target.z);
    let r2 = x * x + y * y + z * z;
    let distance = r2.sqrt();
    if distance > geom.max_reach() + REACH_TOLERANCE || distance < geom.min_reach() - REACH_TOLERANCE {
        return Err(KinematicsError::Unreachable {
            distance,
            min: geom.min_reach(),
            max: geom.max_reach(),
        });
    }
    // Inside the tolerance band the cosine may overshoot ±1 by rounding.
    let cos_elbow = ((r2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2)).clamp(-1.0, 1.0);
    let theta1 = y.atan2(x);
    let theta3 = -cos_elbow.acos();
    let theta2 = z.atan2(x.hypot(y)) - (l2 * theta3.sin()).atan2(l1 + l2 * theta3.cos());
    let q = [theta1, theta2, theta3];
    check_limits(geom, &q)?;
    Ok(q)
}

fn check_limits(geom: &ArmGeometry, q: &[f64; 3]) -> Result<(), KinematicsError> {
    for (joint, (value, [min, max])) in q.iter().zip(&geom.joint_limits).enumerate() {
        if value < min || value > max {
            return Err(KinematicsError::JointLimitViolation {
                joint,
                value: *value,
                min: *min,
                max: *max,
            });
        }
    }
    Ok(())
}

/// Tool position in the arm-base frame.
pub fn forward_kinematics(geom: &ArmGeometry, q: &[f64; 3]) -> Vector3<f64> {
    let [t1, t2, t3] = *q;
    let planar = geom.l1 * t2.cos() + geom.l2 * (t2 + t3).cos();
    let z = geom.l1 * t2.sin() + geom.l2 * (t2 + t3).sin();
    Vector3::new(planar * t1.cos(), planar * t1.sin(), z)
}

/// World position and heading of the suction cup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndEffectorPose {
    pub position: Vector3<f64>,
    /// Yaw of the end-effector frame in the world [rad].
    pub heading: f64,
}

/// End-effector pose composed through the mount and the vehicle pose.
pub fn end_effector_pose(geom: &ArmGeometry, q: &[f64; 3], vehicle: &Pose4) -> EndEffectorPose {
    let body = geom.mount() + rotate_yaw(geom.mount_yaw, &forward_kinematics(geom, q));
    EndEffectorPose {
        position: vehicle.position() + rotate_yaw(vehicle.yaw, &body),
        heading: wrap_angle(vehicle.yaw + geom.mount_yaw + q[0]),
    }
}

pub fn end_effector_world_position(geom: &ArmGeometry, q: &[f64; 3], vehicle: &Pose4) -> Vector3<f64> {
    end_effector_pose(geom, q, vehicle).position
}

/// Expresses a world point in the arm-base frame of a vehicle at `vehicle`.
pub fn world_to_arm_frame(geom: &ArmGeometry, vehicle: &Pose4, point: &Vector3<f64>) -> Vector3<f64> {
    let body = unrotate_yaw(vehicle.yaw, &(point - vehicle.position()));
    unrotate_yaw(geom.mount_yaw, &(body - geom.mount()))
}
