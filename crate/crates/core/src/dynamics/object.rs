//! The free target object and the switchable rigid attachment that emulates
//! a suction cup.

use nalgebra::Vector3;
use thiserror::Error;

use crate::dynamics::Environment;
use crate::geometry::{rotate_yaw, unrotate_yaw};
use crate::manipulator::EndEffectorPose;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeObject {
    /// NED position [m].
    pub position: Vector3<f64>,
    pub attached: bool,
    /// Offset from the end effector, end-effector frame. Meaningful only when attached.
    pub attach_offset: Vector3<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraspError {
    #[error("attach rejected: gap {gap:.4} m exceeds {max_gap:.4} m")]
    AttachRejected { gap: f64, max_gap: f64 },
    #[error("object is not attached")]
    NotAttached,
    #[error("object is already attached")]
    AlreadyAttached,
}

impl FreeObject {
    pub fn resting_at(position: Vector3<f64>) -> Self {
        Self {
            position,
            attached: false,
            attach_offset: Vector3::zeros(),
        }
    }

    /// Offset from `ee` to the object in the end-effector frame.
    pub fn relative_to(&self, ee: &EndEffectorPose) -> Vector3<f64> {
        unrotate_yaw(ee.heading, &(self.position - ee.position))
    }

    pub fn is_resting(&self, env: &Environment) -> bool {
        !self.attached && self.position.z >= env.seafloor_depth
    }
}

/// Creates the rigid joint if the object lies within `max_gap` of the end effector.
pub fn attach_object(object: &FreeObject, ee: &EndEffectorPose, max_gap: f64) -> Result<FreeObject, GraspError> {
    if object.attached {
        return Err(GraspError::AlreadyAttached);
    }
    let gap = (object.position - ee.position).norm();
    if gap > max_gap {
        return Err(GraspError::AttachRejected { gap, max_gap });
    }
    Ok(FreeObject {
        position: object.position,
        attached: true,
        attach_offset: object.relative_to(ee),
    })
}

/// Moves an attached object with the end effector. Free objects are returned unchanged.
pub fn carry_object(object: &FreeObject, ee: &EndEffectorPose) -> FreeObject {
    if !object.attached {
        return *object;
    }
    FreeObject {
        position: ee.position + rotate_yaw(ee.heading, &object.attach_offset),
        ..*object
    }
}

/// Releases the joint; the object stays where it was let go.
pub fn detach_object(object: &FreeObject) -> Result<FreeObject, GraspError> {
    if !object.attached {
        return Err(GraspError::NotAttached);
    }
    Ok(FreeObject {
        position: object.position,
        attached: false,
        attach_offset: Vector3::zeros(),
    })
}

/// Sinks a free object at constant `sink_speed` until it rests on the seafloor.
pub fn settle_object(object: &FreeObject, env: &Environment, sink_speed: f64, dt: f64) -> FreeObject {
    if object.attached || object.position.z >= env.seafloor_depth {
        return *object;
    }
    let mut position = object.position;
    position.z = (position.z + sink_speed * dt).min(env.seafloor_depth);
    FreeObject { position, ..*object }
}
