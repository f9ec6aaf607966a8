use nalgebra::Vector3;
use thiserror::Error;

use crate::geometry::unrotate_yaw;
use crate::manipulator::{inverse_kinematics, ArmGeometry, KinematicsError};

/// Arm-frame targets for the final approach to an object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraspTargets {
    /// Point `standoff` above the object.
    pub pre_grasp: Vector3<f64>,
    /// The object itself.
    pub grasp: Vector3<f64>,
    pub q_pre_grasp: [f64; 3],
    pub q_grasp: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("object unreachable from the current hover pose: {source}")]
pub struct UnreachableFromHover {
    /// Arm-frame position of the object that could not be reached.
    pub target: Vector3<f64>,
    #[source]
    pub source: KinematicsError,
}

/// Pre-grasp and grasp targets for an object seen at `offset` (object minus
/// vehicle position, NED) from a vehicle heading `vehicle_yaw`.
pub fn pre_grasp_arm_target(
    offset: &Vector3<f64>,
    vehicle_yaw: f64,
    geom: &ArmGeometry,
    standoff: f64,
) -> Result<GraspTargets, UnreachableFromHover> {
    let body = unrotate_yaw(vehicle_yaw, offset);
    let grasp = unrotate_yaw(geom.mount_yaw, &(body - geom.mount()));
    let pre_grasp = grasp - Vector3::new(0.0, 0.0, standoff);
    let solve =
        |t: &Vector3<f64>| inverse_kinematics(geom, t).map_err(|source| UnreachableFromHover { target: grasp, source });
    Ok(GraspTargets {
        q_pre_grasp: solve(&pre_grasp)?,
        q_grasp: solve(&grasp)?,
        pre_grasp,
        grasp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manipulator::forward_kinematics;

    #[test]
    fn object_below_mount() {
        let g = ArmGeometry::default();
        // Object 0.6 m below the mount, vehicle facing East.
        let yaw = std::f64::consts::FRAC_PI_2;
        let offset = Vector3::new(0.0, 0.3, 1.0);
        let t = pre_grasp_arm_target(&offset, yaw, &g, 0.1).unwrap();
        assert!((t.grasp - Vector3::new(0.0, 0.0, 0.6)).norm() < 1e-12);
        assert!((t.pre_grasp - Vector3::new(0.0, 0.0, 0.5)).norm() < 1e-12);
        assert!((forward_kinematics(&g, &t.q_grasp) - t.grasp).norm() < 1e-9);
        assert!((forward_kinematics(&g, &t.q_pre_grasp) - t.pre_grasp).norm() < 1e-9);
    }

    #[test]
    fn beyond_reach() {
        let g = ArmGeometry::default();
        let err = pre_grasp_arm_target(&Vector3::new(0.3, 0.0, 2.0), 0.0, &g, 0.1).unwrap_err();
        assert!(matches!(err.source, KinematicsError::Unreachable { .. }));
    }
}
