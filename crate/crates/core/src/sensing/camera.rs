use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, ValidationError};
use crate::geometry::{rotate_yaw, Pose4};

/// Down-looking camera mounted on the vehicle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CameraGeometry {
    /// Lens position in the body frame [m].
    pub mount_position: [f64; 3],
    /// Half-angle of the viewing cone about the local down axis [rad].
    pub half_angle: f64,
    pub max_range: f64,
}

impl Default for CameraGeometry {
    fn default() -> Self {
        Self {
            mount_position: [0.0; 3],
            half_angle: 35f64.to_radians(),
            max_range: 10.0,
        }
    }
}

impl CameraGeometry {
    pub fn validate(&self) -> Result<(), ValidationError> {
        ensure(
            self.half_angle > 0.0 && self.half_angle < std::f64::consts::FRAC_PI_2,
            "camera.half_angle",
            "must be in (0, π/2)",
        )?;
        ensure(self.max_range > 0.0, "camera.max_range", "must be > 0")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionEvent {
    /// Object position minus vehicle position, NED [m].
    pub offset: Vector3<f64>,
    pub timestamp: f64,
}

/// Reports the object if it lies inside the camera's viewing cone.
pub fn detect_target(
    camera: &CameraGeometry,
    vehicle: &Pose4,
    object: &Vector3<f64>,
    timestamp: f64,
) -> Option<DetectionEvent> {
    let lens = vehicle.position() + rotate_yaw(vehicle.yaw, &Vector3::from(camera.mount_position));
    let rel = object - lens;
    let altitude = rel.z;
    if !(0.0..=camera.max_range).contains(&altitude) {
        return None;
    }
    if rel.x.hypot(rel.y) > altitude * camera.half_angle.tan() {
        return None;
    }
    Some(DetectionEvent {
        offset: object - vehicle.position(),
        timestamp,
    })
}
