use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::SensorFrame;
use crate::dynamics::{Environment, VehicleState};
use crate::geometry::{body_to_world_xy, wrap_angle, Pose4};

/// Dead-reckoned navigation state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InsEstimate {
    /// NED position [m].
    pub position: Vector3<f64>,
    pub yaw: f64,
    /// NED velocity [m/s].
    pub velocity: Vector3<f64>,
    pub timestamp: f64,
}

impl InsEstimate {
    /// Initial alignment from a known pose.
    pub fn from_truth(truth: &VehicleState) -> Self {
        Self {
            position: truth.position,
            yaw: wrap_angle(truth.yaw),
            velocity: truth.world_velocity(),
            timestamp: truth.time,
        }
    }

    pub fn pose(&self) -> Pose4 {
        Pose4::from_position(&self.position, self.yaw)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SensingError {
    #[error("sensor frame at t={timestamp} has a stale {channel} channel")]
    StaleFrame { channel: &'static str, timestamp: f64 },
    #[error("INS step needs dt > 0, got {0}")]
    InvalidTimestep(f64),
}

/// Gauge pressure at `depth` for the environment's linear density profile.
pub fn depth_to_pressure(depth: f64, env: &Environment) -> f64 {
    env.hydrostatic_pressure(depth)
}

/// Depth whose hydrostatic pressure is `pressure`.
///
/// Solves `k·g/2·d² + ρ₀·g·d − P = 0` in the cancellation-free form
/// `d = 2P / (ρ₀g + √((ρ₀g)² + 2kgP))`, which reduces to `P/(ρ₀g)` for `k = 0`.
/// Negative readings (noise near the surface) map to depth 0.
pub fn pressure_to_depth(pressure: f64, env: &Environment) -> f64 {
    let p = pressure.max(0.0);
    let a = env.water_density_surface * env.gravity;
    let disc = (a * a + 2.0 * env.density_gradient * env.gravity * p).max(0.0);
    2.0 * p / (a + disc.sqrt())
}

/// One dead-reckoning step: yaw from the IMU, horizontal position from the
/// DVL velocity rotated by that yaw, depth from the pressure sensor.
pub fn ins_update(
    estimate: &InsEstimate,
    frame: &SensorFrame,
    env: &Environment,
    dt: f64,
) -> Result<InsEstimate, SensingError> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(SensingError::InvalidTimestep(dt));
    }
    let stale = [
        ("imu", frame.valid.imu),
        ("dvl", frame.valid.dvl),
        ("pressure", frame.valid.pressure),
    ];
    if let Some((channel, _)) = stale.iter().find(|(_, ok)| !ok) {
        return Err(SensingError::StaleFrame {
            channel,
            timestamp: frame.timestamp,
        });
    }
    let yaw = wrap_angle(frame.imu_yaw);
    let [u, v, w] = frame.dvl_body_velocity;
    let (vn, ve) = body_to_world_xy(yaw, u, v);
    Ok(InsEstimate {
        position: Vector3::new(
            estimate.position.x + vn * dt,
            estimate.position.y + ve * dt,
            pressure_to_depth(frame.pressure, env),
        ),
        yaw,
        velocity: Vector3::new(vn, ve, w),
        timestamp: frame.timestamp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensing::ChannelValidity;

    fn flat_env() -> Environment {
        Environment {
            density_gradient: 0.0,
            ..Environment::default()
        }
    }

    #[test]
    fn zero_pressure_is_surface() {
        assert_eq!(pressure_to_depth(0.0, &Environment::default()), 0.0);
        assert_eq!(pressure_to_depth(-300.0, &Environment::default()), 0.0);
    }

    #[test]
    fn constant_density_inverse() {
        let p = 1025.0 * 9.81 * 6000.0;
        assert!((pressure_to_depth(p, &flat_env()) - 6000.0).abs() < 1e-9);
    }

    #[test]
    fn graded_density_round_trip() {
        let env = Environment::default();
        for d in [0.5, 10.0, 1000.0, 5999.0, 6000.0, 11000.0] {
            let back = pressure_to_depth(depth_to_pressure(d, &env), &env);
            assert!((back - d).abs() < 1e-6, "{d} -> {back}");
        }
    }

    #[test]
    fn surge_bias_drifts_north() {
        let env = flat_env();
        let dt = 0.1;
        let mut est = InsEstimate {
            position: Vector3::new(0.0, 0.0, 100.0),
            yaw: 0.0,
            velocity: Vector3::zeros(),
            timestamp: 0.0,
        };
        let mut frame = SensorFrame {
            dvl_body_velocity: [0.01, 0.0, 0.0],
            pressure: depth_to_pressure(100.0, &env),
            valid: ChannelValidity::ALL,
            ..SensorFrame::default()
        };
        for k in 1..=6000 {
            frame.timestamp = k as f64 * dt;
            est = ins_update(&est, &frame, &env, dt).unwrap();
        }
        assert!((est.position.x - 6.0).abs() < 1e-9);
        assert_eq!(est.position.y, 0.0);
        assert!((est.position.z - 100.0).abs() < 1e-9);
    }

    #[test]
    fn stale_channel_is_rejected() {
        let est = InsEstimate {
            position: Vector3::zeros(),
            yaw: 0.0,
            velocity: Vector3::zeros(),
            timestamp: 0.0,
        };
        let frame = SensorFrame {
            valid: ChannelValidity {
                dvl: false,
                ..ChannelValidity::ALL
            },
            ..SensorFrame::default()
        };
        let err = ins_update(&est, &frame, &Environment::default(), 0.1).unwrap_err();
        assert!(matches!(err, SensingError::StaleFrame { channel: "dvl", .. }));
    }

    #[test]
    fn yaw_rotates_dvl_velocity() {
        let est = InsEstimate {
            position: Vector3::zeros(),
            yaw: 0.0,
            velocity: Vector3::zeros(),
            timestamp: 0.0,
        };
        let frame = SensorFrame {
            imu_yaw: std::f64::consts::FRAC_PI_2,
            dvl_body_velocity: [1.0, 0.0, 0.0],
            valid: ChannelValidity::ALL,
            timestamp: 1.0,
            ..SensorFrame::default()
        };
        let next = ins_update(&est, &frame, &flat_env(), 1.0).unwrap();
        assert!(next.position.x.abs() < 1e-15);
        assert!((next.position.y - 1.0).abs() < 1e-15);
    }
}
