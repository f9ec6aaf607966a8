//! Navigation sensors, dead-reckoning INS and the down-looking camera.

mod camera;
mod ins;
mod sensors;

pub use camera::{detect_target, CameraGeometry, DetectionEvent};
pub use ins::{depth_to_pressure, ins_update, pressure_to_depth, InsEstimate, SensingError};
pub use sensors::{
    sample_sensors, ChannelValidity, SensorFrame, SensorRates, SensorStreams, SensorSuite, SensorSuiteConfig,
};
