use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{detect_target, CameraGeometry, DetectionEvent};
use crate::dynamics::{Environment, VehicleState};
use crate::error::{ensure, ValidationError};
use crate::geometry::{world_to_body_xy, wrap_angle};

/// Update rates of each simulated sensor [Hz].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensorRates {
    pub imu: f64,
    pub dvl: f64,
    pub pressure: f64,
    pub camera: f64,
}

impl Default for SensorRates {
    fn default() -> Self {
        Self {
            imu: 10.0,
            dvl: 10.0,
            pressure: 10.0,
            camera: 10.0,
        }
    }
}

impl SensorRates {
    pub fn as_array(&self) -> [(&'static str, f64); 4] {
        [
            ("imu", self.imu),
            ("dvl", self.dvl),
            ("pressure", self.pressure),
            ("camera", self.camera),
        ]
    }
}

/// Noise and bias model of the navigation sensors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensorSuiteConfig {
    pub rates: SensorRates,
    pub imu_yaw_noise_std: f64,
    pub imu_yaw_bias: f64,
    pub imu_yaw_rate_noise_std: f64,
    pub dvl_velocity_noise_std: f64,
    /// Additive bias per body axis [m/s].
    pub dvl_velocity_bias: [f64; 3],
    pub pressure_noise_std: f64,
    /// Gaussian noise on each detection offset component [m].
    pub detection_noise_std: f64,
    pub rng_seed: u64,
}

impl Default for SensorSuiteConfig {
    fn default() -> Self {
        Self {
            rates: SensorRates::default(),
            imu_yaw_noise_std: 0.0,
            imu_yaw_bias: 0.0,
            imu_yaw_rate_noise_std: 0.0,
            dvl_velocity_noise_std: 0.0,
            dvl_velocity_bias: [0.0; 3],
            pressure_noise_std: 0.0,
            detection_noise_std: 0.0,
            rng_seed: 0,
        }
    }
}

impl SensorSuiteConfig {
    pub fn validate(&self) -> Result<(), ValidationError> {
        for (name, rate) in self.rates.as_array() {
            ensure(
                rate > 0.0 && rate.is_finite(),
                &format!("sensors.rates.{name}"),
                "must be > 0",
            )?;
        }
        let stds = [
            ("imu_yaw_noise_std", self.imu_yaw_noise_std),
            ("imu_yaw_rate_noise_std", self.imu_yaw_rate_noise_std),
            ("dvl_velocity_noise_std", self.dvl_velocity_noise_std),
            ("pressure_noise_std", self.pressure_noise_std),
            ("detection_noise_std", self.detection_noise_std),
        ];
        for (name, std) in stds {
            ensure(
                std >= 0.0 && std.is_finite(),
                &format!("sensors.{name}"),
                "must be >= 0",
            )?;
        }
        ensure(
            self.imu_yaw_bias.is_finite() && self.dvl_velocity_bias.iter().all(|b| b.is_finite()),
            "sensors.bias",
            "must be finite",
        )
    }

    /// Removes every noise and bias term, keeping rates and seed.
    pub fn ideal(&self) -> Self {
        Self {
            rates: self.rates,
            rng_seed: self.rng_seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ChannelValidity {
    pub imu: bool,
    pub dvl: bool,
    pub pressure: bool,
}

impl ChannelValidity {
    pub const ALL: Self = Self {
        imu: true,
        dvl: true,
        pressure: true,
    };

    pub fn all(&self) -> bool {
        self.imu && self.dvl && self.pressure
    }
}

/// Latest readings of the navigation sensors.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SensorFrame {
    pub imu_yaw: f64,
    pub imu_yaw_rate: f64,
    pub dvl_body_velocity: [f64; 3],
    pub pressure: f64,
    pub timestamp: f64,
    pub valid: ChannelValidity,
}

/// Independent random stream per sensor, all derived from one seed.
#[derive(Debug, Clone)]
pub struct SensorStreams {
    imu: ChaCha8Rng,
    dvl: ChaCha8Rng,
    pressure: ChaCha8Rng,
    camera: ChaCha8Rng,
}

impl SensorStreams {
    pub fn new(seed: u64) -> Self {
        let stream = |id: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(id);
            rng
        };
        Self {
            imu: stream(1),
            dvl: stream(2),
            pressure: stream(3),
            camera: stream(4),
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng, std: f64) -> f64 {
    // Always draw so a zero std does not shift later samples of the stream.
    let z: f64 = rng.sample(StandardNormal);
    z * std
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct DvlFix {
    position: Vector3<f64>,
    time: f64,
}

/// Stateful sensor simulator: owns the random streams, the latest reading of
/// every channel, and the DVL's previous bottom-track fix.
#[derive(Debug, Clone)]
pub struct SensorSuite {
    config: SensorSuiteConfig,
    streams: SensorStreams,
    frame: SensorFrame,
    stamps: [Option<f64>; 3],
    last_dvl_fix: Option<DvlFix>,
}

impl SensorSuite {
    pub fn new(config: SensorSuiteConfig) -> Self {
        let streams = SensorStreams::new(config.rng_seed);
        Self {
            config,
            streams,
            frame: SensorFrame::default(),
            stamps: [None; 3],
            last_dvl_fix: None,
        }
    }

    pub fn config(&self) -> &SensorSuiteConfig {
        &self.config
    }

    pub fn streams_mut(&mut self) -> &mut SensorStreams {
        &mut self.streams
    }

    pub fn sample_imu(&mut self, truth: &VehicleState) {
        let c = &self.config;
        let yaw_noise = gaussian(&mut self.streams.imu, c.imu_yaw_noise_std);
        let rate_noise = gaussian(&mut self.streams.imu, c.imu_yaw_rate_noise_std);
        self.frame.imu_yaw = wrap_angle(truth.yaw + c.imu_yaw_bias + yaw_noise);
        self.frame.imu_yaw_rate = truth.body_velocity[3] + rate_noise;
        self.stamps[0] = Some(truth.time);
    }

    /// Bottom-track velocity: the mean ground velocity since the previous
    /// ping, expressed in the body frame at the ping instant. The first ping
    /// reports the instantaneous body velocity.
    pub fn sample_dvl(&mut self, truth: &VehicleState) {
        let ground = match self.last_dvl_fix {
            Some(fix) if truth.time > fix.time => {
                let mean = (truth.position - fix.position) / (truth.time - fix.time);
                let (u, v) = world_to_body_xy(truth.yaw, mean.x, mean.y);
                [u, v, mean.z]
            }
            _ => [truth.body_velocity[0], truth.body_velocity[1], truth.body_velocity[2]],
        };
        let c = &self.config;
        for (axis, g) in ground.iter().enumerate() {
            let noise = gaussian(&mut self.streams.dvl, c.dvl_velocity_noise_std);
            self.frame.dvl_body_velocity[axis] = g + c.dvl_velocity_bias[axis] + noise;
        }
        self.last_dvl_fix = Some(DvlFix {
            position: truth.position,
            time: truth.time,
        });
        self.stamps[1] = Some(truth.time);
    }

    pub fn sample_pressure(&mut self, truth: &VehicleState, env: &Environment) {
        let noise = gaussian(&mut self.streams.pressure, self.config.pressure_noise_std);
        self.frame.pressure = env.hydrostatic_pressure(truth.position.z) + noise;
        self.stamps[2] = Some(truth.time);
    }

    /// Latest readings at `now`. A channel is valid when it has been sampled
    /// within one of its own periods.
    pub fn frame(&self, now: f64) -> SensorFrame {
        let rates = self.config.rates;
        let fresh = |stamp: Option<f64>, rate: f64| stamp.is_some_and(|t| now - t <= 1.0 / rate + 1e-9 && t <= now);
        SensorFrame {
            timestamp: now,
            valid: ChannelValidity {
                imu: fresh(self.stamps[0], rates.imu),
                dvl: fresh(self.stamps[1], rates.dvl),
                pressure: fresh(self.stamps[2], rates.pressure),
            },
            ..self.frame
        }
    }

    /// Camera observation of `object`: the cone test on the true pose plus the
    /// configured detection noise on each offset component.
    pub fn observe(
        &mut self,
        camera: &CameraGeometry,
        truth: &VehicleState,
        object: &Vector3<f64>,
    ) -> Option<DetectionEvent> {
        let mut event = detect_target(camera, &truth.pose(), object, truth.time)?;
        let std = self.config.detection_noise_std;
        if std > 0.0 {
            for axis in 0..3 {
                event.offset[axis] += gaussian(&mut self.streams.camera, std);
            }
        }
        Some(event)
    }

    /// Samples every channel at once and returns the resulting frame.
    pub fn sample_all(&mut self, truth: &VehicleState, env: &Environment) -> SensorFrame {
        self.sample_imu(truth);
        self.sample_dvl(truth);
        self.sample_pressure(truth, env);
        self.frame(truth.time)
    }
}

/// One-shot sampling of all channels against `truth` with the given streams.
///
/// Stateless with respect to the DVL history, so the DVL reports the
/// instantaneous body velocity. Use [`SensorSuite`] inside a simulation loop.
pub fn sample_sensors(
    truth: &VehicleState,
    config: &SensorSuiteConfig,
    env: &Environment,
    streams: &mut SensorStreams,
) -> SensorFrame {
    let yaw_noise = gaussian(&mut streams.imu, config.imu_yaw_noise_std);
    let rate_noise = gaussian(&mut streams.imu, config.imu_yaw_rate_noise_std);
    let mut dvl = [0.0; 3];
    for (axis, d) in dvl.iter_mut().enumerate() {
        let noise = gaussian(&mut streams.dvl, config.dvl_velocity_noise_std);
        *d = truth.body_velocity[axis] + config.dvl_velocity_bias[axis] + noise;
    }
    let pressure_noise = gaussian(&mut streams.pressure, config.pressure_noise_std);
    SensorFrame {
        imu_yaw: wrap_angle(truth.yaw + config.imu_yaw_bias + yaw_noise),
        imu_yaw_rate: truth.body_velocity[3] + rate_noise,
        dvl_body_velocity: dvl,
        pressure: env.hydrostatic_pressure(truth.position.z) + pressure_noise,
        timestamp: truth.time,
        valid: ChannelValidity::ALL,
    }
}
