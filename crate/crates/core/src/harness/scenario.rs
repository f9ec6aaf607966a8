use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::control::{AllocationError, PidGains, ThrusterLayout};
use crate::dynamics::{Environment, VehicleParams};
use crate::error::{ensure, ValidationError};
use crate::geometry::Pose4;
use crate::manipulator::{ArmControlGains, ArmGeometry};
use crate::mission::MissionConfig;
use crate::sensing::{CameraGeometry, SensorSuiteConfig};

/// Horizontal thruster placement of the default eight-thruster layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThrusterConfig {
    pub arm_x: f64,
    pub arm_y: f64,
}

impl Default for ThrusterConfig {
    fn default() -> Self {
        Self { arm_x: 0.6, arm_y: 0.4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObjectConfig {
    pub position: [f64; 3],
    /// Sinking speed of the released object [m/s].
    pub sink_speed: f64,
}

impl Default for ObjectConfig {
    fn default() -> Self {
        Self {
            position: [-17.2, 6.3, 6004.0],
            sink_speed: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogConfig {
    /// Output directory; relative paths resolve against the scenario file.
    pub dir: Option<PathBuf>,
}

/// Everything a run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub physics_rate: f64,
    pub control_rate: f64,
    pub max_sim_time: f64,
    pub start: Pose4,
    pub environment: Environment,
    pub vehicle: VehicleParams,
    pub thrusters: ThrusterConfig,
    pub pid: PidGains,
    pub arm: ArmGeometry,
    pub arm_gains: ArmControlGains,
    pub sensors: SensorSuiteConfig,
    pub camera: CameraGeometry,
    pub mission: MissionConfig,
    pub object: ObjectConfig,
    pub logs: LogConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: "scenario".into(),
            physics_rate: 100.0,
            control_rate: 10.0,
            max_sim_time: 7200.0,
            start: Pose4::new(-15.0, -6.0, 0.0, 0.0),
            environment: Environment::default(),
            vehicle: VehicleParams::default(),
            thrusters: ThrusterConfig::default(),
            pid: PidGains::default(),
            arm: ArmGeometry::default(),
            arm_gains: ArmControlGains::default(),
            sensors: SensorSuiteConfig::default(),
            camera: CameraGeometry::default(),
            mission: MissionConfig::default(),
            object: ObjectConfig::default(),
            logs: LogConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario: {0}")]
    Validation(#[from] ValidationError),
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// `numerator / denominator` when it is a positive integer.
fn integer_ratio(numerator: f64, denominator: f64) -> Option<u64> {
    let r = numerator / denominator;
    let n = r.round();
    ((r - n).abs() < 1e-9 && n >= 1.0).then_some(n as u64)
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ValidationError> {
        ensure(
            self.physics_rate >= 10.0 && self.physics_rate.is_finite(),
            "physics_rate",
            "must be >= 10 Hz (physics step at most 0.1 s)",
        )?;
        ensure(self.control_rate > 0.0, "control_rate", "must be > 0")?;
        ensure(
            integer_ratio(self.physics_rate, self.control_rate).is_some(),
            "control_rate",
            "physics_rate must be an integer multiple of control_rate",
        )?;
        for (name, rate) in self.sensors.rates.as_array() {
            ensure(
                rate > 0.0 && integer_ratio(self.physics_rate, rate).is_some(),
                &format!("sensors.rates.{name}"),
                "physics_rate must be an integer multiple of every sensor rate",
            )?;
        }
        ensure(
            self.max_sim_time > 0.0 && self.max_sim_time.is_finite(),
            "max_sim_time",
            "must be > 0",
        )?;
        ensure(
            [self.start.north, self.start.east, self.start.down, self.start.yaw]
                .iter()
                .all(|v| v.is_finite()),
            "start",
            "must be finite",
        )?;
        ensure(
            self.start.down >= 0.0 && self.start.down <= self.environment.seafloor_depth,
            "start.down",
            "must lie between the surface and the seafloor",
        )?;
        self.environment.validate()?;
        self.vehicle.validate()?;
        ensure(
            self.thrusters.arm_x > 0.0 && self.thrusters.arm_y > 0.0,
            "thrusters",
            "arm_x and arm_y must be > 0",
        )?;
        self.pid.validate()?;
        self.arm.validate()?;
        self.arm_gains.validate()?;
        self.sensors.validate()?;
        self.camera.validate()?;
        self.mission.validate()?;
        ensure(
            self.mission.target_depth < self.environment.seafloor_depth,
            "mission.target_depth",
            "must be above the seafloor",
        )?;
        ensure(
            self.mission.stow_joints_within(&self.arm),
            "mission.stow_joints",
            "must lie within the arm joint limits",
        )?;
        ensure(
            self.object.position.iter().all(|v| v.is_finite()),
            "object.position",
            "must be finite",
        )?;
        ensure(self.object.sink_speed > 0.0, "object.sink_speed", "must be > 0")?;
        Ok(())
    }

    pub fn physics_dt(&self) -> f64 {
        1.0 / self.physics_rate
    }

    pub fn control_dt(&self) -> f64 {
        1.0 / self.control_rate
    }

    /// Physics ticks per control tick.
    pub fn control_divisor(&self) -> u64 {
        integer_ratio(self.physics_rate, self.control_rate).expect("validated")
    }

    /// Physics ticks per sample for the given sensor rate.
    pub fn divisor_for(&self, rate: f64) -> u64 {
        integer_ratio(self.physics_rate, rate).expect("validated")
    }

    pub fn thruster_layout(&self) -> Result<ThrusterLayout, AllocationError> {
        ThrusterLayout::symmetric_default(
            self.thrusters.arm_x,
            self.thrusters.arm_y,
            self.vehicle.max_thrust_per_thruster,
        )
    }
}

impl MissionConfig {
    fn stow_joints_within(&self, arm: &ArmGeometry) -> bool {
        arm.within_limits(&self.stow_joints)
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

/// Parses and validates a scenario document.
pub fn load_scenario(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    let config: ScenarioConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        ScenarioError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    config.validate()?;
    Ok(config)
}

/// Resolves a scenario path: a directory means `<dir>/scenario.toml`.
pub fn resolve_scenario_path(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.join("scenario.toml")
    } else {
        path.to_path_buf()
    }
}

/// Reads and validates a scenario file (or a directory holding `scenario.toml`).
/// A relative `logs.dir` is made relative to the file's directory.
pub fn load_scenario_file(path: &Path) -> Result<ScenarioConfig, ScenarioError> {
    let file = resolve_scenario_path(path);
    let text = std::fs::read_to_string(&file).map_err(|source| ScenarioError::Io {
        path: file.clone(),
        source,
    })?;
    let mut config = load_scenario(&text)?;
    if let (Some(dir), Some(parent)) = (&config.logs.dir, file.parent()) {
        if dir.is_relative() {
            config.logs.dir = Some(parent.join(dir));
        }
    }
    Ok(config)
}
