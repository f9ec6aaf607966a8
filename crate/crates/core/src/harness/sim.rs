//! The fixed-step, multi-rate simulation loop.
//!
//! Physics ticks are the base clock. Sensors, the camera and the control
//! stack run every `physics_rate / rate` ticks. On a control tick the order
//! is: read sensors, update the INS, step the mission, run the position loop
//! on the INS pose, allocate thrust, then advance the arm. The resulting body
//! wrench is held until the next control tick.

use std::path::Path;
use std::time::Instant;

use nalgebra::Vector3;
use serde::Serialize;
use thiserror::Error;

use super::log::{LogRecord, LogSink, LogWriter};
use super::ScenarioConfig;
use crate::control::{AllocationError, ControlOutput, Frame, PositionController, WrenchCommand};
use crate::dynamics::{
    attach_object, carry_object, detach_object, settle_object, step_vehicle, DynamicsError, FreeObject, GraspError,
    VehicleState,
};
use crate::error::ValidationError;
use crate::manipulator::{accel_feedforward, end_effector_pose, integrate_joint_command, JointState};
use crate::mission::{
    plan_lawnmower, AbortReason, CoverageError, GraspFeedback, InvalidTransition, MissionExecutive, MissionInputs,
    MissionOutput, MissionPhase,
};
use crate::sensing::{ins_update, DetectionEvent, InsEstimate, SensorSuite};

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ValidationError),
    #[error(transparent)]
    Allocation(#[from] AllocationError),
    #[error(transparent)]
    Coverage(#[from] CoverageError),
    #[error(transparent)]
    Mission(#[from] InvalidTransition),
    #[error("log output failed: {0}")]
    Io(#[from] std::io::Error),
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Done,
    Abort {
        #[serde(serialize_with = "display")]
        reason: AbortReason,
    },
    Timeout,
}

fn display<S: serde::Serializer>(reason: &AbortReason, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(reason)
}

impl Outcome {
    /// Process exit status for the `run` subcommand.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Done => 0,
            Self::Abort { .. } => 2,
            Self::Timeout => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub scenario: String,
    pub seed: u64,
    pub outcome: Outcome,
    pub final_phase: String,
    /// ‖INS − truth‖ at the last control tick [m].
    pub final_ins_error: f64,
    pub max_ins_error: f64,
    /// Per-axis INS error (north, east, down) at the last control tick [m].
    pub terminal_error: [f64; 3],
    pub waypoints_captured: usize,
    pub waypoints_total: usize,
    pub grasp_attempts: u32,
    /// Suction-cup-to-object distance when the attachment closed [m].
    pub attach_gap: Option<f64>,
    pub object_final_position: [f64; 3],
    pub dropoff_distance: f64,
    pub object_resting: bool,
    /// Control ticks on which the INS held its previous value.
    pub ins_degraded_ticks: u64,
    pub control_ticks: u64,
    pub sim_time: f64,
    pub wall_time: f64,
    pub real_time_factor: f64,
}

/// One simulation instance. Drive it with [`Simulation::run`] or tick by
/// tick with [`Simulation::step`].
pub struct Simulation {
    config: ScenarioConfig,
    tick: u64,
    total_ticks: u64,
    control_divisor: u64,
    sensor_divisors: [u64; 4],
    truth: VehicleState,
    ins: Option<InsEstimate>,
    sensors: SensorSuite,
    controller: PositionController,
    executive: MissionExecutive,
    joints: JointState,
    object: FreeObject,
    held_wrench: WrenchCommand,
    last_control: Option<ControlOutput>,
    last_output: Option<MissionOutput>,
    pending_detection: Option<DetectionEvent>,
    grasp_feedback: GraspFeedback,
    attach_gap: Option<f64>,
    ins_errors: InsErrorStats,
    control_ticks: u64,
    outcome: Option<Outcome>,
}

#[derive(Debug, Clone, Copy, Default)]
struct InsErrorStats {
    last: [f64; 3],
    max_norm: f64,
    degraded: u64,
}

impl Simulation {
    pub fn new(config: ScenarioConfig) -> Result<Self, SimError> {
        config.validate()?;
        let layout = config.thruster_layout()?;
        let m = &config.mission;
        let plan = plan_lawnmower(&m.survey_bounds, m.lane_spacing, m.target_depth, m.start_corner)?;
        let executive = MissionExecutive::new(m.clone(), plan, config.arm.clone());
        let rates = config.sensors.rates;
        let sensor_divisors = [rates.imu, rates.dvl, rates.pressure, rates.camera].map(|r| config.divisor_for(r));
        let mut truth = VehicleState::at_rest(config.start);
        truth.time = 0.0;
        Ok(Self {
            tick: 0,
            total_ticks: (config.max_sim_time * config.physics_rate).round() as u64,
            control_divisor: config.control_divisor(),
            sensor_divisors,
            truth,
            ins: None,
            sensors: SensorSuite::new(config.sensors.clone()),
            controller: PositionController::new(config.pid.clone(), layout),
            executive,
            joints: JointState::at_rest(config.mission.stow_joints),
            object: FreeObject::resting_at(Vector3::from(config.object.position)),
            held_wrench: WrenchCommand::zero(Frame::Body),
            last_control: None,
            last_output: None,
            pending_detection: None,
            grasp_feedback: GraspFeedback::Pending,
            attach_gap: None,
            ins_errors: InsErrorStats::default(),
            control_ticks: 0,
            outcome: None,
            config,
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn time(&self) -> f64 {
        self.tick as f64 / self.config.physics_rate
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn truth(&self) -> &VehicleState {
        &self.truth
    }

    pub fn ins(&self) -> Option<&InsEstimate> {
        self.ins.as_ref()
    }

    pub fn executive(&self) -> &MissionExecutive {
        &self.executive
    }

    pub fn joints(&self) -> &JointState {
        &self.joints
    }

    pub fn object(&self) -> &FreeObject {
        &self.object
    }

    /// Body wrench currently applied to the hull.
    pub fn held_wrench(&self) -> &WrenchCommand {
        &self.held_wrench
    }

    pub fn last_control(&self) -> Option<&ControlOutput> {
        self.last_control.as_ref()
    }

    pub fn last_mission_output(&self) -> Option<&MissionOutput> {
        self.last_output.as_ref()
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.outcome
    }

    /// Advances one physics tick. Returns the outcome once the run has ended.
    pub fn step(&mut self, sink: &mut dyn LogSink) -> Result<Option<Outcome>, SimError> {
        if self.outcome.is_some() {
            return Ok(self.outcome);
        }
        let k = self.tick;
        let t = self.time();
        self.truth.time = t;

        let [imu, dvl, pressure, camera] = self.sensor_divisors;
        if k.is_multiple_of(imu) {
            self.sensors.sample_imu(&self.truth);
        }
        if k.is_multiple_of(dvl) {
            self.sensors.sample_dvl(&self.truth);
        }
        if k.is_multiple_of(pressure) {
            self.sensors.sample_pressure(&self.truth, &self.config.environment);
        }
        if k.is_multiple_of(camera) {
            self.pending_detection = self
                .sensors
                .observe(&self.config.camera, &self.truth, &self.object.position);
            if let Some(d) = &self.pending_detection {
                sink.record(&LogRecord::Detection {
                    time: t,
                    offset: d.offset.into(),
                })?;
            }
        }

        if k.is_multiple_of(self.control_divisor) {
            self.control_tick(t, sink)?;
            if self.outcome.is_some() {
                return Ok(self.outcome);
            }
        }

        let dt = self.config.physics_dt();
        match step_vehicle(
            &self.truth,
            &self.config.vehicle,
            &self.config.environment,
            &self.held_wrench,
            dt,
        ) {
            Ok(next) => self.truth = next,
            Err(DynamicsError::NonFiniteState { .. }) => {
                return self.abort(t, AbortReason::NonFiniteState, sink);
            }
            Err(other) => unreachable!("validated step inputs: {other}"),
        }
        self.tick += 1;
        self.truth.time = self.time();

        if self.object.attached {
            let ee = end_effector_pose(&self.config.arm, &self.joints.q, &self.truth.pose());
            self.object = carry_object(&self.object, &ee);
            // The seafloor stops a carried object pushed into it.
            let floor = self.config.environment.seafloor_depth;
            if self.object.position.z > floor {
                self.object.position.z = floor;
            }
        } else {
            self.object = settle_object(
                &self.object,
                &self.config.environment,
                self.config.object.sink_speed,
                dt,
            );
        }

        if self.tick >= self.total_ticks {
            self.outcome = Some(Outcome::Timeout);
        }
        Ok(self.outcome)
    }

    fn abort(&mut self, t: f64, reason: AbortReason, sink: &mut dyn LogSink) -> Result<Option<Outcome>, SimError> {
        sink.record(&LogRecord::Phase {
            time: t,
            from: self.executive.phase().to_string(),
            to: MissionPhase::Abort(reason).to_string(),
            event: "numerical_fault".into(),
        })?;
        self.outcome = Some(Outcome::Abort { reason });
        Ok(self.outcome)
    }

    fn control_tick(&mut self, t: f64, sink: &mut dyn LogSink) -> Result<(), SimError> {
        let dt = self.config.control_dt();
        let frame = self.sensors.frame(t);
        let ins = match self.ins {
            // Initial alignment from the launch pose.
            None => InsEstimate::from_truth(&self.truth),
            Some(prev) => match ins_update(&prev, &frame, &self.config.environment, dt) {
                Ok(next) => next,
                Err(_) => {
                    self.ins_errors.degraded += 1;
                    prev
                }
            },
        };
        self.ins = Some(ins);

        let inputs = MissionInputs {
            time: t,
            dt,
            ins,
            detection: self.pending_detection.take(),
            joints: self.joints,
            grasp: std::mem::take(&mut self.grasp_feedback),
        };
        let out = self.executive.step(&inputs)?;
        if let Some(tr) = &out.transition {
            sink.record(&LogRecord::Phase {
                time: t,
                from: tr.from.to_string(),
                to: tr.to.to_string(),
                event: serde_json::to_value(tr.event)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
            })?;
        }
        if let Some(i) = out.captured_waypoint {
            let wp = self.executive.plan().waypoints[i];
            sink.record(&LogRecord::Waypoint {
                time: t,
                index: i,
                north: wp.north,
                east: wp.east,
                down: wp.down,
                yaw: wp.yaw,
            })?;
        }

        let control = self.controller.update(&out.setpoint, &ins.pose(), dt)?;
        self.held_wrench = control.applied;
        self.last_control = Some(control);

        let arm = &self.config.arm;
        let cmd = accel_feedforward(&self.config.arm_gains, &out.arm_reference, &self.joints, arm);
        self.joints = integrate_joint_command(&self.joints, &cmd, arm, dt);

        let ee = end_effector_pose(arm, &self.joints.q, &self.truth.pose());
        if out.suction && out.request_attach && !self.object.attached {
            match attach_object(&self.object, &ee, self.config.mission.grasp_gap) {
                Ok(obj) => {
                    let gap = (obj.position - ee.position).norm();
                    self.object = obj;
                    self.attach_gap = Some(gap);
                    self.grasp_feedback = GraspFeedback::Attached;
                    self.log_grasp(sink, t, "attach", gap)?;
                }
                Err(GraspError::AttachRejected { gap, .. }) => {
                    self.grasp_feedback = GraspFeedback::Rejected { gap };
                    self.log_grasp(sink, t, "reject", gap)?;
                }
                Err(_) => {}
            }
        } else if !out.suction && self.object.attached {
            if let Ok(obj) = detach_object(&self.object) {
                self.object = obj;
                let gap = (obj.position - ee.position).norm();
                self.log_grasp(sink, t, "release", gap)?;
            }
        }

        self.log_tick(sink, t, &ins, &control, &out)?;
        self.control_ticks += 1;
        self.last_output = Some(out);

        match out.phase {
            MissionPhase::Done => self.outcome = Some(Outcome::Done),
            MissionPhase::Abort(reason) => self.outcome = Some(Outcome::Abort { reason }),
            _ => {}
        }
        Ok(())
    }

    fn log_grasp(&self, sink: &mut dyn LogSink, t: f64, action: &str, gap: f64) -> std::io::Result<()> {
        sink.record(&LogRecord::Grasp {
            time: t,
            action: action.into(),
            gap,
            attached: self.object.attached,
        })
    }

    fn log_tick(
        &mut self,
        sink: &mut dyn LogSink,
        t: f64,
        ins: &InsEstimate,
        control: &ControlOutput,
        out: &MissionOutput,
    ) -> std::io::Result<()> {
        let truth = &self.truth;
        let v = truth.world_velocity();
        sink.record(&LogRecord::Truth {
            time: t,
            north: truth.position.x,
            east: truth.position.y,
            down: truth.position.z,
            yaw: truth.yaw,
            vx: v.x,
            vy: v.y,
            vz: v.z,
            yaw_rate: truth.body_velocity[3],
        })?;
        sink.record(&LogRecord::Ins {
            time: t,
            north: ins.position.x,
            east: ins.position.y,
            down: ins.position.z,
            yaw: ins.yaw,
            vn: ins.velocity.x,
            ve: ins.velocity.y,
            vd: ins.velocity.z,
        })?;
        let w = &control.applied;
        sink.record(&LogRecord::Wrench {
            time: t,
            fx: w.fx,
            fy: w.fy,
            fz: w.fz,
            tau_yaw: w.tau_yaw,
        })?;
        sink.record(&LogRecord::Thrusters {
            time: t,
            u: control.thrusts,
        })?;
        sink.record(&LogRecord::Joints {
            time: t,
            q: self.joints.q,
            q_dot: self.joints.q_dot,
            q_ref: out.arm_reference.q_target,
        })?;

        let err = ins.position - truth.position;
        self.ins_errors.last = err.into();
        self.ins_errors.max_norm = self.ins_errors.max_norm.max(err.norm());
        Ok(())
    }

    /// Runs to completion and flushes `sink`.
    pub fn run(&mut self, sink: &mut dyn LogSink) -> Result<RunSummary, SimError> {
        let started = Instant::now();
        while self.step(sink)?.is_none() {}
        sink.finish()?;
        Ok(self.summary(started.elapsed().as_secs_f64()))
    }

    pub fn summary(&self, wall_time: f64) -> RunSummary {
        let dropoff = Vector3::from(self.config.mission.dropoff_point);
        let sim_time = self.time();
        let wall_time = wall_time.max(1e-9);
        let e = self.ins_errors.last;
        RunSummary {
            scenario: self.config.name.clone(),
            seed: self.config.sensors.rng_seed,
            outcome: self.outcome.unwrap_or(Outcome::Timeout),
            final_phase: self.executive.phase().to_string(),
            final_ins_error: (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt(),
            max_ins_error: self.ins_errors.max_norm,
            terminal_error: e,
            waypoints_captured: self.executive.waypoints_captured(),
            waypoints_total: self.executive.plan().waypoints.len(),
            grasp_attempts: self.executive.grasp_attempts(),
            attach_gap: self.attach_gap,
            object_final_position: self.object.position.into(),
            dropoff_distance: (self.object.position - dropoff).norm(),
            object_resting: self.object.is_resting(&self.config.environment),
            ins_degraded_ticks: self.ins_errors.degraded,
            control_ticks: self.control_ticks,
            sim_time,
            wall_time,
            real_time_factor: sim_time / wall_time,
        }
    }
}

/// Runs a scenario, sending every record to `sink`.
pub fn run_simulation(config: &ScenarioConfig, sink: &mut dyn LogSink) -> Result<RunSummary, SimError> {
    Simulation::new(config.clone())?.run(sink)
}

pub const META_FILE: &str = "run_meta.json";
pub const SUMMARY_FILE: &str = "summary.json";

/// Runs a scenario with file logs in `dir`, plus `run_meta.json` (inputs,
/// deterministic) and `summary.json` (includes wall time).
pub fn run_to_dir(config: &ScenarioConfig, dir: &Path) -> Result<RunSummary, SimError> {
    let mut writer = LogWriter::create(dir)?;
    let meta = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "scenario": config,
    });
    std::fs::write(
        dir.join(META_FILE),
        serde_json::to_string_pretty(&meta).map_err(std::io::Error::other)?,
    )?;
    let summary = run_simulation(config, &mut writer)?;
    std::fs::write(
        dir.join(SUMMARY_FILE),
        serde_json::to_string_pretty(&summary).map_err(std::io::Error::other)?,
    )?;
    Ok(summary)
}
