use nalgebra::Vector3;
use serde::Serialize;

use super::{
    is_declared_edge, pre_grasp_arm_target, transition, waypoint_reached, CoveragePlan, GraspTargets,
    InvalidTransition, MissionConfig, MissionEvent, MissionPhase, ReferenceGenerator, RetryBudget,
};
use crate::control::pose_error;
use crate::geometry::{rotate_yaw, Pose4};
use crate::manipulator::{forward_kinematics, ArmGeometry, JointState, JointTrajectoryPoint, QuinticMove};
use crate::sensing::{DetectionEvent, InsEstimate};

/// Result of the last attach attempt, as reported by the plant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum GraspFeedback {
    #[default]
    Pending,
    Attached,
    Rejected {
        gap: f64,
    },
}

/// Everything the executive may look at on one control tick.
#[derive(Debug, Clone, Copy)]
pub struct MissionInputs {
    pub time: f64,
    pub dt: f64,
    pub ins: InsEstimate,
    pub detection: Option<DetectionEvent>,
    pub joints: JointState,
    pub grasp: GraspFeedback,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionRecord {
    pub time: f64,
    pub from: MissionPhase,
    pub to: MissionPhase,
    pub event: MissionEvent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MissionOutput {
    pub phase: MissionPhase,
    /// Rate-limited pose handed to the position controller.
    pub setpoint: Pose4,
    /// Where the current leg ends.
    pub goal: Pose4,
    pub arm_reference: JointTrajectoryPoint,
    pub suction: bool,
    /// Ask the plant to try closing the suction joint this tick.
    pub request_attach: bool,
    pub transition: Option<TransitionRecord>,
    pub captured_waypoint: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransportLeg {
    Lift,
    Transit,
    Lower,
    Release,
}

/// The mission state machine plus the bookkeeping each phase needs.
///
/// It sees the vehicle only through the INS estimate, the camera detection
/// and the arm/suction status.
#[derive(Debug, Clone)]
pub struct MissionExecutive {
    config: MissionConfig,
    plan: CoveragePlan,
    arm: ArmGeometry,
    phase: MissionPhase,
    phase_entered: f64,
    reference: Option<ReferenceGenerator>,
    descend_goal: Pose4,
    goal: Pose4,
    next_waypoint: usize,
    captured: usize,
    object_estimate: Option<Vector3<f64>>,
    hover_yaw: f64,
    nudge: Vector3<f64>,
    stable_since: Option<f64>,
    targets: Option<GraspTargets>,
    arm_move: Option<(QuinticMove, f64)>,
    arm_goal: [f64; 3],
    budget: RetryBudget,
    leg: TransportLeg,
    leg_since: f64,
    suction: bool,
}

impl MissionExecutive {
    /// The plan's capture radius is replaced by the configured one.
    pub fn new(config: MissionConfig, mut plan: CoveragePlan, arm: ArmGeometry) -> Self {
        plan.capture_radius = config.capture_radius;
        let budget = RetryBudget {
            max_grasp_retries: config.max_grasp_retries,
            ..RetryBudget::default()
        };
        Self {
            arm_goal: config.stow_joints,
            config,
            plan,
            arm,
            phase: MissionPhase::Descend,
            phase_entered: 0.0,
            reference: None,
            descend_goal: Pose4::new(0.0, 0.0, 0.0, 0.0),
            goal: Pose4::new(0.0, 0.0, 0.0, 0.0),
            next_waypoint: 0,
            captured: 0,
            object_estimate: None,
            hover_yaw: 0.0,
            nudge: Vector3::zeros(),
            stable_since: None,
            targets: None,
            arm_move: None,
            budget,
            leg: TransportLeg::Lift,
            leg_since: 0.0,
            suction: false,
        }
    }

    pub fn phase(&self) -> MissionPhase {
        self.phase
    }

    pub fn plan(&self) -> &CoveragePlan {
        &self.plan
    }

    pub fn waypoints_captured(&self) -> usize {
        self.captured
    }

    pub fn grasp_attempts(&self) -> u32 {
        self.budget.grasp_attempts
    }

    pub fn transport_leg(&self) -> TransportLeg {
        self.leg
    }

    /// Current object position estimate (INS position plus the last detection offset).
    pub fn object_estimate(&self) -> Option<Vector3<f64>> {
        self.object_estimate
    }

    /// One control tick.
    pub fn step(&mut self, inp: &MissionInputs) -> Result<MissionOutput, InvalidTransition> {
        if self.reference.is_none() {
            let start = inp.ins.pose();
            self.reference = Some(ReferenceGenerator::new(start));
            self.descend_goal = Pose4::new(start.north, start.east, self.config.target_depth, start.yaw);
            self.goal = self.descend_goal;
            self.phase_entered = inp.time;
        }

        let mut out = MissionOutput {
            phase: self.phase,
            setpoint: self.reference.as_ref().map(|r| r.setpoint()).unwrap_or(self.goal),
            goal: self.goal,
            arm_reference: self.arm_reference(inp.time),
            suction: self.suction,
            request_attach: false,
            transition: None,
            captured_waypoint: None,
        };
        if self.phase.is_terminal() {
            return Ok(out);
        }

        if let Some(event) = self.evaluate(inp, &mut out) {
            let from = self.phase;
            let to = transition(from, event, &self.budget)?;
            debug_assert!(is_declared_edge(&from, &to));
            out.transition = Some(TransitionRecord {
                time: inp.time,
                from,
                to,
                event,
            });
            self.enter(to, inp);
        }

        if !self.phase.is_terminal() {
            self.goal = self.current_goal();
            if self.phase == MissionPhase::Grasp && out.transition.is_none() {
                out.request_attach = self.arm_settled(inp);
            }
        }
        let limits = self.config.limits(self.phase.kind());
        let reference = self.reference.as_mut().expect("reference initialised above");
        out.setpoint = reference.advance(&self.goal, &limits, inp.dt);
        out.phase = self.phase;
        out.goal = self.goal;
        out.arm_reference = self.arm_reference(inp.time);
        out.suction = self.suction;
        Ok(out)
    }

    fn evaluate(&mut self, inp: &MissionInputs, out: &mut MissionOutput) -> Option<MissionEvent> {
        let ins = &inp.ins;
        if !(ins.position.iter().all(|v| v.is_finite()) && ins.yaw.is_finite()) {
            return Some(MissionEvent::NumericalFault);
        }
        let kind = self.phase.kind()?;
        if inp.time - self.phase_entered > self.config.timeouts.get(kind) {
            return Some(MissionEvent::Timeout);
        }
        match self.phase {
            MissionPhase::Descend => ((ins.position.z - self.config.target_depth).abs() <= self.config.depth_capture)
                .then_some(MissionEvent::DepthCaptured),
            MissionPhase::Survey => {
                if let Some(d) = &inp.detection {
                    self.object_estimate = Some(ins.position + d.offset);
                    self.hover_yaw = ins.yaw;
                    return Some(MissionEvent::TargetDetected);
                }
                let i = self.next_waypoint;
                let wp = self.plan.waypoints.get(i)?;
                if waypoint_reached(ins, wp, self.plan.capture_radius, self.config.yaw_tolerance) {
                    out.captured_waypoint = Some(i);
                    self.next_waypoint += 1;
                    self.captured += 1;
                    return Some(MissionEvent::WaypointCaptured);
                }
                None
            }
            MissionPhase::Approach => {
                self.refresh_object(inp);
                let e = pose_error(&self.hover_goal(), &ins.pose());
                let dist = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
                (dist <= self.config.approach_tolerance && e[3].abs() <= self.config.yaw_tolerance)
                    .then_some(MissionEvent::ApproachReached)
            }
            MissionPhase::StabilizeHover => {
                self.refresh_object(inp);
                let stable = self.track_stability(inp);
                (stable && self.arm_move_finished(inp.time)).then_some(MissionEvent::HoverStable)
            }
            MissionPhase::ArmDeploy => {
                self.refresh_object(inp);
                let stable = self.track_stability(inp);
                match self.targets {
                    None if stable => self.plan_arm(inp),
                    None => None,
                    Some(t) => (self.arm_settled(inp) && self.arm_goal == t.q_pre_grasp)
                        .then_some(MissionEvent::PreGraspReached),
                }
            }
            MissionPhase::Grasp => match inp.grasp {
                GraspFeedback::Attached => Some(MissionEvent::AttachConfirmed),
                GraspFeedback::Rejected { .. } => Some(MissionEvent::AttachRejected),
                GraspFeedback::Pending => None,
            },
            MissionPhase::Transport => self.advance_transport(inp),
            MissionPhase::Done | MissionPhase::Abort(_) => None,
        }
    }

    fn enter(&mut self, next: MissionPhase, inp: &MissionInputs) {
        let changed = next != self.phase;
        let from = self.phase;
        self.phase = next;
        if changed {
            self.phase_entered = inp.time;
        }
        match next {
            MissionPhase::StabilizeHover => {
                self.stable_since = None;
                if from == MissionPhase::Grasp {
                    self.suction = false;
                    let back = self.targets.map(|t| t.q_pre_grasp).unwrap_or(self.config.stow_joints);
                    self.start_arm_move(inp, back, self.config.arm_move_duration);
                }
            }
            MissionPhase::ArmDeploy => {
                self.targets = None;
                if !changed {
                    self.stable_since = None;
                }
            }
            MissionPhase::Grasp => {
                self.budget.grasp_attempts += 1;
                self.suction = true;
                if let Some(t) = self.targets {
                    self.start_arm_move(inp, t.q_grasp, self.config.grasp_move_duration);
                }
            }
            MissionPhase::Transport => {
                self.leg = TransportLeg::Lift;
                self.leg_since = inp.time;
                let mut lift = inp.ins.pose();
                lift.yaw = self.hover_yaw;
                lift.down -= self.config.transport_lift;
                self.goal = lift;
            }
            MissionPhase::Done | MissionPhase::Abort(_) => {
                self.suction = false;
            }
            _ => {}
        }
    }

    fn current_goal(&self) -> Pose4 {
        match self.phase {
            MissionPhase::Descend => self.descend_goal,
            MissionPhase::Survey => {
                let last = self.plan.waypoints.len().saturating_sub(1);
                self.plan
                    .waypoints
                    .get(self.next_waypoint.min(last))
                    .copied()
                    .unwrap_or(self.goal)
            }
            MissionPhase::Approach | MissionPhase::StabilizeHover | MissionPhase::ArmDeploy | MissionPhase::Grasp => {
                self.hover_goal()
            }
            _ => self.goal,
        }
    }

    /// Pose placing the arm mount `hover_altitude` minus the mount height above the object.
    fn hover_goal(&self) -> Pose4 {
        let Some(obj) = self.object_estimate else {
            return self.goal;
        };
        let mount = rotate_yaw(self.hover_yaw, &self.arm.mount());
        Pose4::new(
            obj.x - mount.x + self.nudge.x,
            obj.y - mount.y + self.nudge.y,
            obj.z - self.config.hover_altitude + self.nudge.z,
            self.hover_yaw,
        )
    }

    fn refresh_object(&mut self, inp: &MissionInputs) {
        if let Some(d) = &inp.detection {
            self.object_estimate = Some(inp.ins.position + d.offset);
        }
    }

    fn track_stability(&mut self, inp: &MissionInputs) -> bool {
        let e = pose_error(&self.hover_goal(), &inp.ins.pose());
        let norm = e.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < self.config.stabilize_threshold {
            let since = *self.stable_since.get_or_insert(inp.time);
            inp.time - since >= self.config.stabilize_dwell
        } else {
            self.stable_since = None;
            false
        }
    }

    fn plan_arm(&mut self, inp: &MissionInputs) -> Option<MissionEvent> {
        let obj = self.object_estimate?;
        let offset = obj - inp.ins.position;
        match pre_grasp_arm_target(&offset, inp.ins.yaw, &self.arm, self.config.grasp_standoff) {
            Ok(t) => {
                self.targets = Some(t);
                self.start_arm_move(inp, t.q_pre_grasp, self.config.arm_move_duration);
                None
            }
            Err(err) => {
                self.budget.repositions += 1;
                if self.budget.repositions > self.config.max_repositions {
                    return Some(MissionEvent::RepositionExhausted);
                }
                // Shift the hover pose along the mount-to-object line toward the reachable shell.
                let to_object = rotate_yaw(inp.ins.yaw, &rotate_yaw(self.arm.mount_yaw, &err.target));
                let distance = to_object.norm();
                let step = self.config.reposition_step;
                if distance > 0.0 {
                    let sign = if distance > self.arm.max_reach() { 1.0 } else { -1.0 };
                    self.nudge += to_object / distance * step * sign;
                } else {
                    self.nudge.z -= step;
                }
                Some(MissionEvent::ArmUnreachable)
            }
        }
    }

    fn advance_transport(&mut self, inp: &MissionInputs) -> Option<MissionEvent> {
        let cfg = &self.config;
        let e = pose_error(&self.goal, &inp.ins.pose());
        let dist = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
        let dropoff = Vector3::from(cfg.dropoff_point);
        let tool = self.arm.mount() + rotate_yaw(self.arm.mount_yaw, &forward_kinematics(&self.arm, &self.arm_goal));
        let tool_world = rotate_yaw(self.hover_yaw, &tool);
        match self.leg {
            TransportLeg::Lift if dist <= cfg.approach_tolerance => {
                self.leg = TransportLeg::Transit;
                self.goal.north = dropoff.x - tool_world.x;
                self.goal.east = dropoff.y - tool_world.y;
            }
            TransportLeg::Transit if dist <= cfg.approach_tolerance => {
                self.leg = TransportLeg::Lower;
                self.goal.down = dropoff.z - cfg.release_height - tool_world.z;
            }
            TransportLeg::Lower if dist <= cfg.stabilize_threshold => {
                self.leg = TransportLeg::Release;
                self.leg_since = inp.time;
                self.suction = false;
            }
            TransportLeg::Release if inp.time - self.leg_since >= cfg.release_dwell => {
                return Some(MissionEvent::Delivered);
            }
            _ => {}
        }
        None
    }

    fn start_arm_move(&mut self, inp: &MissionInputs, goal: [f64; 3], duration: f64) {
        self.arm_move = Some((QuinticMove::new(inp.joints.q, goal, duration), inp.time));
        self.arm_goal = goal;
    }

    fn arm_move_finished(&self, time: f64) -> bool {
        self.arm_move.is_none_or(|(m, t0)| m.is_finished(time - t0))
    }

    fn arm_settled(&self, inp: &MissionInputs) -> bool {
        let tol = self.config.arm_settle_tolerance;
        self.arm_move_finished(inp.time)
            && inp
                .joints
                .q
                .iter()
                .zip(&self.arm_goal)
                .all(|(q, g)| (q - g).abs() <= tol)
            && inp.joints.q_dot.iter().all(|v| v.abs() <= tol)
    }

    fn arm_reference(&self, time: f64) -> JointTrajectoryPoint {
        match self.arm_move {
            Some((m, t0)) => m.sample(time - t0),
            None => JointTrajectoryPoint::hold(self.arm_goal),
        }
    }
}
