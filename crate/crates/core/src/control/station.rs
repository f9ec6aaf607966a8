use super::{allocate_thrusters, pid_step, pose_error, world_to_body, AllocationError, PidGains, PidState};
use super::{ThrusterLayout, WrenchCommand, THRUSTER_COUNT};
use crate::geometry::Pose4;

/// What one controller update produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlOutput {
    pub world_wrench: WrenchCommand,
    pub body_wrench: WrenchCommand,
    pub thrusts: [f64; THRUSTER_COUNT],
    /// Body wrench the clamped thrusts actually produce.
    pub applied: WrenchCommand,
}

/// PID, frame rotation and allocation chained together. It only ever sees
/// the estimated pose, never the true one.
#[derive(Debug, Clone)]
pub struct PositionController {
    gains: PidGains,
    layout: ThrusterLayout,
    state: PidState,
}

impl PositionController {
    pub fn new(gains: PidGains, layout: ThrusterLayout) -> Self {
        Self {
            gains,
            layout,
            state: PidState::default(),
        }
    }

    pub fn layout(&self) -> &ThrusterLayout {
        &self.layout
    }

    pub fn pid_state(&self) -> &PidState {
        &self.state
    }

    pub fn update(&mut self, setpoint: &Pose4, estimate: &Pose4, dt: f64) -> Result<ControlOutput, AllocationError> {
        let (world_wrench, state) = pid_step(&self.gains, &self.state, pose_error(setpoint, estimate), dt);
        self.state = state;
        let body_wrench = world_to_body(&world_wrench, estimate.yaw);
        let thrusts = allocate_thrusters(&self.layout, &body_wrench)?;
        Ok(ControlOutput {
            world_wrench,
            body_wrench,
            thrusts,
            applied: self.layout.wrench_from(&thrusts),
        })
    }
}
