use serde::{Deserialize, Serialize};

use super::{MotionLimits, PhaseKind, StartCorner, SurveyBounds};
use crate::error::{ensure, ValidationError};

/// Per-phase time budget [s].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseTimeouts {
    pub descend: f64,
    pub survey: f64,
    pub approach: f64,
    pub stabilize_hover: f64,
    pub arm_deploy: f64,
    pub grasp: f64,
    pub transport: f64,
}

impl Default for PhaseTimeouts {
    fn default() -> Self {
        Self {
            descend: 5000.0,
            survey: 2000.0,
            approach: 300.0,
            stabilize_hover: 120.0,
            arm_deploy: 120.0,
            grasp: 60.0,
            transport: 600.0,
        }
    }
}

impl PhaseTimeouts {
    pub fn get(&self, kind: PhaseKind) -> f64 {
        match kind {
            PhaseKind::Descend => self.descend,
            PhaseKind::Survey => self.survey,
            PhaseKind::Approach => self.approach,
            PhaseKind::StabilizeHover => self.stabilize_hover,
            PhaseKind::ArmDeploy => self.arm_deploy,
            PhaseKind::Grasp => self.grasp,
            PhaseKind::Transport => self.transport,
        }
    }
}

impl Default for SurveyBounds {
    fn default() -> Self {
        Self {
            north_min: -15.0,
            north_max: 15.0,
            east_min: -6.0,
            east_max: 6.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MissionConfig {
    pub target_depth: f64,
    /// Depth band that ends the descent [m].
    pub depth_capture: f64,

    pub survey_bounds: SurveyBounds,
    pub lane_spacing: f64,
    pub start_corner: StartCorner,
    pub capture_radius: f64,
    pub yaw_tolerance: f64,

    /// Vehicle height above the detected object while grasping [m].
    pub hover_altitude: f64,
    pub approach_tolerance: f64,
    pub stabilize_threshold: f64,
    pub stabilize_dwell: f64,

    pub grasp_standoff: f64,
    /// Largest suction-cup-to-object distance at which attachment succeeds [m].
    pub grasp_gap: f64,
    pub max_grasp_retries: u32,
    pub stow_joints: [f64; 3],
    pub arm_move_duration: f64,
    pub grasp_move_duration: f64,
    pub arm_settle_tolerance: f64,
    pub max_repositions: u32,
    pub reposition_step: f64,

    pub dropoff_point: [f64; 3],
    /// Climb before the transit leg [m].
    pub transport_lift: f64,
    /// Height of the carried object above the drop-off point at release [m].
    pub release_height: f64,
    pub release_dwell: f64,

    pub descent_speed: f64,
    pub survey_speed: f64,
    pub approach_speed: f64,
    pub transport_speed: f64,
    pub yaw_rate: f64,
    pub decel: f64,
    pub yaw_decel: f64,

    pub timeouts: PhaseTimeouts,
}

impl Default for MissionConfig {
    fn default() -> Self {
        Self {
            target_depth: 6000.0,
            depth_capture: 0.25,
            survey_bounds: SurveyBounds::default(),
            lane_spacing: 4.0,
            start_corner: StartCorner::SouthWest,
            capture_radius: 1.0,
            yaw_tolerance: 0.25,
            hover_altitude: 1.0,
            approach_tolerance: 0.2,
            stabilize_threshold: 0.15,
            stabilize_dwell: 3.0,
            grasp_standoff: 0.1,
            grasp_gap: 0.08,
            max_grasp_retries: 2,
            stow_joints: [0.0, -0.5, -2.5],
            arm_move_duration: 4.0,
            grasp_move_duration: 2.0,
            arm_settle_tolerance: 0.01,
            max_repositions: 5,
            reposition_step: 0.1,
            dropoff_point: [-10.0, 0.0, 6004.0],
            transport_lift: 1.5,
            release_height: 0.1,
            release_dwell: 3.0,
            descent_speed: 2.0,
            survey_speed: 0.5,
            approach_speed: 0.3,
            transport_speed: 0.3,
            yaw_rate: 0.2,
            decel: 0.1,
            yaw_decel: 0.1,
            timeouts: PhaseTimeouts::default(),
        }
    }
}

impl MissionConfig {
    pub fn validate(&self) -> Result<(), ValidationError> {
        let positive = [
            ("mission.target_depth", self.target_depth),
            ("mission.depth_capture", self.depth_capture),
            ("mission.lane_spacing", self.lane_spacing),
            ("mission.capture_radius", self.capture_radius),
            ("mission.yaw_tolerance", self.yaw_tolerance),
            ("mission.hover_altitude", self.hover_altitude),
            ("mission.approach_tolerance", self.approach_tolerance),
            ("mission.stabilize_threshold", self.stabilize_threshold),
            ("mission.grasp_gap", self.grasp_gap),
            ("mission.arm_move_duration", self.arm_move_duration),
            ("mission.grasp_move_duration", self.grasp_move_duration),
            ("mission.arm_settle_tolerance", self.arm_settle_tolerance),
            ("mission.reposition_step", self.reposition_step),
            ("mission.descent_speed", self.descent_speed),
            ("mission.survey_speed", self.survey_speed),
            ("mission.approach_speed", self.approach_speed),
            ("mission.transport_speed", self.transport_speed),
            ("mission.yaw_rate", self.yaw_rate),
            ("mission.decel", self.decel),
            ("mission.yaw_decel", self.yaw_decel),
        ];
        for (field, v) in positive {
            ensure(v > 0.0 && v.is_finite(), field, "must be > 0")?;
        }
        let nonneg = [
            ("mission.stabilize_dwell", self.stabilize_dwell),
            ("mission.grasp_standoff", self.grasp_standoff),
            ("mission.transport_lift", self.transport_lift),
            ("mission.release_height", self.release_height),
            ("mission.release_dwell", self.release_dwell),
        ];
        for (field, v) in nonneg {
            ensure(v >= 0.0 && v.is_finite(), field, "must be >= 0")?;
        }
        let b = &self.survey_bounds;
        ensure(
            b.width() > 0.0 && b.height() > 0.0,
            "mission.survey_bounds",
            "max must exceed min on both axes",
        )?;
        ensure(
            self.dropoff_point.iter().all(|v| v.is_finite()),
            "mission.dropoff_point",
            "must be finite",
        )?;
        for kind in PhaseKind::ALL {
            let t = self.timeouts.get(kind);
            ensure(
                t > 0.0 && !t.is_nan(),
                &format!("mission.timeouts.{}", kind.name()),
                "must be > 0",
            )?;
        }
        Ok(())
    }

    pub(crate) fn limits(&self, kind: Option<PhaseKind>) -> MotionLimits {
        let horizontal_speed = match kind {
            Some(PhaseKind::Descend | PhaseKind::Survey) => self.survey_speed,
            Some(PhaseKind::Transport) => self.transport_speed,
            _ => self.approach_speed,
        };
        let vertical_speed = match kind {
            Some(PhaseKind::Descend | PhaseKind::Survey) => self.descent_speed,
            _ => self.approach_speed,
        };
        MotionLimits {
            horizontal_speed,
            vertical_speed,
            yaw_rate: self.yaw_rate,
            decel: self.decel,
            yaw_decel: self.yaw_decel,
        }
    }
}
