//! Mission executive: descent, lawnmower survey, hover-and-grasp, transport.

mod config;
mod coverage;
mod executive;
mod grasp;
mod phase;
mod reference;

pub use config::{MissionConfig, PhaseTimeouts};
pub use coverage::{
    plan_lawnmower, waypoint_reached, CoverageError, CoveragePlan, StartCorner, SurveyBounds, DEFAULT_CAPTURE_RADIUS,
};
pub use executive::{GraspFeedback, MissionExecutive, MissionInputs, MissionOutput, TransitionRecord, TransportLeg};
pub use grasp::{pre_grasp_arm_target, GraspTargets, UnreachableFromHover};
pub use phase::{
    is_declared_edge, transition, AbortReason, InvalidTransition, MissionEvent, MissionPhase, PhaseKind, RetryBudget,
};
pub use reference::{MotionLimits, ReferenceGenerator};
