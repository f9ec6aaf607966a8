//! Mission phases and the transition table.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The non-terminal phases, used to name where a timeout happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseKind {
    Descend,
    Survey,
    Approach,
    StabilizeHover,
    ArmDeploy,
    Grasp,
    Transport,
}

impl PhaseKind {
    pub const ALL: [Self; 7] = [
        Self::Descend,
        Self::Survey,
        Self::Approach,
        Self::StabilizeHover,
        Self::ArmDeploy,
        Self::Grasp,
        Self::Transport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Descend => "descend",
            Self::Survey => "survey",
            Self::Approach => "approach",
            Self::StabilizeHover => "stabilize_hover",
            Self::ArmDeploy => "arm_deploy",
            Self::Grasp => "grasp",
            Self::Transport => "transport",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum AbortReason {
    Timeout { phase: PhaseKind },
    GraspFailed { attempts: u32 },
    ArmUnreachable { repositions: u32 },
    NonFiniteState,
}

impl fmt::Display for AbortReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Timeout { phase } => write!(f, "timeout:{}", phase.name()),
            Self::GraspFailed { attempts } => write!(f, "grasp_failed:{attempts}"),
            Self::ArmUnreachable { repositions } => write!(f, "arm_unreachable:{repositions}"),
            Self::NonFiniteState => f.write_str("non_finite_state"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissionPhase {
    Descend,
    Survey,
    Approach,
    StabilizeHover,
    ArmDeploy,
    Grasp,
    Transport,
    Done,
    Abort(AbortReason),
}

impl MissionPhase {
    pub fn kind(&self) -> Option<PhaseKind> {
        Some(match self {
            Self::Descend => PhaseKind::Descend,
            Self::Survey => PhaseKind::Survey,
            Self::Approach => PhaseKind::Approach,
            Self::StabilizeHover => PhaseKind::StabilizeHover,
            Self::ArmDeploy => PhaseKind::ArmDeploy,
            Self::Grasp => PhaseKind::Grasp,
            Self::Transport => PhaseKind::Transport,
            Self::Done | Self::Abort(_) => return None,
        })
    }

    pub fn from_kind(kind: PhaseKind) -> Self {
        match kind {
            PhaseKind::Descend => Self::Descend,
            PhaseKind::Survey => Self::Survey,
            PhaseKind::Approach => Self::Approach,
            PhaseKind::StabilizeHover => Self::StabilizeHover,
            PhaseKind::ArmDeploy => Self::ArmDeploy,
            PhaseKind::Grasp => Self::Grasp,
            PhaseKind::Transport => Self::Transport,
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.kind().is_none()
    }

    /// Short label used in logs.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Done => "done",
            Self::Abort(_) => "abort",
            other => other.kind().map(PhaseKind::name).unwrap_or_default(),
        }
    }
}

impl fmt::Display for MissionPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Abort(reason) => write!(f, "abort({reason})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissionEvent {
    DepthCaptured,
    WaypointCaptured,
    TargetDetected,
    ApproachReached,
    HoverStable,
    ArmUnreachable,
    RepositionExhausted,
    PreGraspReached,
    AttachConfirmed,
    AttachRejected,
    Delivered,
    Timeout,
    NumericalFault,
}

impl MissionEvent {
    pub const ALL: [Self; 13] = [
        Self::DepthCaptured,
        Self::WaypointCaptured,
        Self::TargetDetected,
        Self::ApproachReached,
        Self::HoverStable,
        Self::ArmUnreachable,
        Self::RepositionExhausted,
        Self::PreGraspReached,
        Self::AttachConfirmed,
        Self::AttachRejected,
        Self::Delivered,
        Self::Timeout,
        Self::NumericalFault,
    ];
}

/// Counters the table needs to resolve bounded retries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RetryBudget {
    /// Grasp attempts made so far, including the one in progress.
    pub grasp_attempts: u32,
    pub max_grasp_retries: u32,
    pub repositions: u32,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("no transition from {from} on {event:?}")]
pub struct InvalidTransition {
    pub from: MissionPhase,
    pub event: MissionEvent,
}

/// The transition table.
pub fn transition(
    phase: MissionPhase,
    event: MissionEvent,
    budget: &RetryBudget,
) -> Result<MissionPhase, InvalidTransition> {
    use MissionEvent as E;
    use MissionPhase as P;
    let invalid = || InvalidTransition { from: phase, event };
    let Some(kind) = phase.kind() else {
        return Err(invalid());
    };
    let next = match (phase, event) {
        (_, E::Timeout) => P::Abort(AbortReason::Timeout { phase: kind }),
        (_, E::NumericalFault) => P::Abort(AbortReason::NonFiniteState),
        (P::Descend, E::DepthCaptured) => P::Survey,
        (P::Survey, E::WaypointCaptured) => P::Survey,
        (P::Survey, E::TargetDetected) => P::Approach,
        (P::Approach, E::ApproachReached) => P::StabilizeHover,
        (P::StabilizeHover, E::HoverStable) => P::ArmDeploy,
        (P::ArmDeploy, E::ArmUnreachable) => P::ArmDeploy,
        (P::ArmDeploy, E::RepositionExhausted) => P::Abort(AbortReason::ArmUnreachable {
            repositions: budget.repositions,
        }),
        (P::ArmDeploy, E::PreGraspReached) => P::Grasp,
        (P::Grasp, E::AttachConfirmed) => P::Transport,
        (P::Grasp, E::AttachRejected) if budget.grasp_attempts <= budget.max_grasp_retries => P::StabilizeHover,
        (P::Grasp, E::AttachRejected) => P::Abort(AbortReason::GraspFailed {
            attempts: budget.grasp_attempts,
        }),
        (P::Transport, E::Delivered) => P::Done,
        _ => return Err(invalid()),
    };
    Ok(next)
}

/// Whether `from → to` is an edge of the mission graph. Self-loops of
/// non-terminal phases and aborts from any non-terminal phase are edges.
pub fn is_declared_edge(from: &MissionPhase, to: &MissionPhase) -> bool {
    use MissionPhase as P;
    if from.is_terminal() {
        return false;
    }
    if from == to || matches!(to, P::Abort(_)) {
        return true;
    }
    matches!(
        (from, to),
        (P::Descend, P::Survey)
            | (P::Survey, P::Approach)
            | (P::Approach, P::StabilizeHover)
            | (P::StabilizeHover, P::ArmDeploy)
            | (P::ArmDeploy, P::Grasp)
            | (P::Grasp, P::Transport)
            | (P::Grasp, P::StabilizeHover)
            | (P::Transport, P::Done)
    )
}
