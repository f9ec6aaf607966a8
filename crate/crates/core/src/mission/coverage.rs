use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{wrap_angle, Pose4};
use crate::sensing::InsEstimate;

/// Axis-aligned survey rectangle in the horizontal NED plane [m].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurveyBounds {
    pub north_min: f64,
    pub north_max: f64,
    pub east_min: f64,
    pub east_max: f64,
}

impl SurveyBounds {
    pub fn height(&self) -> f64 {
        self.north_max - self.north_min
    }

    pub fn width(&self) -> f64 {
        self.east_max - self.east_min
    }

    pub fn contains(&self, north: f64, east: f64) -> bool {
        (self.north_min..=self.north_max).contains(&north) && (self.east_min..=self.east_max).contains(&east)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartCorner {
    #[default]
    SouthWest,
    SouthEast,
    NorthWest,
    NorthEast,
}

impl StartCorner {
    fn at_north_max(self) -> bool {
        matches!(self, Self::NorthWest | Self::NorthEast)
    }

    fn at_east_max(self) -> bool {
        matches!(self, Self::SouthEast | Self::NorthEast)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverageError {
    #[error("degenerate survey bounds: {width} m x {height} m")]
    DegenerateBounds { width: f64, height: f64 },
    #[error("lane spacing must be > 0, got {0}")]
    InvalidSpacing(f64),
}

pub const DEFAULT_CAPTURE_RADIUS: f64 = 1.0;

/// Serpentine waypoint list. Waypoints come in pairs: `2i` starts lane `i`,
/// `2i + 1` ends it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveragePlan {
    pub waypoints: Vec<Pose4>,
    pub capture_radius: f64,
    pub survey_depth: f64,
    pub lane_spacing: f64,
}

impl CoveragePlan {
    pub fn lane_count(&self) -> usize {
        self.waypoints.len() / 2
    }

    /// Lane segments as `(start, end)` pairs.
    pub fn lanes(&self) -> impl Iterator<Item = (&Pose4, &Pose4)> {
        self.waypoints.chunks_exact(2).map(|p| (&p[0], &p[1]))
    }

    /// Horizontal distance from a point to the closest lane segment.
    pub fn distance_to_nearest_lane(&self, north: f64, east: f64) -> f64 {
        self.lanes()
            .map(|(a, b)| segment_distance((a.north, a.east), (b.north, b.east), (north, east)))
            .fold(f64::INFINITY, f64::min)
    }
}

fn segment_distance(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let s = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p.0 - a.0 - s * dx).hypot(p.1 - a.1 - s * dy)
}

/// Cross-track lane positions from the starting edge toward the far edge.
fn lane_offsets(lo: f64, hi: f64, spacing: f64, from_hi: bool) -> Vec<f64> {
    let extent = hi - lo;
    if spacing >= extent {
        return vec![lo + 0.5 * extent];
    }
    let mut offsets = Vec::new();
    let mut k = 0.0;
    while k * spacing < extent {
        offsets.push(if from_hi { hi - k * spacing } else { lo + k * spacing });
        k += 1.0;
    }
    offsets.push(if from_hi { lo } else { hi });
    offsets
}

/// Boustrophedon coverage of `bounds` with lanes parallel to its long side.
///
/// Lanes are `spacing` apart starting on the edge of `start`, with the last
/// lane clamped to the far edge. When `spacing` is at least the short side a
/// single lane runs down the middle.
pub fn plan_lawnmower(
    bounds: &SurveyBounds,
    spacing: f64,
    depth: f64,
    start: StartCorner,
) -> Result<CoveragePlan, CoverageError> {
    let (width, height) = (bounds.width(), bounds.height());
    if !(width > 0.0 && height > 0.0) {
        return Err(CoverageError::DegenerateBounds { width, height });
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(CoverageError::InvalidSpacing(spacing));
    }

    let along_north = height >= width;
    let (along, cross) = if along_north {
        (
            (bounds.north_min, bounds.north_max, start.at_north_max()),
            (bounds.east_min, bounds.east_max, start.at_east_max()),
        )
    } else {
        (
            (bounds.east_min, bounds.east_max, start.at_east_max()),
            (bounds.north_min, bounds.north_max, start.at_north_max()),
        )
    };
    let (a_lo, a_hi, mut reversed) = along;
    let offsets = lane_offsets(cross.0, cross.1, spacing, cross.2);

    let mut waypoints = Vec::with_capacity(2 * offsets.len());
    for c in offsets {
        let (from, to) = if reversed { (a_hi, a_lo) } else { (a_lo, a_hi) };
        let yaw = match (along_north, reversed) {
            (true, false) => 0.0,
            (true, true) => PI,
            (false, false) => FRAC_PI_2,
            (false, true) => -FRAC_PI_2,
        };
        for a in [from, to] {
            let (north, east) = if along_north { (a, c) } else { (c, a) };
            waypoints.push(Pose4::new(north, east, depth, yaw));
        }
        reversed = !reversed;
    }

    Ok(CoveragePlan {
        waypoints,
        capture_radius: DEFAULT_CAPTURE_RADIUS,
        survey_depth: depth,
        lane_spacing: spacing,
    })
}

/// Position within `capture_radius` (3-D) and heading within `yaw_tolerance`.
pub fn waypoint_reached(ins: &InsEstimate, waypoint: &Pose4, capture_radius: f64, yaw_tolerance: f64) -> bool {
    let distance = (ins.position - waypoint.position()).norm();
    distance <= capture_radius && wrap_angle(waypoint.yaw - ins.yaw).abs() <= yaw_tolerance
}
