use serde::{Deserialize, Serialize};

use crate::geometry::{wrap_angle, Pose4};

/// Rate limits applied when moving the setpoint toward a goal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionLimits {
    pub horizontal_speed: f64,
    pub vertical_speed: f64,
    pub yaw_rate: f64,
    /// Deceleration used to slow the setpoint ahead of the goal [m/s²].
    pub decel: f64,
    pub yaw_decel: f64,
}

/// Setpoint that walks toward the goal at bounded speed and slows down on
/// arrival, so the position loop never sees a step larger than one tick of
/// motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceGenerator {
    setpoint: Pose4,
}

fn approach(distance: f64, cap: f64, decel: f64, dt: f64) -> f64 {
    let speed = cap.min((2.0 * decel * distance).sqrt());
    (speed * dt).min(distance)
}

impl ReferenceGenerator {
    pub fn new(start: Pose4) -> Self {
        Self { setpoint: start }
    }

    pub fn setpoint(&self) -> Pose4 {
        self.setpoint
    }

    pub fn advance(&mut self, goal: &Pose4, limits: &MotionLimits, dt: f64) -> Pose4 {
        let sp = &mut self.setpoint;

        let (dn, de) = (goal.north - sp.north, goal.east - sp.east);
        let horizontal = dn.hypot(de);
        if horizontal > 0.0 {
            let step = approach(horizontal, limits.horizontal_speed, limits.decel, dt);
            if step >= horizontal {
                sp.north = goal.north;
                sp.east = goal.east;
            } else {
                sp.north += dn / horizontal * step;
                sp.east += de / horizontal * step;
            }
        }

        let dd = goal.down - sp.down;
        let step = approach(dd.abs(), limits.vertical_speed, limits.decel, dt);
        sp.down = if step >= dd.abs() {
            goal.down
        } else {
            sp.down + dd.signum() * step
        };

        let dyaw = wrap_angle(goal.yaw - sp.yaw);
        let step = approach(dyaw.abs(), limits.yaw_rate, limits.yaw_decel, dt);
        sp.yaw = if step >= dyaw.abs() {
            goal.yaw
        } else {
            wrap_angle(sp.yaw + dyaw.signum() * step)
        };

        self.setpoint
    }
}
