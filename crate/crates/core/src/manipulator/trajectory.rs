use super::{ArmGeometry, JointTrajectoryPoint, KinematicsError};

/// Rest-to-rest quintic move of all three joints over a common duration.
///
/// Each joint follows `q0 + Δ·(10s³ − 15s⁴ + 6s⁵)` with `s = t/T`, so velocity
/// and acceleration vanish at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuinticMove {
    pub start: [f64; 3],
    pub goal: [f64; 3],
    pub duration: f64,
}

impl QuinticMove {
    pub fn new(start: [f64; 3], goal: [f64; 3], duration: f64) -> Self {
        assert!(duration > 0.0, "quintic duration must be > 0");
        Self { start, goal, duration }
    }

    /// Reference at time `t` since the start, held at the ends outside `[0, T]`.
    pub fn sample(&self, t: f64) -> JointTrajectoryPoint {
        let big_t = self.duration;
        let s = (t / big_t).clamp(0.0, 1.0);
        let (s2, s3) = (s * s, s * s * s);
        let pos = s3 * (10.0 - 15.0 * s + 6.0 * s2);
        let vel = 30.0 * s2 * (1.0 - 2.0 * s + s2) / big_t;
        let acc = 60.0 * s * (1.0 - 3.0 * s + 2.0 * s2) / (big_t * big_t);
        let mut point = JointTrajectoryPoint::default();
        for j in 0..3 {
            let delta = self.goal[j] - self.start[j];
            point.q_target[j] = self.start[j] + delta * pos;
            point.q_dot_target[j] = delta * vel;
            point.q_ddot_target[j] = delta * acc;
        }
        if s >= 1.0 {
            point.q_target = self.goal;
        }
        point
    }

    pub fn is_finished(&self, t: f64) -> bool {
        t >= self.duration
    }
}

/// A trajectory sample with its time offset from the start of the move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimedPoint {
    pub time: f64,
    pub point: JointTrajectoryPoint,
}

/// Samples a quintic move at `rate` Hz from `t = 0` through `t = duration`.
pub fn plan_joint_trajectory(
    geom: &ArmGeometry,
    q_start: [f64; 3],
    q_goal: [f64; 3],
    duration: f64,
    rate: f64,
) -> Result<Vec<TimedPoint>, KinematicsError> {
    assert!(duration > 0.0 && rate > 0.0, "duration and rate must be > 0");
    for q in [&q_start, &q_goal] {
        for (joint, (value, [min, max])) in q.iter().zip(&geom.joint_limits).enumerate() {
            if value < min || value > max {
                return Err(KinematicsError::JointLimitViolation {
                    joint,
                    value: *value,
                    min: *min,
                    max: *max,
                });
            }
        }
    }
    let profile = QuinticMove::new(q_start, q_goal, duration);
    let steps = (duration * rate).ceil() as usize;
    Ok((0..=steps)
        .map(|k| {
            let time = (k as f64 / rate).min(duration);
            TimedPoint {
                time,
                point: profile.sample(time),
            }
        })
        .collect())
}
