use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, ValidationError};

/// One knot of a piecewise-linear current profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurrentKnot {
    /// Depth of the knot [m].
    pub depth: f64,
    /// Water velocity at that depth, NED [m/s].
    pub velocity: [f64; 3],
}

/// Water column and seafloor description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Environment {
    /// Water density at the surface [kg/m³].
    pub water_density_surface: f64,
    /// Linear density increase with depth [kg/m³ per m].
    pub density_gradient: f64,
    /// Gravitational acceleration [m/s²].
    pub gravity: f64,
    /// Depth of the flat seafloor [m].
    pub seafloor_depth: f64,
    /// Constant water velocity, NED [m/s]. Ignored when `current_profile` is non-empty.
    pub current_velocity: [f64; 3],
    /// Optional depth profile, knots sorted by depth; clamped outside the covered range.
    pub current_profile: Vec<CurrentKnot>,
}

impl Default for Environment {
    fn default() -> Self {
        Self {
            water_density_surface: 1025.0,
            density_gradient: 0.005,
            gravity: 9.81,
            seafloor_depth: 6004.0,
            current_velocity: [0.0; 3],
            current_profile: Vec::new(),
        }
    }
}

impl Environment {
    pub fn validate(&self) -> Result<(), ValidationError> {
        ensure(
            self.water_density_surface > 0.0,
            "environment.water_density_surface",
            "must be > 0",
        )?;
        ensure(self.gravity > 0.0, "environment.gravity", "must be > 0")?;
        ensure(self.seafloor_depth > 0.0, "environment.seafloor_depth", "must be > 0")?;
        ensure(
            self.density_gradient.is_finite(),
            "environment.density_gradient",
            "must be finite",
        )?;
        ensure(
            self.current_velocity.iter().all(|c| c.is_finite()),
            "environment.current_velocity",
            "must be finite",
        )?;
        ensure(
            self.current_profile.windows(2).all(|w| w[0].depth < w[1].depth),
            "environment.current_profile",
            "knots must be strictly increasing in depth",
        )?;
        Ok(())
    }

    /// Water density at `depth`.
    pub fn density_at(&self, depth: f64) -> f64 {
        self.water_density_surface + self.density_gradient * depth
    }

    /// Integrated hydrostatic pressure (gauge) at `depth`.
    pub fn hydrostatic_pressure(&self, depth: f64) -> f64 {
        (self.water_density_surface + 0.5 * self.density_gradient * depth) * self.gravity * depth
    }

    /// Water velocity (NED) at `depth`.
    pub fn current_at(&self, depth: f64) -> Vector3<f64> {
        let knots = &self.current_profile;
        let v = match knots.len() {
            0 => self.current_velocity,
            1 => knots[0].velocity,
            _ => {
                let first = &knots[0];
                let last = &knots[knots.len() - 1];
                if depth <= first.depth {
                    first.velocity
                } else if depth >= last.depth {
                    last.velocity
                } else {
                    let i = knots.partition_point(|k| k.depth <= depth);
                    let (a, b) = (&knots[i - 1], &knots[i]);
                    let s = (depth - a.depth) / (b.depth - a.depth);
                    std::array::from_fn(|j| a.velocity[j] + s * (b.velocity[j] - a.velocity[j]))
                }
            }
        };
        Vector3::from(v)
    }
}
