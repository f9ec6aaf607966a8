use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::control::{Frame, WrenchCommand};
use crate::dynamics::Environment;
use crate::error::{ensure, ValidationError};
use crate::geometry::{body_to_world_xy, world_to_body_xy, wrap_angle, Pose4};

/// Rigid-body parameters of the vehicle in the four controlled axes
/// (surge, sway, heave, yaw).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VehicleParams {
    /// Dry mass [kg].
    pub mass: f64,
    /// Added mass per axis [kg, kg, kg, kg·m²].
    pub added_mass: [f64; 4],
    /// Rigid-body yaw inertia [kg·m²].
    pub inertia_yaw: f64,
    /// Linear damping per axis [N·s/m, N·m·s/rad for yaw].
    pub linear_drag: [f64; 4],
    /// Quadratic damping per axis [N·s²/m²].
    pub quadratic_drag: [f64; 4],
    /// Displaced volume at the surface [m³].
    pub hull_volume_surface: f64,
    /// Bulk modulus of the hull [Pa].
    pub hull_bulk_modulus: f64,
    /// Thrust limit of a single thruster [N].
    pub max_thrust_per_thruster: f64,
}

impl Default for VehicleParams {
    /// Illustrative values only; they are not measured vehicle data.
    fn default() -> Self {
        Self {
            mass: 512.5,
            added_mass: [50.0, 75.0, 150.0, 20.0],
            inertia_yaw: 60.0,
            linear_drag: [20.0, 30.0, 40.0, 20.0],
            quadratic_drag: [80.0, 120.0, 60.0, 30.0],
            hull_volume_surface: 0.5,
            hull_bulk_modulus: 2.2e9,
            max_thrust_per_thruster: 150.0,
        }
    }
}

impl VehicleParams {
    pub fn validate(&self) -> Result<(), ValidationError> {
        ensure(self.mass > 0.0, "vehicle.mass", "must be > 0")?;
        ensure(self.inertia_yaw > 0.0, "vehicle.inertia_yaw", "must be > 0")?;
        ensure(
            self.added_mass.iter().all(|m| *m >= 0.0),
            "vehicle.added_mass",
            "entries must be >= 0",
        )?;
        ensure(
            self.linear_drag.iter().all(|d| *d >= 0.0),
            "vehicle.linear_drag",
            "entries must be >= 0",
        )?;
        ensure(
            self.quadratic_drag.iter().all(|d| *d >= 0.0),
            "vehicle.quadratic_drag",
            "entries must be >= 0",
        )?;
        ensure(
            self.hull_volume_surface > 0.0,
            "vehicle.hull_volume_surface",
            "must be > 0",
        )?;
        ensure(self.hull_bulk_modulus > 0.0, "vehicle.hull_bulk_modulus", "must be > 0")?;
        ensure(
            self.max_thrust_per_thruster > 0.0,
            "vehicle.max_thrust_per_thruster",
            "must be > 0",
        )?;
        Ok(())
    }

    /// Effective inertia per axis, rigid body plus added mass.
    pub fn effective_inertia(&self) -> [f64; 4] {
        [
            self.mass + self.added_mass[0],
            self.mass + self.added_mass[1],
            self.mass + self.added_mass[2],
            self.inertia_yaw + self.added_mass[3],
        ]
    }

    /// Hull volume at `depth` under linear-elastic compression.
    pub fn hull_volume(&self, env: &Environment, depth: f64) -> f64 {
        let pressure = env.density_at(depth) * env.gravity * depth;
        self.hull_volume_surface * (1.0 - pressure / self.hull_bulk_modulus)
    }
}

/// Ground-truth vehicle state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleState {
    /// NED position [m]; `z` is depth.
    pub position: Vector3<f64>,
    /// Heading [rad], kept in `(-π, π]`.
    pub yaw: f64,
    /// Body-frame velocity `[u, v, w, r]` (m/s and rad/s).
    pub body_velocity: [f64; 4],
    pub time: f64,
}

impl VehicleState {
    pub fn at_rest(pose: Pose4) -> Self {
        Self {
            position: pose.position(),
            yaw: wrap_angle(pose.yaw),
            body_velocity: [0.0; 4],
            time: 0.0,
        }
    }

    pub fn pose(&self) -> Pose4 {
        Pose4::from_position(&self.position, self.yaw)
    }

    /// Velocity over ground in NED.
    pub fn world_velocity(&self) -> Vector3<f64> {
        let [u, v, w, _] = self.body_velocity;
        let (n, e) = body_to_world_xy(self.yaw, u, v);
        Vector3::new(n, e, w)
    }

    /// Kinetic energy including added mass.
    pub fn kinetic_energy(&self, params: &VehicleParams) -> f64 {
        let inertia = params.effective_inertia();
        (0..4)
            .map(|i| 0.5 * inertia[i] * self.body_velocity[i] * self.body_velocity[i])
            .sum()
    }

    fn is_finite(&self) -> bool {
        self.position.iter().all(|p| p.is_finite())
            && self.yaw.is_finite()
            && self.body_velocity.iter().all(|v| v.is_finite())
            && self.time.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("non-finite vehicle state at t = {time} s")]
    NonFiniteState { time: f64 },
    #[error("timestep {0} s outside (0, 0.1]")]
    InvalidTimestep(f64),
    #[error("wrench must be expressed in the body frame")]
    WrongFrame,
}

/// Down-axis force from weight and depth-dependent buoyancy; positive sinks.
///
/// Density grows linearly with depth and the hull compresses linearly with
/// the local pressure `ρ(d)·g·d` over the bulk modulus.
pub fn net_buoyancy_force(params: &VehicleParams, env: &Environment, depth: f64) -> f64 {
    let weight = params.mass * env.gravity;
    let displaced = env.density_at(depth) * env.gravity * params.hull_volume(env, depth);
    weight - displaced
}

/// Linear plus quadratic damping, opposing the relative velocity per axis.
pub fn drag_force(params: &VehicleParams, relative_velocity: [f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| {
        let v = relative_velocity[i];
        -(params.linear_drag[i] * v + params.quadratic_drag[i] * v * v.abs())
    })
}

/// Advances the vehicle by one semi-implicit Euler step.
///
/// Velocity is updated first from thrust, drag on the water-relative velocity,
/// and net buoyancy; the pose then advances with the new velocity. Depth is
/// clamped to `[0, seafloor_depth]` and heave velocity into the boundary is
/// removed.
pub fn step_vehicle(
    state: &VehicleState,
    params: &VehicleParams,
    env: &Environment,
    body_wrench: &WrenchCommand,
    dt: f64,
) -> Result<VehicleState, DynamicsError> {
    if !(dt > 0.0 && dt <= 0.1) {
        return Err(DynamicsError::InvalidTimestep(dt));
    }
    if body_wrench.frame != Frame::Body {
        return Err(DynamicsError::WrongFrame);
    }

    let depth = state.position.z;
    let current = env.current_at(depth);
    let (cu, cv) = world_to_body_xy(state.yaw, current.x, current.y);
    let [u, v, w, r] = state.body_velocity;
    let relative = [u - cu, v - cv, w - current.z, r];
    let drag = drag_force(params, relative);
    let buoyancy = net_buoyancy_force(params, env, depth);

    let applied = [
        body_wrench.fx + drag[0],
        body_wrench.fy + drag[1],
        body_wrench.fz + drag[2] + buoyancy,
        body_wrench.tau_yaw + drag[3],
    ];
    let inertia = params.effective_inertia();
    let mut velocity = state.body_velocity;
    for i in 0..4 {
        velocity[i] += applied[i] / inertia[i] * dt;
    }

    let (dn, de) = body_to_world_xy(state.yaw, velocity[0], velocity[1]);
    let mut position = Vector3::new(
        state.position.x + dn * dt,
        state.position.y + de * dt,
        state.position.z + velocity[2] * dt,
    );
    let yaw = wrap_angle(state.yaw + velocity[3] * dt);

    if position.z <= 0.0 {
        position.z = 0.0;
        if velocity[2] < 0.0 {
            velocity[2] = 0.0;
        }
    } else if position.z >= env.seafloor_depth {
        position.z = env.seafloor_depth;
        if velocity[2] > 0.0 {
            velocity[2] = 0.0;
        }
    }

    let next = VehicleState {
        position,
        yaw,
        body_velocity: velocity,
        time: state.time + dt,
    };
    if next.is_finite() {
        Ok(next)
    } else {
        Err(DynamicsError::NonFiniteState { time: next.time })
    }
}
