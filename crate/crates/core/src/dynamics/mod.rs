//! Vehicle plant: 4-DOF rigid body with depth-dependent buoyancy, drag,
//! water currents, and the free target object.

mod environment;
mod object;
mod vehicle;

pub use environment::{CurrentKnot, Environment};
pub use object::{attach_object, carry_object, detach_object, settle_object, FreeObject, GraspError};
pub use vehicle::{drag_force, net_buoyancy_force, step_vehicle, DynamicsError, VehicleParams, VehicleState};
