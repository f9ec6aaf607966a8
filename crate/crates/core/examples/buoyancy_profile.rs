//! Net down-axis force on the default vehicle from the surface to the
//! seafloor. Denser water lifts the vehicle; hull compression sinks it.

use hadal_sim::dynamics::{net_buoyancy_force, Environment, VehicleParams};
use hadal_sim::sensing::{depth_to_pressure, pressure_to_depth};

pub fn run() -> Vec<(f64, f64)> {
    let env = Environment::default();
    let params = VehicleParams::default();
    println!(
        "{:>8} {:>12} {:>10} {:>12}",
        "depth_m", "pressure_MPa", "volume_m3", "net_force_N"
    );
    let mut rows = Vec::new();
    for depth in (0..=6000).step_by(500).map(f64::from) {
        let force = net_buoyancy_force(&params, &env, depth);
        let pressure = depth_to_pressure(depth, &env);
        // The depth gauge inverts the same pressure model.
        debug_assert!((pressure_to_depth(pressure, &env) - depth).abs() < 1e-6);
        println!(
            "{depth:>8.0} {:>12.3} {:>10.6} {force:>12.3}",
            pressure / 1e6,
            params.hull_volume(&env, depth)
        );
        rows.push((depth, force));
    }
    rows
}

#[allow(dead_code)]
fn main() {
    run();
}
