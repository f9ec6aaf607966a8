//! Hold a pose at 6000 m against a cross current with the PID position loop
//! and the eight-thruster allocation. Feedback is the true pose here; the
//! full simulation closes the loop through the INS instead.

use hadal_sim::control::{Frame, PositionController, WrenchCommand};
use hadal_sim::dynamics::{step_vehicle, Environment, VehicleState};
use hadal_sim::geometry::Pose4;
use hadal_sim::harness::ScenarioConfig;

/// Returns the final position error [m].
pub fn run() -> f64 {
    let config = ScenarioConfig::default();
    let env = Environment {
        current_velocity: [0.05, 0.1, 0.0],
        ..config.environment.clone()
    };
    let setpoint = Pose4::new(0.0, 0.0, 6000.0, 0.5);
    let mut controller = PositionController::new(config.pid.clone(), config.thruster_layout().unwrap());
    let mut state = VehicleState::at_rest(Pose4::new(-3.0, 2.0, 5996.0, 0.0));
    let mut wrench = WrenchCommand::zero(Frame::Body);
    let (physics_dt, divisor) = (config.physics_dt(), config.control_divisor());

    println!("{:>6} {:>9} {:>9} {:>9} {:>8}", "t_s", "err_m", "fx_N", "fz_N", "yaw");
    for k in 0..=18_000u64 {
        if k % divisor == 0 {
            let out = controller
                .update(&setpoint, &state.pose(), config.control_dt())
                .unwrap();
            wrench = out.applied;
            if k % 1500 == 0 {
                println!(
                    "{:>6.0} {:>9.4} {:>9.2} {:>9.2} {:>8.4}",
                    k as f64 * physics_dt,
                    (state.position - setpoint.position()).norm(),
                    wrench.fx,
                    wrench.fz,
                    state.yaw
                );
            }
        }
        state = step_vehicle(&state, &config.vehicle, &env, &wrench, physics_dt).unwrap();
    }
    (state.position - setpoint.position()).norm()
}

#[allow(dead_code)]
fn main() {
    let err = run();
    println!("final error {err:.4} m");
}
