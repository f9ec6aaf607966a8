//! Reach a seafloor point with the suction arm: inverse kinematics for the
//! goal, a quintic joint move from the stowed pose, and the acceleration
//! feed-forward law integrated at the control rate.

use hadal_sim::manipulator::{
    accel_feedforward, forward_kinematics, integrate_joint_command, inverse_kinematics, ArmControlGains, ArmGeometry,
    JointState, QuinticMove,
};
use nalgebra::Vector3;

/// Returns the final end-effector position error [m].
pub fn run() -> f64 {
    let geom = ArmGeometry::default();
    let gains = ArmControlGains::default();
    // 0.45 m ahead of and 0.3 m below the arm base.
    let target = Vector3::new(0.45, 0.1, 0.3);
    let goal = inverse_kinematics(&geom, &target).expect("target within reach");
    println!("IK solution q = [{:.4}, {:.4}, {:.4}] rad", goal[0], goal[1], goal[2]);

    let stow = [0.0, -0.5, -2.5];
    let motion = QuinticMove::new(stow, goal, 4.0);
    let dt = 0.1;
    let mut state = JointState::at_rest(stow);
    for k in 0..=100 {
        let t = k as f64 * dt;
        let reference = motion.sample(t);
        let cmd = accel_feedforward(&gains, &reference, &state, &geom);
        if k % 10 == 0 {
            let ee = forward_kinematics(&geom, &state.q);
            println!(
                "t={t:>4.1}  q=[{:>7.4} {:>7.4} {:>7.4}]  ee=({:.3}, {:.3}, {:.3})",
                state.q[0], state.q[1], state.q[2], ee.x, ee.y, ee.z
            );
        }
        state = integrate_joint_command(&state, &cmd, &geom, dt);
    }
    (forward_kinematics(&geom, &state.q) - target).norm()
}

#[allow(dead_code)]
fn main() {
    println!("final end-effector error {:.2e} m", run());
}
