//! 3-DOF suction arm: geometric kinematics, acceleration-level feed-forward
//! control, and joint-space trajectory generation.

mod feedforward;
mod kinematics;
mod trajectory;

pub use feedforward::{accel_feedforward, integrate_joint_command, ArmControlGains, JointState, JointTrajectoryPoint};
pub use kinematics::{
    end_effector_pose, end_effector_world_position, forward_kinematics, inverse_kinematics, world_to_arm_frame,
    ArmGeometry, EndEffectorPose, KinematicsError, REACH_TOLERANCE,
};
pub use trajectory::{plan_joint_trajectory, QuinticMove, TimedPoint};
