//! Headless simulator and control stack for a hadal-depth AUV carrying a
//! 3-DOF suction manipulator.

pub mod control;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod manipulator;
pub mod mission;
pub mod sensing;
