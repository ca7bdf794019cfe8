//! Capability maps of a seven-DoF human arm model.
//!
//! The crate covers the offline half of a range-of-motion rehabilitation
//! workflow: arm kinematics ([`arm`]), range-of-motion extraction from
//! skeleton-tracking recordings ([`rom`]), voxelized capability-map
//! generation and lookup ([`capmap`]), map comparison, convex-hull cue
//! meshes, difficulty regions and spawn planning ([`analysis`]), and
//! balloon-pop session analytics ([`session`]). The [`cli`] module backs the
//! `reachmap` binary.

pub mod analysis;
pub mod arm;
pub mod capmap;
pub mod cli;
pub mod rom;
pub mod session;
