//! Occupancy-centric toolkit for articulated human motion.
//!
//! The crate turns motion sequences into paired human / pseudo-scene
//! occupancy grids, simulates goal-reaching motion with an analytic
//! occupancy-field regulator, and scores the results (goal distance,
//! foot sliding, scene penetration, trajectory edit distance, cylinder
//! path feasibility).
//!
//! Everything in here is deterministic and `no_std` + `alloc`: all float
//! math goes through [`libm`] so results are bit-identical across std and
//! no_std builds. IO, file formats and the CLI live in the companion
//! `occu-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod control;
pub mod field;
pub mod loss;
pub mod math;
pub mod metrics;
pub mod motion;
pub mod occupancy;
pub mod rng;

pub use math::{Mat3, Rot6, Vec3};
pub use motion::{
    CanonicalFrame, CapsuleBody, MotionSequence, Pose, Skeleton, SkeletonLandmarks,
};
pub use occupancy::{GridSpec, OccupancyGrid, OccupancyProvider};
