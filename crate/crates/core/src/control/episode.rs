use alloc::vec::Vec;

use crate::control::state::TargetSchedule;
use crate::math::Vec3;
use crate::motion::{MotionError, MotionSequence, Pose, Skeleton};

/// One recorded step of a rollout. World frame throughout; canonical
/// quantities are re-derivable from the pose.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeFrame {
    /// Simulation time, seconds.
    pub time: f64,
    pub pose: Pose,
    /// World joint positions (forward kinematics of `pose`).
    pub joint_positions: Vec<Vec3>,
    /// Realized world velocities (backward difference; zeros on frame 0).
    pub root_velocity: Vec3,
    pub joint_velocities: Vec<Vec3>,
    /// Distinct scene voxels penetrated by the body this frame.
    pub penetrating_voxels: usize,
    /// Braking magnitude per regulated joint this step, m/s.
    pub correction_magnitudes: Vec<f64>,
    /// Fingerprint of the occupancy cube the policy saw this step.
    pub cube_hash: u64,
}

/// Full rollout record: enough to replay, score, and export.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    pub skeleton: Skeleton,
    /// Control rate, steps per second.
    pub rate: f64,
    pub frames: Vec<EpisodeFrame>,
    pub schedule: TargetSchedule,
    /// Whether field regulation was active.
    pub regulation: bool,
    /// Seed recorded for provenance (the rollout itself is deterministic;
    /// the seed is whatever the scenario generator used).
    pub seed: u64,
}

impl EpisodeResult {
    pub fn duration(&self) -> f64 {
        self.frames.len() as f64 / self.rate
    }

    /// Re-packs the rolled-out poses as a plain motion sequence (e.g. to
    /// voxelize a rollout or export it like any other motion).
    pub fn to_motion(&self) -> Result<MotionSequence, MotionError> {
        MotionSequence::new(
            self.skeleton.clone(),
            self.rate,
            self.frames.iter().map(|f| f.pose.clone()).collect(),
        )
    }
}
