//! Articulated motion: skeleton description, poses, forward kinematics,
//! the canonical ground frame, and the capsule body used for occupancy.

mod body;
mod canonical;
mod kinematics;
mod pose;
mod skeleton;

pub use body::{Capsule, CapsuleBody};
pub use canonical::{
    canonical_frame, canonical_frame_or_prev, CanonicalError, CanonicalFrame,
};
pub use kinematics::{forward_kinematics, FkResult};
pub use pose::{finite_velocities, MotionError, MotionSequence, Pose, Velocities};
pub use skeleton::{Skeleton, SkeletonError, SkeletonLandmarks};
