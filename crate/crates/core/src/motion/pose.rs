use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::math::{wrap_angle, Rot6, Vec3};
use crate::motion::canonical::canonical_frame_or_prev;
use crate::motion::kinematics::forward_kinematics;
use crate::motion::skeleton::Skeleton;

/// One frame of articulated motion. Rotations use the continuous 6D
/// encoding; `joint_rot[0]` is carried for uniform indexing but ignored
/// (the root's orientation is `root_rot`).
#[derive(Debug, Clone, PartialEq)]
pub struct Pose {
    pub root_pos: Vec3,
    pub root_rot: Rot6,
    pub joint_rot: Vec<Rot6>,
}

impl Pose {
    /// Rest pose: identity rotations everywhere, root at `root_pos`.
    pub fn rest(skeleton: &Skeleton, root_pos: Vec3) -> Pose {
        Pose {
            root_pos,
            root_rot: Rot6::IDENTITY,
            joint_rot: vec![Rot6::IDENTITY; skeleton.joint_count()],
        }
    }

    fn is_finite(&self) -> bool {
        self.root_pos.iter().all(|v| v.is_finite())
            && self.root_rot.0.iter().all(|v| v.is_finite())
            && self
                .joint_rot
                .iter()
                .all(|r| r.0.iter().all(|v| v.is_finite()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MotionError {
    #[error("motion has no frames")]
    NoFrames,
    #[error("fps must be positive and finite, got {0}")]
    BadFps(f64),
    #[error("frame {frame}: {got} joint rotations, skeleton has {want} joints")]
    JointCountMismatch { frame: usize, got: usize, want: usize },
    #[error("frame {frame} contains a non-finite value")]
    NonFinite { frame: usize },
    #[error("frame {frame}: cannot orient body (shoulder/hip axes vanish) and no prior frame to fall back on")]
    DegenerateFacing { frame: usize },
}

/// A fixed-rate sequence of poses over one skeleton. Frame `i` is at time
/// `i / fps` seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionSequence {
    skeleton: Skeleton,
    fps: f64,
    frames: Vec<Pose>,
}

impl MotionSequence {
    pub fn new(skeleton: Skeleton, fps: f64, frames: Vec<Pose>) -> Result<Self, MotionError> {
        if !(fps > 0.0) || !fps.is_finite() {
            return Err(MotionError::BadFps(fps));
        }
        if frames.is_empty() {
            return Err(MotionError::NoFrames);
        }
        let want = skeleton.joint_count();
        for (frame, pose) in frames.iter().enumerate() {
            if pose.joint_rot.len() != want {
                return Err(MotionError::JointCountMismatch {
                    frame,
                    got: pose.joint_rot.len(),
                    want,
                });
            }
            if !pose.is_finite() {
                return Err(MotionError::NonFinite { frame });
            }
        }
        Ok(MotionSequence {
            skeleton,
            fps,
            frames,
        })
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    pub fn frames(&self) -> &[Pose] {
        &self.frames
    }

    pub fn frame(&self, i: usize) -> &Pose {
        &self.frames[i]
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Time span from the first to the last frame, in seconds.
    pub fn duration(&self) -> f64 {
        (self.frames.len().saturating_sub(1)) as f64 / self.fps
    }
}

/// Per-frame finite-difference velocities of a sequence.
///
/// `root_linear[i]` and `joint_linear[i][j]` are world-frame m/s,
/// `yaw_rate[i]` is the rad/s rate of the body facing (the canonical-frame
/// yaw). Backward differences scaled by fps; frame 0 copies frame 1 so the
/// arrays align with the frames (a single-frame sequence gets zeros).
#[derive(Debug, Clone, PartialEq)]
pub struct Velocities {
    pub root_linear: Vec<Vec3>,
    pub joint_linear: Vec<Vec<Vec3>>,
    pub yaw_rate: Vec<f64>,
}

pub fn finite_velocities(seq: &MotionSequence) -> Result<Velocities, MotionError> {
    let n = seq.len();
    let skeleton = seq.skeleton();
    let j = skeleton.joint_count();

    let mut positions = Vec::with_capacity(n);
    let mut yaws = Vec::with_capacity(n);
    let mut prev_yaw = None;
    for (i, pose) in seq.frames().iter().enumerate() {
        let fk = forward_kinematics(skeleton, pose)
            .map_err(|_| MotionError::NonFinite { frame: i })?;
        let frame = canonical_frame_or_prev(skeleton, &fk, prev_yaw)
            .map_err(|_| MotionError::DegenerateFacing { frame: i })?;
        prev_yaw = Some(frame.yaw);
        positions.push(fk.positions);
        yaws.push(frame.yaw);
    }

    let fps = seq.fps();
    let mut root_linear = vec![Vec3::zeros(); n];
    let mut joint_linear = vec![vec![Vec3::zeros(); j]; n];
    let mut yaw_rate = vec![0.0; n];
    for i in 1..n {
        root_linear[i] = (seq.frame(i).root_pos - seq.frame(i - 1).root_pos) * fps;
        for k in 0..j {
            joint_linear[i][k] = (positions[i][k] - positions[i - 1][k]) * fps;
        }
        yaw_rate[i] = wrap_angle(yaws[i] - yaws[i - 1]) * fps;
    }
    if n > 1 {
        root_linear[0] = root_linear[1];
        joint_linear[0] = joint_linear[1].clone();
        yaw_rate[0] = yaw_rate[1];
    }

    Ok(Velocities {
        root_linear,
        joint_linear,
        yaw_rate,
    })
}
