use alloc::vec::Vec;

use crate::math::{matrix_to_rot6, Rot6, Vec3};
use crate::motion::{
    canonical_frame_or_prev, finite_velocities, forward_kinematics, CanonicalFrame,
    MotionError, MotionSequence, Skeleton,
};
use crate::occupancy::CanonicalOccupancy;

/// Temporal geometry of the control loop: `history` past steps and
/// `future` predicted steps around the current one, at `rate` steps per
/// second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowConfig {
    pub history: usize,
    pub future: usize,
    pub rate: f64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig {
            history: 1,
            future: 1,
            rate: 10.0,
        }
    }
}

impl WindowConfig {
    pub fn dt(&self) -> f64 {
        1.0 / self.rate
    }
}

/// Height below which a foot counts as planted.
pub const CONTACT_HEIGHT: f64 = 0.05;

/// One frame's body state in its own canonical frame. Every vector is
/// expressed relative to the ground point under the root with +X the
/// facing direction, which removes global position and heading from the
/// encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseState {
    /// Canonical root position: always (0, 0, height) by construction,
    /// kept explicit because the height channel carries information.
    pub root_position: Vec3,
    /// Root orientation with the facing yaw removed.
    pub root_rotation: Rot6,
    /// Local joint rotations (already frame-invariant).
    pub joint_rotations: Vec<Rot6>,
    /// Canonical joint positions.
    pub joint_positions: Vec<Vec3>,
    /// Canonical root velocity, m/s.
    pub root_velocity: Vec3,
    /// Canonical joint velocities, m/s.
    pub joint_velocities: Vec<Vec3>,
    /// Facing yaw rate, rad/s.
    pub yaw_rate: f64,
    /// Left/right foot contact flags (foot height < [`CONTACT_HEIGHT`]).
    pub contacts: [bool; 2],
}

/// A window of past states, all canonicalized in the *current* frame so
/// the policy sees history as displacement from now. Entry 0 is the
/// oldest; the last entry is the current step. Root and end-effector
/// positions are kept per entry, velocities are kept for every joint.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryState {
    pub root_positions: Vec<Vec3>,
    pub ee_positions: Vec<[Vec3; 4]>,
    pub root_rotations: Vec<Rot6>,
    pub root_velocities: Vec<Vec3>,
    pub joint_velocities: Vec<Vec<Vec3>>,
    pub yaw_rates: Vec<f64>,
}

impl HistoryState {
    pub fn entries(&self) -> usize {
        self.root_positions.len()
    }
}

/// Goal pose reduced to five world points: root, left hand, right hand,
/// left foot, right foot. Masked-out points are ignored everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldTarget {
    pub points: [Vec3; 5],
    pub mask: [bool; 5],
}

impl WorldTarget {
    /// Full five-point target.
    pub fn all(points: [Vec3; 5]) -> WorldTarget {
        WorldTarget {
            points,
            mask: [true; 5],
        }
    }

    /// Root-only target at a ground position and height.
    pub fn root_at(p: Vec3) -> WorldTarget {
        WorldTarget {
            points: [p, Vec3::zeros(), Vec3::zeros(), Vec3::zeros(), Vec3::zeros()],
            mask: [true, false, false, false, false],
        }
    }

    /// Builds the five target points from a goal pose.
    pub fn from_pose_points(skeleton: &Skeleton, joint_positions: &[Vec3]) -> WorldTarget {
        let ids = skeleton.landmarks().goal_points();
        WorldTarget::all([
            joint_positions[ids[0]],
            joint_positions[ids[1]],
            joint_positions[ids[2]],
            joint_positions[ids[3]],
            joint_positions[ids[4]],
        ])
    }

    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }
}

/// [`WorldTarget`] mapped into a body's canonical frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetPoints {
    pub points: [Vec3; 5],
    pub mask: [bool; 5],
}

impl TargetPoints {
    pub fn from_world(target: &WorldTarget, frame: &CanonicalFrame) -> TargetPoints {
        let mut points = [Vec3::zeros(); 5];
        for (i, p) in target.points.iter().enumerate() {
            points[i] = frame.to_canonical_point(p);
        }
        TargetPoints {
            points,
            mask: target.mask,
        }
    }
}

/// Everything the policy conditions on besides its own state: the goal
/// (if any), the surrounding occupancy cube, and which joints the four
/// end-effector target slots refer to (left hand, right hand, left foot,
/// right foot).
pub struct ControlSignals {
    pub target: Option<TargetPoints>,
    pub cube: CanonicalOccupancy,
    pub ee_joint_ids: [usize; 4],
}

/// Piecewise-constant goal schedule: the active target at time `t` is the
/// latest keyframe at or before `t`. A `None` target means "no goal,
/// stabilize in place".
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TargetSchedule {
    keys: Vec<(f64, Option<WorldTarget>)>,
}

impl TargetSchedule {
    /// One goal from t = 0 onward.
    pub fn constant(target: WorldTarget) -> TargetSchedule {
        TargetSchedule {
            keys: alloc::vec![(0.0, Some(target))],
        }
    }

    pub fn new(mut keys: Vec<(f64, Option<WorldTarget>)>) -> TargetSchedule {
        keys.sort_by(|a, b| a.0.total_cmp(&b.0));
        TargetSchedule { keys }
    }

    pub fn keys(&self) -> &[(f64, Option<WorldTarget>)] {
        &self.keys
    }

    pub fn active(&self, time: f64) -> Option<&WorldTarget> {
        self.keys
            .iter()
            .rev()
            .find(|(t, _)| *t <= time)
            .and_then(|(_, target)| target.as_ref())
    }

    /// The goal in force at the end of the episode, the one success is
    /// judged against.
    pub fn last_target(&self) -> Option<&WorldTarget> {
        self.keys.iter().rev().find_map(|(_, t)| t.as_ref())
    }
}

pub(crate) struct FrameData {
    pub frame: CanonicalFrame,
    pub positions: Vec<Vec3>,
    pub root_rot_world: crate::math::Mat3,
}

/// Core of the pose encoding shared by sequence encoding and the rollout:
/// everything world-frame in, canonical out.
pub(crate) fn build_pose_state(
    skeleton: &Skeleton,
    data: &FrameData,
    joint_rotations: Vec<Rot6>,
    root_velocity_world: &Vec3,
    joint_velocities_world: &[Vec3],
    yaw_rate: f64,
) -> PoseState {
    let frame = &data.frame;
    let lm = skeleton.landmarks();
    let joint_positions: Vec<Vec3> = data
        .positions
        .iter()
        .map(|p| frame.to_canonical_point(p))
        .collect();
    let joint_velocities: Vec<Vec3> = joint_velocities_world
        .iter()
        .map(|v| frame.to_canonical_dir(v))
        .collect();
    let contacts = [
        data.positions[lm.left_foot].z < CONTACT_HEIGHT,
        data.positions[lm.right_foot].z < CONTACT_HEIGHT,
    ];
    PoseState {
        root_position: joint_positions[0],
        root_rotation: matrix_to_rot6(&frame.to_canonical_rot(&data.root_rot_world)),
        joint_rotations,
        joint_positions,
        root_velocity: frame.to_canonical_dir(root_velocity_world),
        joint_velocities,
        yaw_rate,
        contacts,
    }
}

/// Canonical state of frame `t` of a recorded sequence. Velocities are
/// backward differences (frame 0 copies frame 1).
pub fn encode_pose_state(seq: &MotionSequence, t: usize) -> Result<PoseState, MotionError> {
    let states = encode_sequence_states(seq)?;
    Ok(states.into_iter().nth(t).expect("frame index in range"))
}

/// Canonical states of every frame of a sequence.
pub fn encode_sequence_states(seq: &MotionSequence) -> Result<Vec<PoseState>, MotionError> {
    let skeleton = seq.skeleton();
    let vel = finite_velocities(seq)?;
    let mut out = Vec::with_capacity(seq.len());
    let mut prev_yaw = None;
    for (i, pose) in seq.frames().iter().enumerate() {
        let fk = forward_kinematics(skeleton, pose)
            .map_err(|_| MotionError::NonFinite { frame: i })?;
        let frame = canonical_frame_or_prev(skeleton, &fk, prev_yaw)
            .map_err(|_| MotionError::DegenerateFacing { frame: i })?;
        prev_yaw = Some(frame.yaw);
        let data = FrameData {
            frame,
            root_rot_world: pose.root_rot.to_matrix().map_err(|_| MotionError::NonFinite { frame: i })?,
            positions: fk.positions,
        };
        out.push(build_pose_state(
            skeleton,
            &data,
            pose.joint_rot.clone(),
            &vel.root_linear[i],
            &vel.joint_linear[i],
            vel.yaw_rate[i],
        ));
    }
    Ok(out)
}

/// History window ending at frame `t`, canonicalized in frame `t`'s
/// canonical frame. Frames before the sequence start repeat frame 0.
pub fn encode_history(
    seq: &MotionSequence,
    t: usize,
    window: usize,
) -> Result<HistoryState, MotionError> {
    let skeleton = seq.skeleton();
    let vel = finite_velocities(seq)?;
    let lm = skeleton.landmarks();

    // canonical frame of the current step governs the whole window
    let mut prev_yaw = None;
    let mut frames = Vec::with_capacity(t + 1);
    let mut fks = Vec::with_capacity(t + 1);
    for (i, pose) in seq.frames().iter().take(t + 1).enumerate() {
        let fk = forward_kinematics(skeleton, pose)
            .map_err(|_| MotionError::NonFinite { frame: i })?;
        let frame = canonical_frame_or_prev(skeleton, &fk, prev_yaw)
            .map_err(|_| MotionError::DegenerateFacing { frame: i })?;
        prev_yaw = Some(frame.yaw);
        frames.push(frame);
        fks.push(fk);
    }
    let now = frames[t];

    let mut history = HistoryState {
        root_positions: Vec::with_capacity(window + 1),
        ee_positions: Vec::with_capacity(window + 1),
        root_rotations: Vec::with_capacity(window + 1),
        root_velocities: Vec::with_capacity(window + 1),
        joint_velocities: Vec::with_capacity(window + 1),
        yaw_rates: Vec::with_capacity(window + 1),
    };
    for k in 0..=window {
        // oldest first; clamp below zero to frame 0 (repeat padding)
        let i = (t + k).saturating_sub(window);
        let fk = &fks[i];
        history.root_positions.push(now.to_canonical_point(&fk.positions[0]));
        history.ee_positions.push([
            now.to_canonical_point(&fk.positions[lm.left_hand]),
            now.to_canonical_point(&fk.positions[lm.right_hand]),
            now.to_canonical_point(&fk.positions[lm.left_foot]),
            now.to_canonical_point(&fk.positions[lm.right_foot]),
        ]);
        let rot_world = seq.frame(i).root_rot.to_matrix()
            .map_err(|_| MotionError::NonFinite { frame: i })?;
        history
            .root_rotations
            .push(matrix_to_rot6(&now.to_canonical_rot(&rot_world)));
        history
            .root_velocities
            .push(now.to_canonical_dir(&vel.root_linear[i]));
        history.joint_velocities.push(
            vel.joint_linear[i]
                .iter()
                .map(|v| now.to_canonical_dir(v))
                .collect(),
        );
        history.yaw_rates.push(vel.yaw_rate[i]);
    }
    Ok(history)
}
