use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::math::Vec3;

/// Joint indices of the landmarks the rest of the crate needs by role:
/// the canonical frame is built from shoulders and hips, goal targets and
/// contact flags use hands and feet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkeletonLandmarks {
    pub left_shoulder: usize,
    pub right_shoulder: usize,
    pub left_hip: usize,
    pub right_hip: usize,
    pub left_hand: usize,
    pub right_hand: usize,
    pub left_foot: usize,
    pub right_foot: usize,
    pub head: usize,
}

impl SkeletonLandmarks {
    /// Hands then feet, the four end effectors in the order used by goal
    /// targets and regulation.
    pub fn end_effectors(&self) -> [usize; 4] {
        [
            self.left_hand,
            self.right_hand,
            self.left_foot,
            self.right_foot,
        ]
    }

    /// Root + end effectors, the five points a goal pose pins down.
    pub fn goal_points(&self) -> [usize; 5] {
        [
            0,
            self.left_hand,
            self.right_hand,
            self.left_foot,
            self.right_foot,
        ]
    }

    fn all(&self) -> [usize; 9] {
        [
            self.left_shoulder,
            self.right_shoulder,
            self.left_hip,
            self.right_hip,
            self.left_hand,
            self.right_hand,
            self.left_foot,
            self.right_foot,
            self.head,
        ]
    }
}

/// Rigid articulated skeleton: a parent tree with fixed bone offsets.
///
/// Joint 0 is the root (pelvis). `offsets[i]` is the translation from
/// parent to joint `i` in the parent's frame; `bone_radii[i]` is the
/// capsule radius of the bone ending at joint `i` (entry 0 belongs to no
/// bone but must still be positive).
#[derive(Debug, Clone, PartialEq)]
pub struct Skeleton {
    parents: Vec<usize>,
    offsets: Vec<Vec3>,
    bone_radii: Vec<f64>,
    names: Vec<String>,
    landmarks: SkeletonLandmarks,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SkeletonError {
    #[error("skeleton needs at least 2 joints, got {0}")]
    TooFewJoints(usize),
    #[error("parents/offsets/radii/names lengths differ")]
    LengthMismatch,
    #[error("joint 0 must be its own parent (root), got parent {0}")]
    BadRoot(usize),
    #[error("joint {child}: parent {parent} is not an earlier joint")]
    ParentNotEarlier { child: usize, parent: usize },
    #[error("bone radius {index} must be positive and finite, got {value}")]
    BadRadius { index: usize, value: f64 },
    #[error("landmark index {0} out of range")]
    LandmarkOutOfRange(usize),
}

impl Skeleton {
    /// Validates the tree: parents must be topologically ordered
    /// (`parents[i] < i` for i > 0, `parents[0] == 0`), radii positive,
    /// landmarks in range.
    pub fn new(
        parents: Vec<usize>,
        offsets: Vec<Vec3>,
        bone_radii: Vec<f64>,
        names: Vec<String>,
        landmarks: SkeletonLandmarks,
    ) -> Result<Self, SkeletonError> {
        let j = parents.len();
        if j < 2 {
            return Err(SkeletonError::TooFewJoints(j));
        }
        if offsets.len() != j || bone_radii.len() != j || names.len() != j {
            return Err(SkeletonError::LengthMismatch);
        }
        if parents[0] != 0 {
            return Err(SkeletonError::BadRoot(parents[0]));
        }
        for (child, &parent) in parents.iter().enumerate().skip(1) {
            if parent >= child {
                return Err(SkeletonError::ParentNotEarlier { child, parent });
            }
        }
        for (index, &value) in bone_radii.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(SkeletonError::BadRadius { index, value });
            }
        }
        for idx in landmarks.all() {
            if idx >= j {
                return Err(SkeletonError::LandmarkOutOfRange(idx));
            }
        }
        Ok(Skeleton {
            parents,
            offsets,
            bone_radii,
            names,
            landmarks,
        })
    }

    pub fn joint_count(&self) -> usize {
        self.parents.len()
    }

    pub fn parent(&self, joint: usize) -> usize {
        self.parents[joint]
    }

    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn offset(&self, joint: usize) -> Vec3 {
        self.offsets[joint]
    }

    pub fn offsets(&self) -> &[Vec3] {
        &self.offsets
    }

    pub fn bone_radius(&self, joint: usize) -> f64 {
        self.bone_radii[joint]
    }

    pub fn bone_radii(&self) -> &[f64] {
        &self.bone_radii
    }

    pub fn name(&self, joint: usize) -> &str {
        &self.names[joint]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn landmarks(&self) -> &SkeletonLandmarks {
        &self.landmarks
    }

    /// 17-joint humanoid used by the synthetic generators and tests.
    ///
    /// T-pose faces +X, shoulders along the Y axis, feet on the ground
    /// plane (root sits at height 0.90 m when standing). Torso bones are
    /// thick (0.14 m), limbs thin (0.05 m).
    pub fn default_humanoid() -> Skeleton {
        let names: Vec<String> = [
            "root",
            "spine",
            "chest",
            "neck",
            "head",
            "l_shoulder",
            "l_elbow",
            "l_hand",
            "r_shoulder",
            "r_elbow",
            "r_hand",
            "l_hip",
            "l_knee",
            "l_foot",
            "r_hip",
            "r_knee",
            "r_foot",
        ]
        .iter()
        .map(|s| String::from(*s))
        .collect();

        let parents = vec![0, 0, 1, 2, 3, 2, 5, 6, 2, 8, 9, 0, 11, 12, 0, 14, 15];
        let offsets = vec![
            Vec3::zeros(),
            Vec3::new(0.0, 0.0, 0.22),
            Vec3::new(0.0, 0.0, 0.22),
            Vec3::new(0.0, 0.0, 0.12),
            Vec3::new(0.0, 0.0, 0.18),
            Vec3::new(0.0, 0.20, 0.05),
            Vec3::new(0.0, 0.28, 0.0),
            Vec3::new(0.0, 0.26, 0.0),
            Vec3::new(0.0, -0.20, 0.05),
            Vec3::new(0.0, -0.28, 0.0),
            Vec3::new(0.0, -0.26, 0.0),
            Vec3::new(0.0, 0.10, -0.05),
            Vec3::new(0.0, 0.0, -0.42),
            Vec3::new(0.0, 0.0, -0.43),
            Vec3::new(0.0, -0.10, -0.05),
            Vec3::new(0.0, 0.0, -0.42),
            Vec3::new(0.0, 0.0, -0.43),
        ];
        let bone_radii = vec![
            0.14, 0.14, 0.14, 0.14, 0.10, 0.09, 0.05, 0.05, 0.09, 0.05, 0.05, 0.14, 0.05,
            0.05, 0.14, 0.05, 0.05,
        ];
        let landmarks = SkeletonLandmarks {
            left_shoulder: 5,
            right_shoulder: 8,
            left_hip: 11,
            right_hip: 14,
            left_hand: 7,
            right_hand: 10,
            left_foot: 13,
            right_foot: 16,
            head: 4,
        };
        Skeleton::new(parents, offsets, bone_radii, names, landmarks)
            .expect("default humanoid is valid")
    }
}
