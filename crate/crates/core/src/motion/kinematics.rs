use alloc::vec::Vec;

use crate::math::{Mat3, RotationError, Vec3};
use crate::motion::pose::Pose;
use crate::motion::skeleton::Skeleton;

/// World-space joint transforms of one pose.
#[derive(Debug, Clone, PartialEq)]
pub struct FkResult {
    pub positions: Vec<Vec3>,
    pub rotations: Vec<Mat3>,
}

/// Standard forward kinematics over the parent tree:
/// `R_child = R_parent * local_rot(child)`,
/// `p_child = p_parent + R_parent * offset(child)`.
///
/// The root takes its position and orientation straight from the pose.
/// Fails only if a 6D rotation in the pose is degenerate.
pub fn forward_kinematics(skeleton: &Skeleton, pose: &Pose) -> Result<FkResult, RotationError> {
    let j = skeleton.joint_count();
    debug_assert_eq!(pose.joint_rot.len(), j);

    let mut positions = Vec::with_capacity(j);
    let mut rotations = Vec::with_capacity(j);
    positions.push(pose.root_pos);
    rotations.push(pose.root_rot.to_matrix()?);

    for child in 1..j {
        let parent = skeleton.parent(child);
        let local = pose.joint_rot[child].to_matrix()?;
        let rot = rotations[parent] * local;
        let pos = positions[parent] + rotations[parent] * skeleton.offset(child);
        positions.push(pos);
        rotations.push(rot);
    }

    Ok(FkResult {
        positions,
        rotations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{rot_z, Rot6};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn rest_pose_accumulates_offsets() {
        let skeleton = Skeleton::default_humanoid();
        let pose = Pose::rest(&skeleton, Vec3::new(0.0, 0.0, 0.9));
        let fk = forward_kinematics(&skeleton, &pose).unwrap();

        // chest = root + spine + chest offsets
        assert_relative_eq!(fk.positions[2].z, 0.9 + 0.44, epsilon = 1e-12);
        // feet on the ground
        let lm = skeleton.landmarks();
        assert_relative_eq!(fk.positions[lm.left_foot].z, 0.0, epsilon = 1e-12);
        assert_relative_eq!(fk.positions[lm.right_foot].z, 0.0, epsilon = 1e-12);
        // hands out along Y in the T-pose
        assert_relative_eq!(fk.positions[lm.left_hand].y, 0.74, epsilon = 1e-12);
        assert_relative_eq!(fk.positions[lm.right_hand].y, -0.74, epsilon = 1e-12);
        // head above everything
        assert!(fk.positions[lm.head].z > 1.6);
    }

    #[test]
    fn single_joint_rotation_moves_only_its_subtree() {
        let skeleton = Skeleton::default_humanoid();
        let rest = Pose::rest(&skeleton, Vec3::new(0.0, 0.0, 0.9));
        let rest_fk = forward_kinematics(&skeleton, &rest).unwrap();

        // swing the left shoulder; only the left arm chain may move
        let mut pose = rest.clone();
        pose.joint_rot[5] = Rot6::from_matrix(&rot_z(0.7));
        let fk = forward_kinematics(&skeleton, &pose).unwrap();

        for j in 0..skeleton.joint_count() {
            let moved = (fk.positions[j] - rest_fk.positions[j]).norm() > 1e-12;
            let in_arm = j == 6 || j == 7;
            assert_eq!(moved, in_arm, "joint {j}");
        }
    }

    #[test]
    fn bone_lengths_are_invariant_under_pose() {
        let skeleton = Skeleton::default_humanoid();
        let mut pose = Pose::rest(&skeleton, Vec3::new(1.0, -2.0, 0.8));
        pose.root_rot = Rot6::from_matrix(&rot_z(1.1));
        for (j, r) in pose.joint_rot.iter_mut().enumerate() {
            *r = Rot6::from_matrix(&rot_z(0.05 * j as f64 - 0.3));
        }
        let fk = forward_kinematics(&skeleton, &pose).unwrap();
        for child in 1..skeleton.joint_count() {
            let parent = skeleton.parent(child);
            let len = (fk.positions[child] - fk.positions[parent]).norm();
            assert_relative_eq!(len, skeleton.offset(child).norm(), epsilon = 1e-12);
        }
    }

    proptest! {
        /// Rigidly transforming the root transforms every joint the same way.
        #[test]
        fn fk_is_equivariant_under_root_motion(
            yaw in -3.0f64..3.0,
            tx in -5.0f64..5.0,
            ty in -5.0f64..5.0,
            tz in -1.0f64..1.0,
        ) {
            let skeleton = Skeleton::default_humanoid();
            let mut pose = Pose::rest(&skeleton, Vec3::new(0.0, 0.0, 0.9));
            pose.joint_rot[5] = Rot6::from_matrix(&rot_z(0.4));
            pose.joint_rot[12] = Rot6::from_matrix(&rot_z(-0.2));
            let base = forward_kinematics(&skeleton, &pose).unwrap();

            let rot = rot_z(yaw);
            let t = Vec3::new(tx, ty, tz);
            let mut moved = pose.clone();
            moved.root_pos = rot * pose.root_pos + t;
            moved.root_rot = Rot6::from_matrix(&(rot * pose.root_rot.to_matrix().unwrap()));
            let fk = forward_kinematics(&skeleton, &moved).unwrap();

            for j in 0..skeleton.joint_count() {
                let expected = rot * base.positions[j] + t;
                prop_assert!((fk.positions[j] - expected).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn degenerate_rotation_propagates_error() {
        let skeleton = Skeleton::default_humanoid();
        let mut pose = Pose::rest(&skeleton, Vec3::zeros());
        pose.joint_rot[3] = Rot6([0.0; 6]);
        assert!(forward_kinematics(&skeleton, &pose).is_err());
    }
}
