use thiserror::Error;

use crate::math::{atan2, rot_z, Mat3, Vec3};
use crate::motion::kinematics::FkResult;
use crate::motion::skeleton::Skeleton;

/// Ground-plane frame attached to a pose: origin under the root, +X along
/// the body facing. Heights are left untouched (the origin sits at z = 0),
/// so canonical z equals world z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalFrame {
    /// World yaw of the facing direction, radians about +Z.
    pub yaw: f64,
    /// World point mapped to the canonical origin; z is always 0.
    pub origin: Vec3,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalError {
    /// Shoulder and hip axes have no horizontal component (e.g. the body
    /// lies along the vertical), so no facing can be derived.
    #[error("facing direction is degenerate (no horizontal shoulder/hip axis)")]
    DegenerateFacing,
}

const FACING_EPS: f64 = 1e-6;

impl CanonicalFrame {
    pub fn to_canonical_point(&self, p: &Vec3) -> Vec3 {
        rot_z(-self.yaw) * (p - self.origin)
    }

    pub fn to_world_point(&self, p: &Vec3) -> Vec3 {
        rot_z(self.yaw) * p + self.origin
    }

    pub fn to_canonical_dir(&self, v: &Vec3) -> Vec3 {
        rot_z(-self.yaw) * v
    }

    pub fn to_world_dir(&self, v: &Vec3) -> Vec3 {
        rot_z(self.yaw) * v
    }

    pub fn to_canonical_rot(&self, r: &Mat3) -> Mat3 {
        rot_z(-self.yaw) * r
    }

    pub fn to_world_rot(&self, r: &Mat3) -> Mat3 {
        rot_z(self.yaw) * r
    }
}

/// Derives the canonical frame of a posed body.
///
/// The body's "right" is the sum of the left-to-right shoulder and hip
/// axes projected to the ground plane; facing is that vector rotated +90
/// degrees about +Z. The origin is the root projected to the ground.
pub fn canonical_frame(skeleton: &Skeleton, fk: &FkResult) -> Result<CanonicalFrame, CanonicalError> {
    let lm = skeleton.landmarks();
    let p = &fk.positions;
    let right3 = (p[lm.right_shoulder] - p[lm.left_shoulder])
        + (p[lm.right_hip] - p[lm.left_hip]);

    let rx = right3.x;
    let ry = right3.y;
    let norm = crate::math::hypot(rx, ry);
    if norm < FACING_EPS {
        return Err(CanonicalError::DegenerateFacing);
    }
    // right (rx, ry) rotated +90 degrees about +Z gives the facing
    let forward = (-ry / norm, rx / norm);
    let yaw = atan2(forward.1, forward.0);
    let root = p[0];
    Ok(CanonicalFrame {
        yaw,
        origin: Vec3::new(root.x, root.y, 0.0),
    })
}

/// Like [`canonical_frame`], but a degenerate facing falls back to
/// `prev_yaw` (keeping the current origin). With no previous yaw the
/// degeneracy is an error.
pub fn canonical_frame_or_prev(
    skeleton: &Skeleton,
    fk: &FkResult,
    prev_yaw: Option<f64>,
) -> Result<CanonicalFrame, CanonicalError> {
    match canonical_frame(skeleton, fk) {
        Ok(frame) => Ok(frame),
        Err(CanonicalError::DegenerateFacing) => {
            let yaw = prev_yaw.ok_or(CanonicalError::DegenerateFacing)?;
            let root = fk.positions[0];
            Ok(CanonicalFrame {
                yaw,
                origin: Vec3::new(root.x, root.y, 0.0),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{Rot6};
    use crate::motion::kinematics::forward_kinematics;
    use crate::motion::pose::Pose;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn fk_of(pose: &Pose) -> (Skeleton, FkResult) {
        let skeleton = Skeleton::default_humanoid();
        let fk = forward_kinematics(&skeleton, pose).unwrap();
        (skeleton, fk)
    }

    #[test]
    fn t_pose_faces_plus_x() {
        let skeleton = Skeleton::default_humanoid();
        let pose = Pose::rest(&skeleton, Vec3::new(2.0, -1.0, 0.9));
        let (_, fk) = fk_of(&pose);
        let frame = canonical_frame(&skeleton, &fk).unwrap();
        assert_relative_eq!(frame.yaw, 0.0, epsilon = 1e-12);
        assert_relative_eq!(frame.origin.x, 2.0, epsilon = 1e-12);
        assert_relative_eq!(frame.origin.y, -1.0, epsilon = 1e-12);
        assert_relative_eq!(frame.origin.z, 0.0, epsilon = 1e-12);
        // root keeps its height in canonical coordinates
        let c = frame.to_canonical_point(&fk.positions[0]);
        assert_relative_eq!(c.norm(), 0.9, epsilon = 1e-12);
        assert_relative_eq!(c.z, 0.9, epsilon = 1e-12);
    }

    #[test]
    fn rotated_pose_reports_its_yaw() {
        let skeleton = Skeleton::default_humanoid();
        let mut pose = Pose::rest(&skeleton, Vec3::new(0.0, 0.0, 0.9));
        let yaw = core::f64::consts::FRAC_PI_2;
        pose.root_rot = Rot6::from_matrix(&crate::math::rot_z(yaw));
        let fk = forward_kinematics(&skeleton, &pose).unwrap();
        let frame = canonical_frame(&skeleton, &fk).unwrap();
        assert_relative_eq!(frame.yaw, yaw, epsilon = 1e-12);

        // canonicalizing undoes the rotation: hands end up where the
        // unrotated T-pose has them
        let rest_fk = forward_kinematics(&skeleton, &Pose::rest(&skeleton, Vec3::new(0.0, 0.0, 0.9))).unwrap();
        let lm = skeleton.landmarks();
        let canon = frame.to_canonical_point(&fk.positions[lm.left_hand]);
        assert!((canon - rest_fk.positions[lm.left_hand]).norm() < 1e-12);
    }

    #[test]
    fn world_round_trip() {
        let frame = CanonicalFrame {
            yaw: 0.83,
            origin: Vec3::new(1.5, -0.25, 0.0),
        };
        let p = Vec3::new(0.3, 2.0, 1.1);
        let back = frame.to_world_point(&frame.to_canonical_point(&p));
        assert!((back - p).norm() < 1e-12);
    }

    #[test]
    fn lying_body_is_degenerate_and_falls_back() {
        let skeleton = Skeleton::default_humanoid();
        let mut pose = Pose::rest(&skeleton, Vec3::new(0.0, 0.0, 0.4));
        // roll 90 degrees about +X: shoulder/hip axes become vertical
        let roll = nalgebra::Rotation3::from_axis_angle(&nalgebra::Vector3::x_axis(), core::f64::consts::FRAC_PI_2);
        pose.root_rot = Rot6::from_matrix(roll.matrix());
        let fk = forward_kinematics(&skeleton, &pose).unwrap();

        assert_eq!(
            canonical_frame(&skeleton, &fk),
            Err(CanonicalError::DegenerateFacing)
        );
        let frame = canonical_frame_or_prev(&skeleton, &fk, Some(0.7)).unwrap();
        assert_relative_eq!(frame.yaw, 0.7);
        assert_eq!(
            canonical_frame_or_prev(&skeleton, &fk, None),
            Err(CanonicalError::DegenerateFacing)
        );
    }

    proptest! {
        /// The canonical encoding of a pose does not depend on the world
        /// frame it is expressed in.
        #[test]
        fn canonical_coordinates_are_frame_invariant(
            yaw in -3.0f64..3.0,
            tx in -4.0f64..4.0,
            ty in -4.0f64..4.0,
        ) {
            let skeleton = Skeleton::default_humanoid();
            let mut pose = Pose::rest(&skeleton, Vec3::new(0.4, 0.2, 0.9));
            pose.joint_rot[5] = Rot6::from_matrix(&crate::math::rot_z(0.5));
            let fk = forward_kinematics(&skeleton, &pose).unwrap();
            let frame = canonical_frame(&skeleton, &fk).unwrap();

            let rot = crate::math::rot_z(yaw);
            let t = Vec3::new(tx, ty, 0.0);
            let mut moved = pose.clone();
            moved.root_pos = rot * pose.root_pos + t;
            moved.root_rot = Rot6::from_matrix(&(rot * pose.root_rot.to_matrix().unwrap()));
            let moved_fk = forward_kinematics(&skeleton, &moved).unwrap();
            let moved_frame = canonical_frame(&skeleton, &moved_fk).unwrap();

            for j in 0..skeleton.joint_count() {
                let a = frame.to_canonical_point(&fk.positions[j]);
                let b = moved_frame.to_canonical_point(&moved_fk.positions[j]);
                prop_assert!((a - b).norm() < 1e-9, "joint {} differs: {:?} vs {:?}", j, a, b);
            }
        }
    }
}
