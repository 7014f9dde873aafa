//! Motion sequences as JSON.
//!
//! The file is a single object: a skeleton description, a frame rate and
//! a list of frames. All rotations use the 6D encoding (first two matrix
//! columns). Unknown keys are rejected so typos fail loudly instead of
//! being silently dropped.

use super::write_atomic;
use anyhow::Context;
use occu_core::{MotionSequence, Pose, Skeleton, SkeletonLandmarks, Vec3};
use occu_core::math::Rot6;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionFile {
    pub skeleton: SkeletonDto,
    pub fps: f64,
    pub frames: Vec<FrameDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonDto {
    pub parents: Vec<usize>,
    pub offsets: Vec<[f64; 3]>,
    pub radii: Vec<f64>,
    pub landmarks: LandmarksDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LandmarksDto {
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

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDto {
    pub root_pos: [f64; 3],
    pub root_rot6d: [f64; 6],
    pub joint_rot6d: Vec<[f64; 6]>,
}

pub fn skeleton_to_dto(skeleton: &Skeleton) -> SkeletonDto {
    let lm = skeleton.landmarks();
    SkeletonDto {
        parents: skeleton.parents().to_vec(),
        offsets: skeleton.offsets().iter().map(|o| [o.x, o.y, o.z]).collect(),
        radii: skeleton.bone_radii().to_vec(),
        landmarks: LandmarksDto {
            left_shoulder: lm.left_shoulder,
            right_shoulder: lm.right_shoulder,
            left_hip: lm.left_hip,
            right_hip: lm.right_hip,
            left_hand: lm.left_hand,
            right_hand: lm.right_hand,
            left_foot: lm.left_foot,
            right_foot: lm.right_foot,
            head: lm.head,
        },
        names: Some(skeleton.names().to_vec()),
    }
}

pub fn skeleton_from_dto(dto: &SkeletonDto) -> anyhow::Result<Skeleton> {
    let names = match &dto.names {
        Some(names) => names.clone(),
        None => (0..dto.parents.len()).map(|i| format!("joint{i}")).collect(),
    };
    let lm = &dto.landmarks;
    let landmarks = SkeletonLandmarks {
        left_shoulder: lm.left_shoulder,
        right_shoulder: lm.right_shoulder,
        left_hip: lm.left_hip,
        right_hip: lm.right_hip,
        left_hand: lm.left_hand,
        right_hand: lm.right_hand,
        left_foot: lm.left_foot,
        right_foot: lm.right_foot,
        head: lm.head,
    };
    let offsets = dto.offsets.iter().map(|o| Vec3::new(o[0], o[1], o[2])).collect();
    Skeleton::new(dto.parents.clone(), offsets, dto.radii.clone(), names, landmarks)
        .map_err(|e| anyhow::anyhow!("invalid skeleton: {e}"))
}

pub fn motion_to_value(seq: &MotionSequence) -> MotionFile {
    let frames = seq
        .frames()
        .iter()
        .map(|p| FrameDto {
            root_pos: [p.root_pos.x, p.root_pos.y, p.root_pos.z],
            root_rot6d: p.root_rot.0,
            joint_rot6d: p.joint_rot.iter().map(|r| r.0).collect(),
        })
        .collect();
    MotionFile {
        skeleton: skeleton_to_dto(seq.skeleton()),
        fps: seq.fps(),
        frames,
    }
}

pub fn motion_from_value(file: &MotionFile) -> anyhow::Result<MotionSequence> {
    let skeleton = skeleton_from_dto(&file.skeleton)?;
    let frames = file
        .frames
        .iter()
        .map(|f| Pose {
            root_pos: Vec3::new(f.root_pos[0], f.root_pos[1], f.root_pos[2]),
            root_rot: Rot6(f.root_rot6d),
            joint_rot: f.joint_rot6d.iter().map(|r| Rot6(*r)).collect(),
        })
        .collect();
    MotionSequence::new(skeleton, file.fps, frames)
        .map_err(|e| anyhow::anyhow!("invalid motion: {e}"))
}

pub fn save_motion(path: &Path, seq: &MotionSequence) -> anyhow::Result<()> {
    let file = motion_to_value(seq);
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn load_motion(path: &Path) -> anyhow::Result<MotionSequence> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: MotionFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    motion_from_value(&file).with_context(|| format!("validating {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wiggle(n: usize) -> MotionSequence {
        let skeleton = Skeleton::default_humanoid();
        let frames = (0..n)
            .map(|i| {
                let t = i as f64 * 0.37;
                let mut p = Pose::rest(&skeleton, Vec3::new(t.sin(), 0.1 * t, 0.9));
                p.joint_rot[6] = Rot6([t.cos(), t.sin(), -t.sin(), t.cos(), 0.0, 0.25]);
                p
            })
            .collect();
        MotionSequence::new(skeleton, 30.0, frames).unwrap()
    }

    #[test]
    fn round_trip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let seq = wiggle(7);
        save_motion(&path, &seq).unwrap();
        let back = load_motion(&path).unwrap();
        assert_eq!(&back, &seq);
    }

    #[test]
    fn names_are_optional_on_input() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let seq = wiggle(2);
        let mut file = motion_to_value(&seq);
        file.skeleton.names = None;
        let text = serde_json::to_string(&file).unwrap();
        std::fs::write(&path, text).unwrap();
        let back = load_motion(&path).unwrap();
        assert_eq!(back.skeleton().name(3), "joint3");
        assert_eq!(back.frames(), seq.frames());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        save_motion(&path, &wiggle(2)).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let patched = text.replacen("\"fps\"", "\"fsp\"", 1);
        fs::write(&path, patched).unwrap();
        let err = load_motion(&path).unwrap_err();
        assert!(format!("{err:#}").contains("fsp"), "{err:#}");
    }

    #[test]
    fn invalid_skeleton_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        save_motion(&path, &wiggle(2)).unwrap();
        let mut file: MotionFile =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        file.skeleton.radii[4] = -1.0;
        fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
        let err = load_motion(&path).unwrap_err();
        assert!(format!("{err:#}").contains("radius"), "{err:#}");
    }
}
