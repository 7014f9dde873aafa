//! Episode records as JSON lines.
//!
//! First line: metadata (skeleton, control rate, goal schedule, scene
//! description, seed). Each following line is one control step. The
//! format is append-friendly: a truncated file still parses up to the
//! last complete frame, but loading rejects it so partial rollouts are
//! not mistaken for finished ones (frame times must end the schedule's
//! span and be contiguous).

use super::motion::{skeleton_from_dto, skeleton_to_dto, SkeletonDto};
use super::write_atomic;
use anyhow::{bail, Context};
use occu_core::control::{
    EpisodeFrame, EpisodeResult, TargetSchedule, WorldTarget,
};
use occu_core::math::Rot6;
use occu_core::{Pose, Vec3};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpisodeMeta {
    pub skeleton: SkeletonDto,
    pub rate: f64,
    pub seed: u64,
    pub regulation: bool,
    /// Human-readable scene spec the episode ran against.
    pub provider: String,
    pub schedule: Vec<ScheduleKeyDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleKeyDto {
    pub time: f64,
    pub target: Option<TargetDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetDto {
    pub points: [[f64; 3]; 5],
    pub mask: [bool; 5],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameLine {
    t: f64,
    root_pos: [f64; 3],
    root_rot6d: [f64; 6],
    joint_rot6d: Vec<[f64; 6]>,
    joint_pos: Vec<[f64; 3]>,
    root_vel: [f64; 3],
    joint_vel: Vec<[f64; 3]>,
    pen: usize,
    corrections: Vec<f64>,
    cube_hash: u64,
}

fn v3(p: &Vec3) -> [f64; 3] {
    [p.x, p.y, p.z]
}

fn to_v3(a: &[f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

fn target_to_dto(t: &WorldTarget) -> TargetDto {
    TargetDto {
        points: [
            v3(&t.points[0]),
            v3(&t.points[1]),
            v3(&t.points[2]),
            v3(&t.points[3]),
            v3(&t.points[4]),
        ],
        mask: t.mask,
    }
}

fn target_from_dto(t: &TargetDto) -> WorldTarget {
    WorldTarget {
        points: [
            to_v3(&t.points[0]),
            to_v3(&t.points[1]),
            to_v3(&t.points[2]),
            to_v3(&t.points[3]),
            to_v3(&t.points[4]),
        ],
        mask: t.mask,
    }
}

pub fn save_episode(path: &Path, episode: &EpisodeResult, provider: &str) -> anyhow::Result<()> {
    let meta = EpisodeMeta {
        skeleton: skeleton_to_dto(&episode.skeleton),
        rate: episode.rate,
        seed: episode.seed,
        regulation: episode.regulation,
        provider: provider.to_string(),
        schedule: episode
            .schedule
            .keys()
            .iter()
            .map(|(time, target)| ScheduleKeyDto {
                time: *time,
                target: target.as_ref().map(target_to_dto),
            })
            .collect(),
    };
    let mut out = serde_json::to_string(&meta)?;
    out.push('\n');
    for frame in &episode.frames {
        let line = FrameLine {
            t: frame.time,
            root_pos: v3(&frame.pose.root_pos),
            root_rot6d: frame.pose.root_rot.0,
            joint_rot6d: frame.pose.joint_rot.iter().map(|r| r.0).collect(),
            joint_pos: frame.joint_positions.iter().map(v3).collect(),
            root_vel: v3(&frame.root_velocity),
            joint_vel: frame.joint_velocities.iter().map(v3).collect(),
            pen: frame.penetrating_voxels,
            corrections: frame.correction_magnitudes.clone(),
            cube_hash: frame.cube_hash,
        };
        out.push_str(&serde_json::to_string(&line)?);
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

pub fn load_episode(path: &Path) -> anyhow::Result<(EpisodeResult, EpisodeMeta)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, head) = lines.next().with_context(|| format!("{}: empty file", path.display()))?;
    let meta: EpisodeMeta = serde_json::from_str(head)
        .with_context(|| format!("{}: metadata line", path.display()))?;
    let skeleton = skeleton_from_dto(&meta.skeleton)
        .with_context(|| format!("{}: metadata line", path.display()))?;
    if !(meta.rate > 0.0 && meta.rate.is_finite()) {
        bail!("{}: bad control rate {}", path.display(), meta.rate);
    }

    let mut frames = Vec::new();
    for (idx, line) in lines {
        let f: FrameLine = serde_json::from_str(line)
            .with_context(|| format!("{}:{}", path.display(), idx + 1))?;
        let want = skeleton.joint_count();
        if f.joint_rot6d.len() != want || f.joint_pos.len() != want || f.joint_vel.len() != want
        {
            bail!(
                "{}:{}: frame arrays sized for {} joints, skeleton has {}",
                path.display(),
                idx + 1,
                f.joint_rot6d.len(),
                want
            );
        }
        let expect_t = frames.len() as f64 / meta.rate;
        if (f.t - expect_t).abs() > 1e-9 {
            bail!(
                "{}:{}: frame time {} is not contiguous (expected {})",
                path.display(),
                idx + 1,
                f.t,
                expect_t
            );
        }
        frames.push(EpisodeFrame {
            time: f.t,
            pose: Pose {
                root_pos: to_v3(&f.root_pos),
                root_rot: Rot6(f.root_rot6d),
                joint_rot: f.joint_rot6d.iter().map(|r| Rot6(*r)).collect(),
            },
            joint_positions: f.joint_pos.iter().map(to_v3).collect(),
            root_velocity: to_v3(&f.root_vel),
            joint_velocities: f.joint_vel.iter().map(to_v3).collect(),
            penetrating_voxels: f.pen,
            correction_magnitudes: f.corrections,
            cube_hash: f.cube_hash,
        });
    }
    if frames.is_empty() {
        bail!("{}: no frames", path.display());
    }

    let schedule = TargetSchedule::new(
        meta.schedule
            .iter()
            .map(|k| (k.time, k.target.as_ref().map(target_from_dto)))
            .collect(),
    );
    let episode = EpisodeResult {
        skeleton,
        rate: meta.rate,
        frames,
        schedule,
        regulation: meta.regulation,
        seed: meta.seed,
    };
    Ok((episode, meta))
}
