//! Metric aggregation over episode logs and ground-truth motions.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde_json::json;

use occu_core::control::{EpisodeFrame, EpisodeResult, TargetSchedule, WorldTarget};
use occu_core::metrics::{
    aggregate, erp_distance, foot_sliding, goal_metrics, mean_penetration, penetration_count,
    EpisodeMetrics, SuccessThresholds,
};
use occu_core::motion::{finite_velocities, forward_kinematics, CapsuleBody};
use occu_core::occupancy::{OccupancyProvider, StaticGridScene};
use occu_core::{MotionSequence, Vec3};

use crate::config::ToolConfig;
use crate::formats::{self, write_atomic};
use crate::report::{render_table, report_json};
use crate::Outcome;

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    /// Episode logs (JSON lines) to score.
    #[arg(long = "episode", value_name = "FILE")]
    pub episodes: Vec<PathBuf>,
    /// Ground-truth motions to score as if they were episode results.
    #[arg(long = "motion", value_name = "FILE")]
    pub motions: Vec<PathBuf>,
    /// Swept-occupancy grid whose complement scores the motions.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// Reference motion for trajectory edit distance against every
    /// scored episode's root path.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Also write the full report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Replays a motion as a perfect episode: recorded poses, finite-difference
/// velocities, penetration measured against `provider`. The target is the
/// motion's own final root position, so goal metrics grade self-consistency.
pub fn episode_from_motion(
    seq: &MotionSequence,
    provider: &dyn OccupancyProvider,
) -> anyhow::Result<EpisodeResult> {
    let vel = finite_velocities(seq)?;
    let spacing = provider.quantization().unit / 2.0;
    let mut frames = Vec::with_capacity(seq.len());
    for (i, pose) in seq.frames().iter().enumerate() {
        let time = i as f64 / seq.fps();
        let fk = forward_kinematics(seq.skeleton(), pose)
            .with_context(|| format!("frame {i} has a degenerate rotation"))?;
        let body = CapsuleBody::from_fk(seq.skeleton(), &fk);
        let pen = penetration_count(&body, &fk.positions, provider, time, spacing);
        frames.push(EpisodeFrame {
            time,
            pose: pose.clone(),
            joint_positions: fk.positions,
            root_velocity: vel.root_linear[i],
            joint_velocities: vel.joint_linear[i].clone(),
            penetrating_voxels: pen,
            correction_magnitudes: Vec::new(),
            cube_hash: 0,
        });
    }
    let goal = frames.last().expect("sequence is non-empty").pose.root_pos;
    Ok(EpisodeResult {
        skeleton: seq.skeleton().clone(),
        rate: seq.fps(),
        frames,
        schedule: TargetSchedule::constant(WorldTarget::root_at(goal)),
        regulation: false,
        seed: 0,
    })
}

fn root_track(result: &EpisodeResult) -> Vec<Vec3> {
    result.frames.iter().map(|f| f.pose.root_pos).collect()
}

fn score(
    result: &EpisodeResult,
    source: &Path,
    reference: Option<&[Vec3]>,
) -> anyhow::Result<(EpisodeMetrics, serde_json::Value)> {
    let target = result
        .schedule
        .last_target()
        .with_context(|| format!("{}: no target to score against", source.display()))?;
    let goal = goal_metrics(result, target, &SuccessThresholds::default());
    let erp = reference.map(|r| erp_distance(&root_track(result), r, &Vec3::zeros()));
    let m = EpisodeMetrics {
        goal,
        foot_sliding: foot_sliding(result),
        penetration: mean_penetration(result),
        erp,
    };
    let row = json!({
        "source": source.display().to_string(),
        "success": goal.success,
        "min_distance_m": goal.min_distance,
        "time_to_reach_s": goal.time_to_reach,
        "foot_sliding": m.foot_sliding,
        "penetration_voxels": m.penetration,
        "erp_m": erp,
    });
    Ok((m, row))
}

pub fn eval(args: &EvalArgs, _tool: &ToolConfig, verbose: bool) -> anyhow::Result<Outcome> {
    if args.episodes.is_empty() && args.motions.is_empty() {
        bail!("nothing to evaluate: pass --episode and/or --motion files");
    }
    if !args.motions.is_empty() && args.grid.is_none() {
        bail!("--motion needs --grid for a scene to measure penetration against");
    }
    let reference: Option<Vec<Vec3>> = match &args.reference {
        Some(p) => {
            let seq = formats::load_motion(p)?;
            Some(seq.frames().iter().map(|f| f.root_pos).collect())
        }
        None => None,
    };
    let mut metrics = Vec::new();
    let mut rows = Vec::new();
    for path in &args.episodes {
        let (result, _) = formats::load_episode(path)?;
        let (m, row) = score(&result, path, reference.as_deref())?;
        metrics.push(m);
        rows.push(row);
    }
    if !args.motions.is_empty() {
        let grid = formats::load_grid(args.grid.as_ref().expect("checked above"))?;
        let scene = StaticGridScene::new(grid.complement());
        for path in &args.motions {
            let seq = formats::load_motion(path)?;
            let result = episode_from_motion(&seq, &scene)?;
            let (m, row) = score(&result, path, None)?;
            metrics.push(m);
            rows.push(row);
        }
    }
    let report = aggregate(&metrics);
    print!("{}", render_table(&report));
    if verbose {
        for row in &rows {
            eprintln!("{row}");
        }
    }
    if let Some(out) = &args.json {
        let doc = json!({ "report": report_json(&report), "episodes": rows });
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        write_atomic(out, text.as_bytes())?;
    }
    Ok(Outcome::Success)
}
