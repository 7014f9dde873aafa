//! Episode scoring: goal attainment, foot sliding, scene penetration,
//! trajectory edit distance, and path feasibility probes.

mod erp;
mod feasibility;

pub use erp::erp_distance;
pub use feasibility::{
    path_feasibility, CylinderSpec, Feasibility, InfeasibleReason,
};

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::control::{EpisodeResult, WorldTarget};
use crate::math::{hypot, Vec3};
use crate::motion::CapsuleBody;
use crate::occupancy::OccupancyProvider;

/// Thresholds defining goal attainment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessThresholds {
    /// Mean masked-point distance that counts as "reached", meters.
    pub distance: f64,
    /// A reaching frame is disqualified if it penetrates at least this
    /// many distinct voxels.
    pub max_penetration: usize,
}

impl Default for SuccessThresholds {
    fn default() -> Self {
        SuccessThresholds {
            distance: 0.20,
            max_penetration: 50,
        }
    }
}

/// Goal attainment of one episode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoalMetrics {
    /// Some frame got close enough while penetrating below the limit.
    pub success: bool,
    /// Closest the episode ever got (mean masked-point distance), meters.
    pub min_distance: f64,
    /// Time of the first qualifying frame, seconds.
    pub time_to_reach: Option<f64>,
}

fn mean_target_distance(
    positions: &[Vec3],
    goal_ids: &[usize; 5],
    target: &WorldTarget,
) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0.0;
    for (slot, &joint) in goal_ids.iter().enumerate() {
        if target.mask[slot] {
            sum += (positions[joint] - target.points[slot]).norm();
            n += 1.0;
        }
    }
    if n == 0.0 {
        None
    } else {
        Some(sum / n)
    }
}

/// Scores an episode against a target (usually the schedule's last one).
pub fn goal_metrics(
    result: &EpisodeResult,
    target: &WorldTarget,
    thresholds: &SuccessThresholds,
) -> GoalMetrics {
    let goal_ids = result.skeleton.landmarks().goal_points();
    let mut min_distance = f64::INFINITY;
    let mut time_to_reach = None;
    for frame in &result.frames {
        let Some(d) = mean_target_distance(&frame.joint_positions, &goal_ids, target) else {
            continue;
        };
        if d < min_distance {
            min_distance = d;
        }
        if time_to_reach.is_none()
            && d < thresholds.distance
            && frame.penetrating_voxels < thresholds.max_penetration
        {
            time_to_reach = Some(frame.time);
        }
    }
    GoalMetrics {
        success: time_to_reach.is_some(),
        min_distance,
        time_to_reach,
    }
}

/// Foot height below which a foot is "planted" for sliding purposes.
pub const SLIDE_HEIGHT: f64 = 0.05;
/// Horizontal speed above which a planted foot counts as sliding, m/s.
pub const SLIDE_SPEED: f64 = 0.075;

/// Fraction of frames (0..=1) in which some planted foot slides: foot
/// height strictly below [`SLIDE_HEIGHT`] while its horizontal speed is
/// strictly above [`SLIDE_SPEED`].
pub fn foot_sliding(result: &EpisodeResult) -> f64 {
    if result.frames.is_empty() {
        return 0.0;
    }
    let lm = result.skeleton.landmarks();
    let feet = [lm.left_foot, lm.right_foot];
    let mut sliding = 0usize;
    for frame in &result.frames {
        let slides = feet.iter().any(|&f| {
            let h = frame.joint_positions[f].z;
            let v = &frame.joint_velocities[f];
            h < SLIDE_HEIGHT && hypot(v.x, v.y) > SLIDE_SPEED
        });
        if slides {
            sliding += 1;
        }
    }
    sliding as f64 / result.frames.len() as f64
}

/// Distinct provider voxels containing any body point (joints plus a
/// surface covering at `spacing`) at one instant.
///
/// Shares the quantization lattice with the provider so analytic scenes
/// and grid scenes count the same way.
pub fn penetration_count(
    body: &CapsuleBody,
    joints: &[Vec3],
    provider: &dyn OccupancyProvider,
    time: f64,
    spacing: f64,
) -> usize {
    let quant = provider.quantization();
    let mut cells: BTreeSet<[i64; 3]> = BTreeSet::new();
    for p in joints {
        if provider.is_occupied(p, time) {
            cells.insert(quant.cell_of(p));
        }
    }
    body.for_each_surface_sample(spacing, |p| {
        if provider.is_occupied(&p, time) {
            cells.insert(quant.cell_of(&p));
        }
    });
    cells.len()
}

/// Mean of per-frame penetrated voxel counts already recorded in an
/// episode.
pub fn mean_penetration(result: &EpisodeResult) -> f64 {
    if result.frames.is_empty() {
        return 0.0;
    }
    let total: usize = result.frames.iter().map(|f| f.penetrating_voxels).sum();
    total as f64 / result.frames.len() as f64
}

/// Per-episode scores, ready for aggregation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeMetrics {
    pub goal: GoalMetrics,
    pub foot_sliding: f64,
    pub penetration: f64,
    pub erp: Option<f64>,
}

/// Suite-level aggregate across episodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub episodes: usize,
    /// Fraction 0..=1 of successful episodes.
    pub success_rate: f64,
    /// Mean over episodes of the minimum target distance, meters.
    pub mean_min_distance: f64,
    /// Mean time to reach over *successful* episodes, seconds.
    pub mean_time_to_reach: Option<f64>,
    /// Mean foot-sliding fraction 0..=1.
    pub mean_foot_sliding: f64,
    /// Mean penetrated voxels per frame.
    pub mean_penetration: f64,
    /// Mean trajectory edit distance where available.
    pub mean_erp: Option<f64>,
}

pub fn aggregate(items: &[EpisodeMetrics]) -> MetricReport {
    let n = items.len();
    if n == 0 {
        return MetricReport {
            episodes: 0,
            success_rate: 0.0,
            mean_min_distance: 0.0,
            mean_time_to_reach: None,
            mean_foot_sliding: 0.0,
            mean_penetration: 0.0,
            mean_erp: None,
        };
    }
    let nf = n as f64;
    let successes: Vec<&EpisodeMetrics> = items.iter().filter(|m| m.goal.success).collect();
    let mean_time_to_reach = if successes.is_empty() {
        None
    } else {
        Some(
            successes
                .iter()
                .filter_map(|m| m.goal.time_to_reach)
                .sum::<f64>()
                / successes.len() as f64,
        )
    };
    let erps: Vec<f64> = items.iter().filter_map(|m| m.erp).collect();
    let mean_erp = if erps.is_empty() {
        None
    } else {
        Some(erps.iter().sum::<f64>() / erps.len() as f64)
    };
    MetricReport {
        episodes: n,
        success_rate: successes.len() as f64 / nf,
        mean_min_distance: items.iter().map(|m| m.goal.min_distance).sum::<f64>() / nf,
        mean_time_to_reach,
        mean_foot_sliding: items.iter().map(|m| m.foot_sliding).sum::<f64>() / nf,
        mean_penetration: items.iter().map(|m| m.penetration).sum::<f64>() / nf,
        mean_erp,
    }
}
