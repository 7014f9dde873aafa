use alloc::collections::VecDeque;
use alloc::vec::Vec;

use thiserror::Error;

use crate::control::episode::{EpisodeFrame, EpisodeResult};
use crate::control::policy::Policy;
use crate::control::state::{
    build_pose_state, ControlSignals, FrameData, HistoryState, TargetPoints, TargetSchedule,
    WindowConfig,
};
use crate::field::{regulate_velocities, FieldParams};
use crate::math::{matrix_to_rot6, rot_z, wrap_angle, Mat3, Vec3};
use crate::metrics::penetration_count;
use crate::motion::{
    canonical_frame_or_prev, forward_kinematics, CanonicalFrame, CapsuleBody, Pose, Skeleton,
};
use crate::occupancy::{
    sample_canonical_occupancy, CanonicalOccupancyConfig, OccupancyProvider,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RolloutConfig {
    pub window: WindowConfig,
    /// Episode length, seconds; the rollout records
    /// `duration * window.rate` frames.
    pub duration: f64,
    /// Field regulation on predicted velocities.
    pub regulation: bool,
    /// Regulate every joint instead of just root and end effectors.
    pub regulate_all_joints: bool,
    pub field: FieldParams,
    pub cube: CanonicalOccupancyConfig,
    /// Provenance tag copied into the result.
    pub seed: u64,
}

impl Default for RolloutConfig {
    fn default() -> Self {
        RolloutConfig {
            window: WindowConfig::default(),
            duration: 10.0,
            regulation: true,
            regulate_all_joints: false,
            field: FieldParams::default(),
            cube: CanonicalOccupancyConfig::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RolloutError {
    #[error("control rate must be positive, got {0}")]
    BadRate(f64),
    #[error("duration must be positive, got {0}")]
    BadDuration(f64),
    #[error("initial pose has no derivable facing")]
    DegenerateInitialPose,
    #[error("step {step}: degenerate rotation in pose")]
    BadRotation { step: usize },
    #[error("step {step}: policy returned {got} joint channels, body has {want}")]
    BadPrediction { step: usize, got: usize, want: usize },
}

struct StepRecord {
    positions: Vec<Vec3>,
    root_rot_world: Mat3,
    root_velocity_world: Vec3,
    joint_velocities_world: Vec<Vec3>,
    yaw_rate: f64,
}

/// Runs the closed loop: encode the current state in its canonical frame,
/// sample the occupancy cube from the provider, ask the policy for next
/// velocities, brake them against the cube, integrate one step, repeat.
///
/// Everything downstream of the inputs is deterministic: same skeleton,
/// pose, schedule, provider and config always give the same frames.
pub fn rollout(
    policy: &mut dyn Policy,
    provider: &dyn OccupancyProvider,
    skeleton: &Skeleton,
    initial: &Pose,
    schedule: &TargetSchedule,
    config: &RolloutConfig,
) -> Result<EpisodeResult, RolloutError> {
    let rate = config.window.rate;
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(RolloutError::BadRate(rate));
    }
    if !(config.duration > 0.0) || !config.duration.is_finite() {
        return Err(RolloutError::BadDuration(config.duration));
    }
    let dt = 1.0 / rate;
    let steps = libm::round(config.duration * rate) as usize;
    let joint_count = skeleton.joint_count();
    let lm = *skeleton.landmarks();
    let ee_ids = lm.end_effectors();
    let regulated: Vec<usize> = if config.regulate_all_joints {
        (0..joint_count).collect()
    } else {
        let mut v = alloc::vec![0usize];
        v.extend_from_slice(&ee_ids);
        v
    };
    let quant = provider.quantization();
    let pen_spacing = quant.unit / 2.0;

    let mut pose = initial.clone();
    let mut prev_yaw: Option<f64> = None;
    let mut prev_positions: Option<Vec<Vec3>> = None;
    let mut window: VecDeque<StepRecord> = VecDeque::with_capacity(config.window.history + 1);
    let mut frames = Vec::with_capacity(steps);

    for step in 0..steps {
        let time = step as f64 * dt;
        let fk = forward_kinematics(skeleton, &pose)
            .map_err(|_| RolloutError::BadRotation { step })?;
        let frame = canonical_frame_or_prev(skeleton, &fk, prev_yaw).map_err(|_| {
            if step == 0 {
                RolloutError::DegenerateInitialPose
            } else {
                RolloutError::BadRotation { step }
            }
        })?;

        // realized world velocities; the loop starts from rest
        let (root_vel_w, joint_vels_w, yaw_rate) = match (&prev_positions, prev_yaw) {
            (Some(prev), Some(py)) => {
                let jv: Vec<Vec3> = fk
                    .positions
                    .iter()
                    .zip(prev)
                    .map(|(a, b)| (a - b) * rate)
                    .collect();
                let rv = jv[0];
                (rv, jv, wrap_angle(frame.yaw - py) * rate)
            }
            _ => (
                Vec3::zeros(),
                alloc::vec![Vec3::zeros(); joint_count],
                0.0,
            ),
        };

        window.push_back(StepRecord {
            positions: fk.positions.clone(),
            root_rot_world: fk.rotations[0],
            root_velocity_world: root_vel_w,
            joint_velocities_world: joint_vels_w.clone(),
            yaw_rate,
        });
        while window.len() > config.window.history + 1 {
            window.pop_front();
        }

        let data = FrameData {
            frame,
            positions: fk.positions.clone(),
            root_rot_world: fk.rotations[0],
        };
        let pose_state = build_pose_state(
            skeleton,
            &data,
            pose.joint_rot.clone(),
            &root_vel_w,
            &joint_vels_w,
            yaw_rate,
        );
        let history = history_from_window(&window, &frame, &lm, config.window.history);

        let cube = sample_canonical_occupancy(
            provider,
            time,
            &frame,
            fk.positions[0].z,
            &config.cube,
        );
        let cube_hash = cube.content_hash();
        let target = schedule
            .active(time)
            .map(|t| TargetPoints::from_world(t, &frame));
        let signals = ControlSignals {
            target,
            cube,
            ee_joint_ids: ee_ids,
        };

        let mut pred = policy.step(&history, &pose_state, &signals);
        if pred.joint_velocities.len() != joint_count
            || pred.joint_rotations.len() != joint_count
        {
            return Err(RolloutError::BadPrediction {
                step,
                got: pred.joint_velocities.len().min(pred.joint_rotations.len()),
                want: joint_count,
            });
        }
        pred.joint_velocities[0] = pred.root_velocity;

        let correction_magnitudes: Vec<f64> = if config.regulation {
            let records = regulate_velocities(
                &mut pred.joint_velocities,
                &pose_state.joint_positions,
                &regulated,
                &signals.cube,
                &config.field,
            );
            pred.root_velocity = pred.joint_velocities[0];
            records.iter().map(|r| r.delta.norm()).collect()
        } else {
            alloc::vec![0.0; regulated.len()]
        };

        let body = CapsuleBody::from_fk(skeleton, &fk);
        let penetrating =
            penetration_count(&body, &fk.positions, provider, time, pen_spacing);

        frames.push(EpisodeFrame {
            time,
            pose: pose.clone(),
            joint_positions: fk.positions.clone(),
            root_velocity: root_vel_w,
            joint_velocities: joint_vels_w,
            penetrating_voxels: penetrating,
            correction_magnitudes,
            cube_hash,
        });

        // explicit Euler step in the world frame
        let world_delta = frame.to_world_dir(&(pred.root_velocity * dt));
        let new_yaw = frame.yaw + pred.yaw_rate * dt;
        let body_rot = rot_z(-frame.yaw) * fk.rotations[0];
        pose = Pose {
            root_pos: pose.root_pos + world_delta,
            root_rot: matrix_to_rot6(&(rot_z(new_yaw) * body_rot)),
            joint_rot: pred.joint_rotations,
        };
        prev_positions = Some(fk.positions);
        prev_yaw = Some(frame.yaw);
    }

    Ok(EpisodeResult {
        skeleton: skeleton.clone(),
        rate,
        frames,
        schedule: schedule.clone(),
        regulation: config.regulation,
        seed: config.seed,
    })
}

fn history_from_window(
    window: &VecDeque<StepRecord>,
    now: &CanonicalFrame,
    lm: &crate::motion::SkeletonLandmarks,
    entries: usize,
) -> HistoryState {
    let want = entries + 1;
    let mut history = HistoryState {
        root_positions: Vec::with_capacity(want),
        ee_positions: Vec::with_capacity(want),
        root_rotations: Vec::with_capacity(want),
        root_velocities: Vec::with_capacity(want),
        joint_velocities: Vec::with_capacity(want),
        yaw_rates: Vec::with_capacity(want),
    };
    for k in 0..want {
        // left-pad by repeating the oldest recorded step
        let idx = (window.len() + k).saturating_sub(want).min(window.len() - 1);
        let rec = &window[idx];
        history
            .root_positions
            .push(now.to_canonical_point(&rec.positions[0]));
        history.ee_positions.push([
            now.to_canonical_point(&rec.positions[lm.left_hand]),
            now.to_canonical_point(&rec.positions[lm.right_hand]),
            now.to_canonical_point(&rec.positions[lm.left_foot]),
            now.to_canonical_point(&rec.positions[lm.right_foot]),
        ]);
        history
            .root_rotations
            .push(matrix_to_rot6(&now.to_canonical_rot(&rec.root_rot_world)));
        history
            .root_velocities
            .push(now.to_canonical_dir(&rec.root_velocity_world));
        history.joint_velocities.push(
            rec.joint_velocities_world
                .iter()
                .map(|v| now.to_canonical_dir(v))
                .collect(),
        );
        history.yaw_rates.push(rec.yaw_rate);
    }
    history
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::policy::{BaselineLimits, BaselinePolicy};
    use crate::control::state::WorldTarget;
    use crate::math::Aabb;
    use crate::occupancy::{BoxScene, EmptyScene};

    fn baseline(config: &RolloutConfig) -> BaselinePolicy {
        BaselinePolicy::new(
            BaselineLimits::default(),
            config.window.future,
            config.window.dt(),
        )
    }

    fn standing_pose(skeleton: &Skeleton, at: Vec3) -> Pose {
        Pose::rest(skeleton, at)
    }

    #[test]
    fn frame_count_is_duration_times_rate() {
        let skeleton = Skeleton::default_humanoid();
        let config = RolloutConfig {
            duration: 3.0,
            ..RolloutConfig::default()
        };
        let mut policy = baseline(&config);
        let result = rollout(
            &mut policy,
            &EmptyScene,
            &skeleton,
            &standing_pose(&skeleton, Vec3::new(0.0, 0.0, 0.9)),
            &TargetSchedule::default(),
            &config,
        )
        .unwrap();
        assert_eq!(result.frames.len(), 30);
        assert!((result.frames[0].time - 0.0).abs() < 1e-12);
        assert!((result.frames[29].time - 2.9).abs() < 1e-12);
        assert_eq!(result.rate, 10.0);
    }

    #[test]
    fn no_goal_stands_still() {
        let skeleton = Skeleton::default_humanoid();
        let config = RolloutConfig {
            duration: 2.0,
            ..RolloutConfig::default()
        };
        let mut policy = baseline(&config);
        let start = Vec3::new(1.0, -2.0, 0.9);
        let result = rollout(
            &mut policy,
            &EmptyScene,
            &skeleton,
            &standing_pose(&skeleton, start),
            &TargetSchedule::default(),
            &config,
        )
        .unwrap();
        for f in &result.frames {
            assert!((f.pose.root_pos - start).norm() < 1e-12);
            assert_eq!(f.penetrating_voxels, 0);
        }
    }

    #[test]
    fn reaches_a_goal_three_meters_ahead() {
        let skeleton = Skeleton::default_humanoid();
        let config = RolloutConfig {
            duration: 10.0,
            ..RolloutConfig::default()
        };
        let mut policy = baseline(&config);
        let goal = Vec3::new(3.0, 0.0, 0.9);
        let result = rollout(
            &mut policy,
            &EmptyScene,
            &skeleton,
            &standing_pose(&skeleton, Vec3::new(0.0, 0.0, 0.9)),
            &TargetSchedule::constant(WorldTarget::root_at(goal)),
            &config,
        )
        .unwrap();
        let last = result.frames.last().unwrap();
        let dist = (last.pose.root_pos - goal).norm();
        assert!(dist < 0.1, "ended {dist} m from the goal");
        // and it got there at walking speed, not teleporting
        let max_step = result
            .frames
            .windows(2)
            .map(|w| (w[1].pose.root_pos - w[0].pose.root_pos).norm())
            .fold(0.0, f64::max);
        assert!(max_step < 1.4 * 0.1 + 1e-9, "step {max_step}");
    }

    #[test]
    fn lateral_goal_is_reached_and_body_turns_toward_it() {
        let skeleton = Skeleton::default_humanoid();
        let config = RolloutConfig {
            duration: 8.0,
            ..RolloutConfig::default()
        };
        let mut policy = baseline(&config);
        let goal = Vec3::new(0.0, 2.5, 0.9);
        let result = rollout(
            &mut policy,
            &EmptyScene,
            &skeleton,
            &standing_pose(&skeleton, Vec3::new(0.0, 0.0, 0.9)),
            &TargetSchedule::constant(WorldTarget::root_at(goal)),
            &config,
        )
        .unwrap();
        let last = result.frames.last().unwrap();
        assert!((last.pose.root_pos - goal).norm() < 0.1);
    }

    #[test]
    fn empty_scene_regulation_is_bitwise_no_op() {
        let skeleton = Skeleton::default_humanoid();
        let goal = Vec3::new(2.0, 1.0, 0.9);
        let run = |regulation: bool| {
            let config = RolloutConfig {
                duration: 4.0,
                regulation,
                ..RolloutConfig::default()
            };
            let mut policy = baseline(&config);
            rollout(
                &mut policy,
                &EmptyScene,
                &skeleton,
                &standing_pose(&skeleton, Vec3::new(0.0, 0.0, 0.9)),
                &TargetSchedule::constant(WorldTarget::root_at(goal)),
                &config,
            )
            .unwrap()
        };
        let with = run(true);
        let without = run(false);
        assert_eq!(with.frames.len(), without.frames.len());
        for (a, b) in with.frames.iter().zip(&without.frames) {
            assert_eq!(a.pose, b.pose);
            assert_eq!(a.joint_positions, b.joint_positions);
            assert!(a.correction_magnitudes.iter().all(|&m| m == 0.0));
        }
    }

    #[test]
    fn wall_ahead_brakes_the_approach() {
        let skeleton = Skeleton::default_humanoid();
        // solid wall across the path at x = 2
        let wall = BoxScene::new(alloc::vec![Aabb::new(
            Vec3::new(2.0, -3.0, 0.0),
            Vec3::new(2.3, 3.0, 2.2),
        )]);
        let goal = Vec3::new(4.0, 0.0, 0.9);
        let run = |regulation: bool| {
            let config = RolloutConfig {
                duration: 6.0,
                regulation,
                ..RolloutConfig::default()
            };
            let mut policy = baseline(&config);
            rollout(
                &mut policy,
                &wall,
                &skeleton,
                &standing_pose(&skeleton, Vec3::new(0.0, 0.0, 0.9)),
                &TargetSchedule::constant(WorldTarget::root_at(goal)),
                &config,
            )
            .unwrap()
        };
        let regulated = run(true);
        let free_run = run(false);

        // without regulation the body plows through the wall
        let pen_off: usize = free_run.frames.iter().map(|f| f.penetrating_voxels).sum();
        let pen_on: usize = regulated.frames.iter().map(|f| f.penetrating_voxels).sum();
        assert!(pen_off > 0, "unregulated run never penetrated");
        assert!(
            pen_on < pen_off,
            "regulation did not reduce penetration: {pen_on} vs {pen_off}"
        );

        // the regulated body stops short of the wall face
        let final_x = regulated.frames.last().unwrap().pose.root_pos.x;
        assert!(final_x < 2.0, "regulated run reached x = {final_x}");
        // and some correction actually fired
        assert!(regulated
            .frames
            .iter()
            .any(|f| f.correction_magnitudes.iter().any(|&m| m > 0.0)));
    }

    #[test]
    fn schedule_switch_redirects_the_walk() {
        let skeleton = Skeleton::default_humanoid();
        let config = RolloutConfig {
            duration: 10.0,
            ..RolloutConfig::default()
        };
        let mut policy = baseline(&config);
        let first = Vec3::new(2.0, 0.0, 0.9);
        let second = Vec3::new(2.0, 2.0, 0.9);
        let schedule = TargetSchedule::new(alloc::vec![
            (0.0, Some(WorldTarget::root_at(first))),
            (4.0, Some(WorldTarget::root_at(second))),
        ]);
        let result = rollout(
            &mut policy,
            &EmptyScene,
            &skeleton,
            &standing_pose(&skeleton, Vec3::new(0.0, 0.0, 0.9)),
            &schedule,
            &config,
        )
        .unwrap();
        let last = result.frames.last().unwrap();
        assert!((last.pose.root_pos - second).norm() < 0.1);
    }

    #[test]
    fn bad_config_is_rejected() {
        let skeleton = Skeleton::default_humanoid();
        let config = RolloutConfig {
            duration: -1.0,
            ..RolloutConfig::default()
        };
        let mut policy = baseline(&config);
        let err = rollout(
            &mut policy,
            &EmptyScene,
            &skeleton,
            &standing_pose(&skeleton, Vec3::new(0.0, 0.0, 0.9)),
            &TargetSchedule::default(),
            &config,
        )
        .unwrap_err();
        assert!(matches!(err, RolloutError::BadDuration(_)));
    }
}
