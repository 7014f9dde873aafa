use alloc::vec;
use alloc::vec::Vec;

use crate::control::state::{ControlSignals, HistoryState, PoseState};
use crate::math::{atan2, hypot, Rot6, Vec3};

/// What a policy promises for the next step, in the canonical frame of
/// the current one.
///
/// Velocities drive integration (they are also what the field regulator
/// edits); `joint_rotations` are the next local rotations, and the future
/// block is a short preview used for logging and by downstream
/// consumers, not fed back into integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    /// Next root velocity, canonical m/s (z included).
    pub root_velocity: Vec3,
    /// Facing yaw rate, rad/s.
    pub yaw_rate: f64,
    /// Next velocity per joint, canonical m/s. Entry 0 mirrors
    /// `root_velocity` and is kept in lockstep by the rollout.
    pub joint_velocities: Vec<Vec3>,
    /// Next local joint rotations.
    pub joint_rotations: Vec<Rot6>,
    /// Constant-velocity preview, `future` steps ahead.
    pub future_root_positions: Vec<Vec3>,
    pub future_yaws: Vec<f64>,
}

impl Prediction {
    /// A prediction that holds the pose perfectly still.
    pub fn hold(pose: &PoseState, future: usize) -> Prediction {
        Prediction {
            root_velocity: Vec3::zeros(),
            yaw_rate: 0.0,
            joint_velocities: vec![Vec3::zeros(); pose.joint_positions.len()],
            joint_rotations: pose.joint_rotations.clone(),
            future_root_positions: vec![pose.root_position; future],
            future_yaws: vec![0.0; future],
        }
    }
}

/// A control policy: given history, current state and control signals,
/// produce the next-step prediction. Implementations may keep internal
/// state across steps (hence `&mut`).
pub trait Policy {
    fn step(
        &mut self,
        history: &HistoryState,
        pose: &PoseState,
        signals: &ControlSignals,
    ) -> Prediction;
}

/// Motion limits of the analytic goal-seeking baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineLimits {
    /// Top horizontal speed, m/s.
    pub max_speed: f64,
    /// Top turn rate, rad/s.
    pub max_yaw_rate: f64,
    /// Proportional gain from distance to desired speed, 1/s.
    pub approach_gain: f64,
    /// Top vertical root speed, m/s.
    pub max_vertical: f64,
    /// Distance at which end effectors start blending from body motion
    /// toward their own target points, meters.
    pub reach_range: f64,
}

impl Default for BaselineLimits {
    fn default() -> Self {
        BaselineLimits {
            max_speed: 1.4,
            max_yaw_rate: 120.0 * core::f64::consts::PI / 180.0,
            approach_gain: 2.0,
            max_vertical: 0.5,
            reach_range: 1.5,
        }
    }
}

/// Analytic goal-reaching policy: walk toward the target root point at
/// capped speed, turn the facing toward it, slow down proportionally on
/// approach, and near the goal blend end-effector velocities toward
/// their own target points. No goal means stand still.
///
/// The baseline never looks at the occupancy cube; obstacle handling is
/// left entirely to the field regulator, which is exactly what makes it
/// a clean probe of the regulator's effect.
#[derive(Debug, Clone, Default)]
pub struct BaselinePolicy {
    pub limits: BaselineLimits,
    /// Predicted future steps (matches `WindowConfig::future`).
    pub future: usize,
    /// Step length for the preview, seconds.
    pub dt: f64,
}

impl BaselinePolicy {
    pub fn new(limits: BaselineLimits, future: usize, dt: f64) -> Self {
        BaselinePolicy { limits, future, dt }
    }
}

impl Policy for BaselinePolicy {
    fn step(
        &mut self,
        _history: &HistoryState,
        pose: &PoseState,
        signals: &ControlSignals,
    ) -> Prediction {
        let Some(target) = &signals.target else {
            return Prediction::hold(pose, self.future);
        };

        // pick the root goal: the root point if given, else the centroid
        // of whatever points are
        let goal = if target.mask[0] {
            target.points[0]
        } else {
            let mut sum = Vec3::zeros();
            let mut n = 0.0;
            for (p, &m) in target.points.iter().zip(&target.mask) {
                if m {
                    sum += *p;
                    n += 1.0;
                }
            }
            if n == 0.0 {
                return Prediction::hold(pose, self.future);
            }
            sum / n
        };

        let lim = &self.limits;
        let dist_h = hypot(goal.x, goal.y);
        let speed = (lim.approach_gain * dist_h).min(lim.max_speed);
        let dir = if dist_h > 1e-9 {
            Vec3::new(goal.x / dist_h, goal.y / dist_h, 0.0)
        } else {
            Vec3::zeros()
        };
        let dz = goal.z - pose.root_position.z;
        let vz = (lim.approach_gain * dz).clamp(-lim.max_vertical, lim.max_vertical);
        let root_velocity = dir * speed + Vec3::new(0.0, 0.0, vz);

        // turn toward the goal bearing; fade the turn out on final
        // approach so the body does not pirouette over the goal point
        let bearing = atan2(goal.y, goal.x);
        let fade = (dist_h / 0.3).min(1.0);
        let yaw_rate = (2.0 * bearing * fade).clamp(-lim.max_yaw_rate, lim.max_yaw_rate);

        // every joint rides the root; end effectors blend toward their
        // own points when close enough to reach
        let mut joint_velocities = vec![root_velocity; pose.joint_positions.len()];
        let ee_ids = &signals.ee_joint_ids;
        let blend = (1.0 - dist_h / lim.reach_range).clamp(0.0, 1.0);
        if blend > 0.0 {
            for (slot, &joint) in ee_ids.iter().enumerate() {
                let t_idx = slot + 1; // target slots: root, lh, rh, lf, rf
                if !target.mask[t_idx] {
                    continue;
                }
                let reach = (target.points[t_idx] - pose.joint_positions[joint])
                    * lim.approach_gain;
                let reach = if reach.norm() > 2.0 {
                    reach.normalize() * 2.0
                } else {
                    reach
                };
                joint_velocities[joint] = root_velocity * (1.0 - blend) + reach * blend;
            }
        }

        let future_root_positions = (1..=self.future)
            .map(|i| pose.root_position + root_velocity * (self.dt * i as f64))
            .collect();
        let future_yaws = (1..=self.future)
            .map(|i| yaw_rate * self.dt * i as f64)
            .collect();

        Prediction {
            root_velocity,
            yaw_rate,
            joint_velocities,
            joint_rotations: pose.joint_rotations.clone(),
            future_root_positions,
            future_yaws,
        }
    }
}
