//! Training-style objectives over predictions, and a finite-difference
//! harness to keep the analytic gradients honest.
//!
//! Three terms: reconstruction (L1 on rotation channels, squared L2 on
//! position channels), scene penetration (depth-weighted indicator
//! against a grid), and field energy (how hard the regulator had to brake
//! plus how fast the body moves). The total is a weighted sum.

use alloc::vec::Vec;

use crate::math::{fabs, Rot6, Vec3};
use crate::occupancy::{NearestFreeField, OccupancyError, OccupancyGrid};

/// Floor for the speed in the field term's denominator; keeps the ratio
/// finite for (near) stationary joints.
pub const VELOCITY_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights {
    /// Penetration weight (alpha).
    pub alpha: f64,
    /// Field energy weight (beta).
    pub beta: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        LossWeights {
            alpha: 2.0,
            beta: 1.0,
        }
    }
}

/// Reconstruction loss: sum of absolute rotation-channel errors plus sum
/// of squared position errors.
pub fn loss_mix(
    pred_rot: &[Rot6],
    target_rot: &[Rot6],
    pred_pos: &[Vec3],
    target_pos: &[Vec3],
) -> f64 {
    debug_assert_eq!(pred_rot.len(), target_rot.len());
    debug_assert_eq!(pred_pos.len(), target_pos.len());
    let mut total = 0.0;
    for (p, t) in pred_rot.iter().zip(target_rot) {
        for c in 0..6 {
            total += fabs(p.0[c] - t.0[c]);
        }
    }
    for (p, t) in pred_pos.iter().zip(target_pos) {
        total += (p - t).norm_squared();
    }
    total
}

/// Gradient of [`loss_mix`] with respect to the predictions. The L1 part
/// uses sign(diff) with sign(0) = 0, so it is only meaningful away from
/// exact zero differences.
pub fn loss_mix_grad(
    pred_rot: &[Rot6],
    target_rot: &[Rot6],
    pred_pos: &[Vec3],
    target_pos: &[Vec3],
) -> (Vec<[f64; 6]>, Vec<Vec3>) {
    let rot_grad = pred_rot
        .iter()
        .zip(target_rot)
        .map(|(p, t)| {
            let mut g = [0.0f64; 6];
            for c in 0..6 {
                let d = p.0[c] - t.0[c];
                g[c] = if d > 0.0 {
                    1.0
                } else if d < 0.0 {
                    -1.0
                } else {
                    0.0
                };
            }
            g
        })
        .collect();
    let pos_grad = pred_pos
        .iter()
        .zip(target_pos)
        .map(|(p, t)| (p - t) * 2.0)
        .collect();
    (rot_grad, pos_grad)
}

/// Penetration loss: for each point inside an occupied voxel of `scene`,
/// the distance to the nearest free voxel center (a proxy for how far the
/// point must move to escape). Free points contribute nothing, points
/// outside the grid count as free.
///
/// Errors only if a penetrating point exists while the grid has no free
/// voxel to escape to.
pub fn loss_pen(
    points: &[Vec3],
    scene: &OccupancyGrid,
    nearest: &NearestFreeField,
) -> Result<f64, OccupancyError> {
    let mut total = 0.0;
    for p in points {
        if scene.is_point_occupied(p) {
            total += nearest.nearest_free(p)?.distance;
        }
    }
    Ok(total)
}

/// Field energy: per joint, the squared braking ratio plus the squared
/// speed. Penalizes corrections that rival the velocity itself (the
/// policy should have predicted a braking motion instead) and running
/// fast in general.
pub fn loss_field(deltas: &[Vec3], velocities: &[Vec3]) -> f64 {
    debug_assert_eq!(deltas.len(), velocities.len());
    let mut total = 0.0;
    for (d, v) in deltas.iter().zip(velocities) {
        let speed = v.norm().max(VELOCITY_FLOOR);
        total += d.norm_squared() / (speed * speed) + v.norm_squared();
    }
    total
}

/// Gradient of [`loss_field`] with respect to deltas and velocities.
/// Smooth wherever no speed sits exactly at the [`VELOCITY_FLOOR`] kink.
pub fn loss_field_grad(deltas: &[Vec3], velocities: &[Vec3]) -> (Vec<Vec3>, Vec<Vec3>) {
    let mut d_deltas = Vec::with_capacity(deltas.len());
    let mut d_vels = Vec::with_capacity(velocities.len());
    for (d, v) in deltas.iter().zip(velocities) {
        let speed = v.norm();
        let floored = speed.max(VELOCITY_FLOOR);
        d_deltas.push(d * (2.0 / (floored * floored)));
        let mut g = v * 2.0;
        if speed > VELOCITY_FLOOR {
            // d/dv of |d|^2 / |v|^2 = -2 |d|^2 / |v|^4 * v
            g += v * (-2.0 * d.norm_squared() / (speed * speed * speed * speed));
        }
        d_vels.push(g);
    }
    (d_deltas, d_vels)
}

/// Weighted total.
pub fn loss_total(mix: f64, pen: f64, field: f64, w: &LossWeights) -> f64 {
    mix + w.alpha * pen + w.beta * field
}

/// Central-difference check of an analytic gradient at `x`.
///
/// Returns the maximum relative error over all components, where the
/// relative scale is `max(|numeric|, |analytic|, 1e-6)`. Callers pick `h`
/// (1e-5 suits the losses here) and must evaluate at smooth points.
pub fn gradient_check(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x: &[f64],
    analytic: &[f64],
    h: f64,
) -> f64 {
    assert_eq!(x.len(), analytic.len());
    let mut work = x.to_vec();
    let mut worst = 0.0f64;
    for i in 0..x.len() {
        let orig = work[i];
        work[i] = orig + h;
        let hi = f(&work);
        work[i] = orig - h;
        let lo = f(&work);
        work[i] = orig;
        let numeric = (hi - lo) / (2.0 * h);
        let scale = fabs(numeric).max(fabs(analytic[i])).max(1e-6);
        let err = fabs(numeric - analytic[i]) / scale;
        if err > worst {
            worst = err;
        }
    }
    worst
}
