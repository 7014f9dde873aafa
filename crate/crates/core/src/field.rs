//! Analytic occupancy-field regulation.
//!
//! Each occupied cell center repels predicted joint velocities: a
//! contribution is the velocity projected toward the cell (only motion
//! *toward* occupancy counts) scaled by a truncated inverse-distance
//! falloff, and it always points against the current velocity. The
//! correction therefore only ever brakes; it never deflects sideways or
//! accelerates, which is what makes it safe to bolt onto any policy.

use alloc::vec::Vec;

use crate::math::{powf_abs, Vec3};
use crate::occupancy::CanonicalOccupancy;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    /// Overall gain k.
    pub gain: f64,
    /// Exponent of the distance norm (2 = Euclidean).
    pub norm_order: f64,
    /// Singularity shift: distances are measured as `d - inner_radius`,
    /// and cells at or inside `inner_radius` are skipped entirely (the
    /// falloff diverges there; penetration that deep is the loss term's
    /// problem, not the regulator's).
    pub inner_radius: f64,
    /// Subtracted bias; the falloff reaches zero at
    /// `inner_radius + 1 / bias`, which bounds the influence radius.
    pub bias: f64,
    /// Correction magnitude is clamped to `max_scale * |velocity|`, so a
    /// velocity can be stopped but never reversed.
    pub max_scale: f64,
}

impl Default for FieldParams {
    fn default() -> Self {
        // influence reaches inner_radius + 1/bias = 1.0 m
        FieldParams {
            gain: 0.05,
            norm_order: 2.0,
            inner_radius: 0.20,
            bias: 1.25,
            max_scale: 1.0,
        }
    }
}

impl FieldParams {
    /// Largest distance at which a cell still contributes.
    pub fn influence_radius(&self) -> f64 {
        self.inner_radius + 1.0 / self.bias
    }
}

const VELOCITY_EPS: f64 = 1e-12;

fn vector_norm(v: &Vec3, order: f64) -> f64 {
    if order == 2.0 {
        v.norm()
    } else {
        let s = powf_abs(v.x, order) + powf_abs(v.y, order) + powf_abs(v.z, order);
        libm::pow(s, 1.0 / order)
    }
}

/// Velocity correction for one joint.
///
/// `velocity` is the predicted joint velocity, `position` the joint's
/// current position, `occupied` the repelling cell centers; all three in
/// the same (canonical) frame. Returns the additive correction, a
/// non-positive multiple of `velocity`.
pub fn field_correction(
    velocity: &Vec3,
    position: &Vec3,
    occupied: &[Vec3],
    params: &FieldParams,
) -> Vec3 {
    let speed = velocity.norm();
    if speed < VELOCITY_EPS || occupied.is_empty() {
        return Vec3::zeros();
    }

    let mut strength = 0.0;
    for cell in occupied {
        let v_ij = cell - position;
        let d = vector_norm(&v_ij, params.norm_order);
        if d <= params.inner_radius {
            continue;
        }
        let falloff = 1.0 / (d - params.inner_radius) - params.bias;
        if falloff <= 0.0 {
            continue;
        }
        // alignment: only the velocity component heading at the cell
        let cos = velocity.dot(&v_ij) / (speed * d.max(VELOCITY_EPS));
        if cos <= 0.0 {
            continue;
        }
        strength += params.gain * speed * cos * falloff;
    }

    if strength <= 0.0 {
        return Vec3::zeros();
    }
    let capped = strength.min(params.max_scale * speed);
    -(velocity / speed) * capped
}

/// A logged per-joint correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionRecord {
    pub joint: usize,
    pub delta: Vec3,
}

/// Applies [`field_correction`] to a set of joints in place.
///
/// `velocities` are predicted joint velocities, `positions` the matching
/// current joint positions (canonical frame, like the cube). `joints`
/// selects which indices are regulated. Returns one record per regulated
/// joint, including zero deltas, in joint order.
pub fn regulate_velocities(
    velocities: &mut [Vec3],
    positions: &[Vec3],
    joints: &[usize],
    cube: &CanonicalOccupancy,
    params: &FieldParams,
) -> Vec<CorrectionRecord> {
    let occupied = cube.occupied_centers_canonical();
    let mut records = Vec::with_capacity(joints.len());
    for &j in joints {
        let delta = field_correction(&velocities[j], &positions[j], &occupied, params);
        velocities[j] += delta;
        records.push(CorrectionRecord { joint: j, delta });
    }
    records
}
