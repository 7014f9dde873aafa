//! Small numeric layer shared by the whole crate.
//!
//! All transcendental float math is routed through [`libm`] so that std and
//! no_std builds (and every platform) produce bit-identical results. Code in
//! this crate should call these helpers instead of the `f64` inherent
//! methods.

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

pub use libm::{atan2, ceil, cos, fabs, floor, hypot, sin, sqrt};

/// Axis-aligned box, used for capsule bounds, grid sizing and box
/// obstacles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    /// Empty box: grows from nothing under [`Aabb::union_point`].
    pub fn empty() -> Aabb {
        Aabb {
            min: Vec3::repeat(f64::INFINITY),
            max: Vec3::repeat(f64::NEG_INFINITY),
        }
    }

    pub fn new(min: Vec3, max: Vec3) -> Aabb {
        Aabb { min, max }
    }

    pub fn is_empty(&self) -> bool {
        self.min.x > self.max.x || self.min.y > self.max.y || self.min.z > self.max.z
    }

    pub fn union_point(&mut self, p: &Vec3) {
        self.min = self.min.inf(p);
        self.max = self.max.sup(p);
    }

    pub fn union(&mut self, other: &Aabb) {
        self.min = self.min.inf(&other.min);
        self.max = self.max.sup(&other.max);
    }

    /// Grows the box by `pad` on every side.
    pub fn padded(&self, pad: f64) -> Aabb {
        Aabb {
            min: self.min - Vec3::repeat(pad),
            max: self.max + Vec3::repeat(pad),
        }
    }

    /// Closed-box containment.
    pub fn contains(&self, p: &Vec3) -> bool {
        p.x >= self.min.x
            && p.x <= self.max.x
            && p.y >= self.min.y
            && p.y <= self.max.y
            && p.z >= self.min.z
            && p.z <= self.max.z
    }
}

/// Continuous 6D rotation encoding: the first two *columns* of a rotation
/// matrix, stored column-major as `[c0x, c0y, c0z, c1x, c1y, c1z]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rot6(pub [f64; 6]);

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum RotationError {
    /// First 3-vector of the 6D encoding has norm below 1e-8.
    #[error("6d rotation: first column is numerically zero")]
    ZeroColumn,
    /// Second 3-vector is (anti)parallel to the first within 1e-8.
    #[error("6d rotation: columns are parallel, basis is degenerate")]
    ParallelColumns,
}

const DEGENERATE_EPS: f64 = 1e-8;

impl Rot6 {
    pub const IDENTITY: Rot6 = Rot6([1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);

    pub fn new(v: [f64; 6]) -> Self {
        Rot6(v)
    }

    pub fn to_matrix(&self) -> Result<Mat3, RotationError> {
        rot6_to_matrix(self)
    }

    pub fn from_matrix(m: &Mat3) -> Rot6 {
        matrix_to_rot6(m)
    }
}

/// Gram-Schmidt reconstruction of a rotation matrix from its 6D encoding.
///
/// The two encoded vectors need not be normalized or orthogonal; any pair
/// spanning a plane maps to the rotation whose first column is the
/// normalized first vector and whose second column is the second vector
/// with its component along the first removed. The third column is their
/// cross product, so the result is always right-handed.
pub fn rot6_to_matrix(r: &Rot6) -> Result<Mat3, RotationError> {
    let a = Vec3::new(r.0[0], r.0[1], r.0[2]);
    let b = Vec3::new(r.0[3], r.0[4], r.0[5]);

    let na = a.norm();
    if na < DEGENERATE_EPS {
        return Err(RotationError::ZeroColumn);
    }
    let c0 = a / na;

    let b_orth = b - c0 * c0.dot(&b);
    let nb = b_orth.norm();
    if nb < DEGENERATE_EPS {
        return Err(RotationError::ParallelColumns);
    }
    let c1 = b_orth / nb;
    let c2 = c0.cross(&c1);

    Ok(Mat3::from_columns(&[c0, c1, c2]))
}

/// Inverse of [`rot6_to_matrix`] for proper rotations: take the first two
/// columns as-is.
pub fn matrix_to_rot6(m: &Mat3) -> Rot6 {
    Rot6([
        m[(0, 0)],
        m[(1, 0)],
        m[(2, 0)],
        m[(0, 1)],
        m[(1, 1)],
        m[(2, 1)],
    ])
}

/// Rotation by `yaw` radians about the world +Z axis.
pub fn rot_z(yaw: f64) -> Mat3 {
    let (s, c) = (sin(yaw), cos(yaw));
    Mat3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Wraps an angle to the half-open interval (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * core::f64::consts::PI;
    let mut x = a - two_pi * floor((a + core::f64::consts::PI) / two_pi);
    // floor() puts us in [-pi, pi); move the open end.
    if x <= -core::f64::consts::PI {
        x += two_pi;
    }
    x
}

/// `|x|^p` for the field falloff norm. `p` is a small positive integer in
/// practice (the default falloff uses p = 2) but any positive real works.
pub fn powf_abs(x: f64, p: f64) -> f64 {
    libm::pow(fabs(x), p)
}
