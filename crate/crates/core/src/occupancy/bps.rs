use alloc::vec::Vec;

use crate::math::{sqrt, Vec3};
use crate::rng;

/// A fixed set of basis points in the unit ball. Encodings are distances
/// from each basis point to the nearest point of a scene, which gives a
/// fixed-length scene descriptor regardless of scene size.
#[derive(Debug, Clone, PartialEq)]
pub struct BpsBasis {
    points: Vec<Vec3>,
}

impl BpsBasis {
    /// Uniform ball samples from a seeded stream; the same `(count, seed)`
    /// always yields the same basis, which is what makes encodings
    /// comparable across runs.
    pub fn generate(count: usize, seed: u64) -> BpsBasis {
        let mut rng = rng::seeded(seed);
        let points = (0..count).map(|_| rng::unit_ball(&mut rng)).collect();
        BpsBasis { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }
}

/// Encodes a point cloud (occupied voxel centers, usually) against a
/// basis ball placed at `center` with radius `radius`.
///
/// Each output value is the distance from the scaled basis point to its
/// nearest cloud point, clamped to `2 * radius` so far-away and empty
/// scenes stay bounded. An empty cloud encodes as all `2 * radius`.
pub fn bps_encode(basis: &BpsBasis, center: &Vec3, radius: f64, cloud: &[Vec3]) -> Vec<f64> {
    let cap = 2.0 * radius;
    basis
        .points
        .iter()
        .map(|b| {
            let anchor = center + b * radius;
            let mut best = f64::INFINITY;
            for p in cloud {
                let d2 = (p - anchor).norm_squared();
                if d2 < best {
                    best = d2;
                }
            }
            if best.is_finite() {
                sqrt(best).min(cap)
            } else {
                cap
            }
        })
        .collect()
}
