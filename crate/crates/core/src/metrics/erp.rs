//! Edit distance with real penalty between 3D point sequences.
//!
//! Unlike DTW this is a metric: gaps are charged by distance to a fixed
//! reference point, so the triangle inequality holds and comparisons
//! across trajectory pairs stay consistent.

use alloc::vec;

use crate::math::Vec3;

/// ERP distance between two trajectories with gap reference `gap`.
///
/// Cell moves: match `a[i]` with `b[j]` at cost `d(a[i], b[j])`, or skip
/// one element at the cost of its distance to `gap`. Empty-vs-empty is 0;
/// against an empty sequence every element is charged to the gap.
pub fn erp_distance(a: &[Vec3], b: &[Vec3], gap: &Vec3) -> f64 {
    let (n, m) = (a.len(), b.len());
    // single rolling row keeps memory at O(m)
    let mut prev = vec![0.0f64; m + 1];
    for j in 1..=m {
        prev[j] = prev[j - 1] + (b[j - 1] - gap).norm();
    }
    let mut cur = vec![0.0f64; m + 1];
    for i in 1..=n {
        let gap_a = (a[i - 1] - gap).norm();
        cur[0] = prev[0] + gap_a;
        for j in 1..=m {
            let matched = prev[j - 1] + (a[i - 1] - b[j - 1]).norm();
            let skip_a = prev[j] + gap_a;
            let skip_b = cur[j - 1] + (b[j - 1] - gap).norm();
            cur[j] = matched.min(skip_a).min(skip_b);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}
