use alloc::vec::Vec;

use thiserror::Error;

use super::grid::{GridSpec, OccupancyGrid};
use crate::math::{ceil, Aabb, RotationError};
use crate::motion::{CapsuleBody, MotionSequence};

/// Controls motion voxelization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoxelizeParams {
    /// Voxel edge length, meters.
    pub unit: f64,
    /// Extra empty cells padded around the motion's bounding box.
    pub margin_cells: usize,
    /// Surface sample spacing; defaults to `unit / 2` so no surface patch
    /// can straddle a voxel unseen.
    pub sample_spacing: Option<f64>,
    /// Overrides the fitted bounding box (before padding). Lets callers
    /// voxelize different motions into identical grids.
    pub bounds: Option<Aabb>,
}

impl Default for VoxelizeParams {
    fn default() -> Self {
        VoxelizeParams {
            unit: 0.08,
            margin_cells: 1,
            sample_spacing: None,
            bounds: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VoxelizeError {
    #[error("voxel unit must be positive and finite, got {0}")]
    BadUnit(f64),
    #[error("frame {frame}: degenerate rotation")]
    BadRotation { frame: usize },
    #[error("motion bounding box is empty")]
    EmptyBounds,
}

/// Sweeps a motion into its occupancy grid: the set of voxels the body
/// passes through over the whole sequence.
///
/// Two marking passes per frame guarantee the cover is sound for thin
/// geometry and fast for volume:
/// 1. every body surface sample (spacing <= unit/2) and every joint marks
///    its containing voxel;
/// 2. every still-unmarked voxel whose center lies inside the body marks
///    itself.
///
/// The complement of the result is the motion's pseudo-scene: free space
/// the body provably fit through, occupied everywhere else.
pub fn voxelize_motion(
    seq: &MotionSequence,
    params: &VoxelizeParams,
) -> Result<OccupancyGrid, VoxelizeError> {
    if !(params.unit > 0.0) || !params.unit.is_finite() {
        return Err(VoxelizeError::BadUnit(params.unit));
    }
    let skeleton = seq.skeleton();

    let mut bodies: Vec<CapsuleBody> = Vec::with_capacity(seq.len());
    let mut joints: Vec<Vec<crate::math::Vec3>> = Vec::with_capacity(seq.len());
    let mut bounds = Aabb::empty();
    for (frame, pose) in seq.frames().iter().enumerate() {
        let fk = crate::motion::forward_kinematics(skeleton, pose)
            .map_err(|_: RotationError| VoxelizeError::BadRotation { frame })?;
        let body = CapsuleBody::from_fk(skeleton, &fk);
        bounds.union(&body.aabb());
        joints.push(fk.positions);
        bodies.push(body);
    }
    if let Some(fixed) = params.bounds {
        bounds = fixed;
    }
    if bounds.is_empty() {
        return Err(VoxelizeError::EmptyBounds);
    }
    bounds = bounds.padded(params.margin_cells as f64 * params.unit);

    let ext = bounds.max - bounds.min;
    let dims = [
        (ceil(ext.x / params.unit) as usize).max(1),
        (ceil(ext.y / params.unit) as usize).max(1),
        (ceil(ext.z / params.unit) as usize).max(1),
    ];
    let spec = GridSpec {
        origin: bounds.min,
        unit: params.unit,
        dims,
    };
    let mut grid = OccupancyGrid::empty(spec);
    let spacing = params.sample_spacing.unwrap_or(params.unit / 2.0);

    // pass 1: surfaces and joints
    for (body, frame_joints) in bodies.iter().zip(&joints) {
        body.for_each_surface_sample(spacing, |p| {
            if let Some(cell) = spec.cell_of_point(&p) {
                grid.set(cell, true);
            }
        });
        for p in frame_joints {
            if let Some(cell) = spec.cell_of_point(p) {
                grid.set(cell, true);
            }
        }
    }

    // pass 2: interior cell centers, restricted to each frame's bounds
    for body in &bodies {
        let bb = body.aabb();
        let lo = spec.clamped_cell_of_point(&bb.min);
        let hi = spec.clamped_cell_of_point(&bb.max);
        for z in lo[2]..=hi[2] {
            for y in lo[1]..=hi[1] {
                for x in lo[0]..=hi[0] {
                    let cell = [x, y, z];
                    if grid.get(cell) {
                        continue;
                    }
                    if body.contains(&spec.cell_center(cell)) {
                        grid.set(cell, true);
                    }
                }
            }
        }
    }

    Ok(grid)
}
