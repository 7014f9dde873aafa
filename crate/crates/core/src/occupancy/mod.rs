//! Occupancy representations: dense bit grids, signed distance grids,
//! motion voxelization and pseudo-scenes, live occupancy providers,
//! body-centric canonical sampling, nearest-free-voxel queries and basis
//! point encodings.

mod bps;
mod canon;
mod edt;
mod grid;
mod mob;
mod provider;
mod sdf;

pub use bps::{bps_encode, BpsBasis};
pub use canon::{
    sample_canonical_occupancy, CanonicalOccupancy, CanonicalOccupancyConfig, SampleMode,
};
pub use edt::{NearestFree, NearestFreeField};
pub use grid::{GridSpec, OccupancyGrid};
pub use mob::{voxelize_motion, VoxelizeError, VoxelizeParams};
pub use provider::{
    BoxScene, EmptyScene, HalfSpaceFloor, OccupancyProvider, Quantization, RevolvingDoorScene,
    ScheduledSwapScene, StaticGridScene,
};
pub use sdf::{sdf_to_occupancy, SdfGrid};

use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum OccupancyError {
    /// Every voxel of the grid is occupied; nearest-free queries and
    /// penetration references are undefined.
    #[error("grid has no free voxel")]
    NoFreeVoxel,
}
