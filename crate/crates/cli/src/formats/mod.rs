//! On-disk formats: binary occupancy/SDF grids, motion JSON, episode
//! JSONL, mesh exports and batch manifests.

mod episode;
mod grid;
mod manifest;
mod mesh;
mod motion;

pub use episode::{load_episode, save_episode, EpisodeMeta};
pub use grid::{
    grid_file_bytes, load_grid, load_sdf, save_grid, save_sdf, GRID_MAGIC, GRID_VERSION,
    SDF_MAGIC,
};
pub use manifest::{sha256_hex, Manifest, ManifestEntry};
pub use mesh::{grid_to_json, grid_to_obj, grid_to_ply, polyline_to_obj, polyline_to_ply};
pub use motion::{
    load_motion, motion_from_value, motion_to_value, save_motion, skeleton_from_dto,
    skeleton_to_dto, SkeletonDto,
};

use anyhow::Context;
use std::fs;
use std::path::Path;

/// Writes a file atomically: to a sibling temp file first, then rename.
/// A crash mid-write can leave a stale `.tmp`, never a torn output.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let tmp = match path.file_name() {
        Some(name) => {
            let mut n = name.to_os_string();
            n.push(".tmp");
            path.with_file_name(n)
        }
        None => anyhow::bail!("not a file path: {}", path.display()),
    };
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path)
        .with_context(|| format!("renaming {} into place", tmp.display()))?;
    Ok(())
}
