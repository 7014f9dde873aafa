//! Binary grid files.
//!
//! Occupancy grids and distance fields share one header layout:
//! magic (4 bytes), version (u16 LE), dims (3 x u32 LE), origin
//! (3 x f64 LE), unit (f64 LE). Occupancy payload is a bit per cell,
//! LSB first in linear cell order; distance fields store one f32 LE
//! per cell in the same order.

use super::write_atomic;
use anyhow::{bail, Context};
use occu_core::occupancy::SdfGrid;
use occu_core::{GridSpec, OccupancyGrid, Vec3};
use std::fs;
use std::path::Path;

pub const GRID_MAGIC: &[u8; 4] = b"MOBG";
pub const SDF_MAGIC: &[u8; 4] = b"MSDF";
pub const GRID_VERSION: u16 = 1;

const HEADER_LEN: usize = 4 + 2 + 3 * 4 + 3 * 8 + 8;

fn encode_header(magic: &[u8; 4], spec: &GridSpec) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN);
    out.extend_from_slice(magic);
    out.extend_from_slice(&GRID_VERSION.to_le_bytes());
    for d in spec.dims {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    out.extend_from_slice(&spec.origin.x.to_le_bytes());
    out.extend_from_slice(&spec.origin.y.to_le_bytes());
    out.extend_from_slice(&spec.origin.z.to_le_bytes());
    out.extend_from_slice(&spec.unit.to_le_bytes());
    out
}

fn decode_header(bytes: &[u8], magic: &[u8; 4]) -> anyhow::Result<GridSpec> {
    if bytes.len() < HEADER_LEN {
        bail!("truncated header: {} bytes", bytes.len());
    }
    if &bytes[..4] != magic {
        bail!(
            "bad magic {:?}, expected {:?}",
            &bytes[..4],
            std::str::from_utf8(magic).unwrap()
        );
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != GRID_VERSION {
        bail!("unsupported version {version}");
    }
    let mut dims = [0usize; 3];
    for (i, d) in dims.iter_mut().enumerate() {
        let at = 6 + i * 4;
        *d = u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
    }
    let f64_at = |at: usize| f64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
    let origin = Vec3::new(f64_at(18), f64_at(26), f64_at(34));
    let unit = f64_at(42);
    if !(unit.is_finite() && unit > 0.0) {
        bail!("bad cell size {unit}");
    }
    Ok(GridSpec { origin, unit, dims })
}

/// Full file image of a grid, as `save_grid` would write it. Exposed so
/// batch commands can hash exactly what lands on disk.
pub fn grid_file_bytes(grid: &OccupancyGrid) -> Vec<u8> {
    let mut out = encode_header(GRID_MAGIC, grid.spec());
    out.extend_from_slice(grid.bytes());
    out
}

pub fn save_grid(path: &Path, grid: &OccupancyGrid) -> anyhow::Result<()> {
    write_atomic(path, &grid_file_bytes(grid))
}

pub fn load_grid(path: &Path) -> anyhow::Result<OccupancyGrid> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let spec = decode_header(&bytes, GRID_MAGIC)
        .with_context(|| format!("parsing {}", path.display()))?;
    let expected = spec.cell_count().div_ceil(8);
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != expected {
        bail!(
            "{}: payload is {} bytes, dims {:?} need {}",
            path.display(),
            payload.len(),
            spec.dims,
            expected
        );
    }
    OccupancyGrid::from_bytes(spec, payload.to_vec())
        .with_context(|| format!("validating {}", path.display()))
}

pub fn save_sdf(path: &Path, sdf: &SdfGrid) -> anyhow::Result<()> {
    let mut out = encode_header(SDF_MAGIC, sdf.spec());
    for v in sdf.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    write_atomic(path, &out)
}

pub fn load_sdf(path: &Path) -> anyhow::Result<SdfGrid> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let spec = decode_header(&bytes, SDF_MAGIC)
        .with_context(|| format!("parsing {}", path.display()))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != spec.cell_count() * 4 {
        bail!(
            "{}: payload is {} bytes, dims {:?} need {}",
            path.display(),
            payload.len(),
            spec.dims,
            spec.cell_count() * 4
        );
    }
    let values: Vec<f32> = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    SdfGrid::new(spec, values)
        .with_context(|| format!("validating {}", path.display()))
}
