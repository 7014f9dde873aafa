//! Batch voxelization: motion JSON in, one swept-occupancy grid per
//! motion out, plus a manifest describing every output.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use rayon::prelude::*;

use occu_core::occupancy::{voxelize_motion, VoxelizeParams};

use crate::config::ToolConfig;
use crate::formats::{
    self, grid_file_bytes, sha256_hex, Manifest, ManifestEntry,
};
use crate::Outcome;

#[derive(Debug, clap::Args)]
pub struct BuildMobArgs {
    /// Directory receiving the grids and `manifest.json`.
    #[arg(long)]
    pub out: PathBuf,
    /// Motion JSON files to sweep.
    #[arg(required = true)]
    pub motions: Vec<PathBuf>,
}

/// Output file name for each input: the motion's stem plus `.mob`, with
/// a numeric suffix when two inputs share a stem. Computed up front and
/// sequentially so parallel workers cannot race on names.
fn plan_names(inputs: &[PathBuf]) -> Vec<String> {
    let mut seen = std::collections::HashMap::new();
    inputs
        .iter()
        .map(|p| {
            let stem = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "motion".to_string());
            let n = seen.entry(stem.clone()).or_insert(0usize);
            *n += 1;
            if *n == 1 {
                format!("{stem}.mob")
            } else {
                format!("{stem}_{n}.mob")
            }
        })
        .collect()
}

fn build_one(
    source: &Path,
    out_path: &Path,
    name: &str,
    params: &VoxelizeParams,
) -> ManifestEntry {
    let started = Instant::now();
    let mut entry = ManifestEntry {
        path: name.to_string(),
        source: source.display().to_string(),
        wall_clock_ms: 0,
        sha256: None,
        dims: None,
        occupied_fraction: None,
        start_root: None,
        end_root: None,
        error: None,
    };
    let mut attempt = || -> anyhow::Result<()> {
        let seq = formats::load_motion(source)?;
        let grid = voxelize_motion(&seq, params)?;
        let bytes = grid_file_bytes(&grid);
        formats::write_atomic(out_path, &bytes)?;
        entry.sha256 = Some(sha256_hex(&bytes));
        entry.dims = Some(grid.spec().dims);
        entry.occupied_fraction =
            Some(grid.count_occupied() as f64 / grid.spec().cell_count() as f64);
        let first = seq.frame(0).root_pos;
        let last = seq.frames().last().expect("sequence is non-empty").root_pos;
        entry.start_root = Some([first.x, first.y, first.z]);
        entry.end_root = Some([last.x, last.y, last.z]);
        Ok(())
    };
    if let Err(e) = attempt() {
        entry.error = Some(format!("{e:#}"));
    }
    entry.wall_clock_ms = started.elapsed().as_millis() as u64;
    entry
}

pub fn build_mob(args: &BuildMobArgs, tool: &ToolConfig, verbose: bool) -> anyhow::Result<Outcome> {
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let params = VoxelizeParams {
        unit: tool.unit,
        margin_cells: tool.margin_cells,
        sample_spacing: tool.sample_spacing,
        bounds: None,
    };
    let names = plan_names(&args.motions);
    let entries: Vec<ManifestEntry> = args
        .motions
        .par_iter()
        .zip(&names)
        .map(|(source, name)| build_one(source, &args.out.join(name), name, &params))
        .collect();
    let mut failures = 0;
    for e in &entries {
        match &e.error {
            Some(msg) => {
                failures += 1;
                eprintln!("error: {}: {msg}", e.source);
            }
            None if verbose => {
                eprintln!(
                    "{} -> {} ({} cells, {} ms)",
                    e.source,
                    e.path,
                    e.dims.map(|d| d.iter().product::<usize>()).unwrap_or(0),
                    e.wall_clock_ms
                );
            }
            None => {}
        }
    }
    let manifest = Manifest::sorted(entries);
    manifest.save(&args.out.join("manifest.json"))?;
    if verbose || failures > 0 {
        eprintln!(
            "built {}/{} grids",
            manifest.entries.len() - failures,
            manifest.entries.len()
        );
    }
    Ok(if failures > 0 { Outcome::Partial } else { Outcome::Success })
}
