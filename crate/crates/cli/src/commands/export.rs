//! Viewer-friendly exports: occupancy grids as cube soup, episode root
//! trajectories as polylines.

use std::path::PathBuf;

use anyhow::bail;

use occu_core::Vec3;

use crate::formats::{
    self, grid_to_json, grid_to_obj, grid_to_ply, polyline_to_obj, polyline_to_ply, write_atomic,
};
use crate::Outcome;

#[derive(Debug, clap::Args)]
pub struct ExportArgs {
    /// Occupancy grid to export, one cube per occupied voxel.
    #[arg(long, conflicts_with = "episode")]
    pub grid: Option<PathBuf>,
    /// Episode log whose root trajectory exports as a polyline.
    #[arg(long)]
    pub episode: Option<PathBuf>,
    /// ply, obj or json (json is grid-only).
    #[arg(long)]
    pub format: String,
    #[arg(long)]
    pub out: PathBuf,
    /// Export the grid's complement instead of the grid.
    #[arg(long)]
    pub complement: bool,
}

pub fn export(args: &ExportArgs, verbose: bool) -> anyhow::Result<Outcome> {
    let text = match (&args.grid, &args.episode) {
        (Some(grid_path), None) => {
            let mut grid = formats::load_grid(grid_path)?;
            if args.complement {
                grid = grid.complement();
            }
            match args.format.as_str() {
                "ply" => grid_to_ply(&grid),
                "obj" => grid_to_obj(&grid),
                "json" => {
                    let mut t = serde_json::to_string_pretty(&grid_to_json(&grid))?;
                    t.push('\n');
                    t
                }
                other => bail!("unknown format `{other}` (expected ply, obj or json)"),
            }
        }
        (None, Some(episode_path)) => {
            let (result, _) = formats::load_episode(episode_path)?;
            let track: Vec<Vec3> = result.frames.iter().map(|f| f.pose.root_pos).collect();
            match args.format.as_str() {
                "ply" => polyline_to_ply(&track),
                "obj" => polyline_to_obj(&track),
                other => bail!("unknown format `{other}` for a trajectory (expected ply or obj)"),
            }
        }
        _ => bail!("pass exactly one of --grid or --episode"),
    };
    write_atomic(&args.out, text.as_bytes())?;
    if verbose {
        eprintln!("wrote {} ({} bytes)", args.out.display(), text.len());
    }
    Ok(Outcome::Success)
}

#[cfg(test)]
mod tests {
    use super::*;
    use occu_core::occupancy::{GridSpec, OccupancyGrid};

    fn tiny_grid() -> OccupancyGrid {
        let spec = GridSpec {
            origin: Vec3::new(1.0, 2.0, 3.0),
            unit: 0.5,
            dims: [2, 2, 2],
        };
        let mut g = OccupancyGrid::empty(spec);
        g.set([1, 0, 1], true);
        g
    }

    fn run_export(args: &ExportArgs) -> String {
        export(args, false).unwrap();
        std::fs::read_to_string(&args.out).unwrap()
    }

    #[test]
    fn one_voxel_ply_has_eight_vertices_twelve_faces() {
        let tmp = tempfile::tempdir().unwrap();
        let grid_path = tmp.path().join("g.mob");
        formats::save_grid(&grid_path, &tiny_grid()).unwrap();
        let args = ExportArgs {
            grid: Some(grid_path),
            episode: None,
            format: "ply".into(),
            out: tmp.path().join("g.ply"),
            complement: false,
        };
        let text = run_export(&args);
        assert!(text.contains("element vertex 8\n"));
        assert!(text.contains("element face 12\n"));
        // corner of cell [1,0,1] = origin + index * unit
        assert!(text.contains("1.5 2 3.5"), "{text}");
    }

    #[test]
    fn complement_cube_count_is_total_minus_original() {
        let tmp = tempfile::tempdir().unwrap();
        let grid_path = tmp.path().join("g.mob");
        formats::save_grid(&grid_path, &tiny_grid()).unwrap();
        let count_vertices = |complement: bool| {
            let args = ExportArgs {
                grid: Some(grid_path.clone()),
                episode: None,
                format: "obj".into(),
                out: tmp.path().join(if complement { "c.obj" } else { "g.obj" }),
                complement,
            };
            run_export(&args)
                .lines()
                .filter(|l| l.starts_with("v "))
                .count()
        };
        let original = count_vertices(false) / 8;
        let complement = count_vertices(true) / 8;
        assert_eq!(original, 1);
        assert_eq!(complement, 8 - original);
    }

    #[test]
    fn unknown_formats_are_errors() {
        let tmp = tempfile::tempdir().unwrap();
        let grid_path = tmp.path().join("g.mob");
        formats::save_grid(&grid_path, &tiny_grid()).unwrap();
        let args = ExportArgs {
            grid: Some(grid_path),
            episode: None,
            format: "stl".into(),
            out: tmp.path().join("g.stl"),
            complement: false,
        };
        let err = export(&args, false).unwrap_err();
        assert!(format!("{err}").contains("stl"));
        assert!(!args.out.exists(), "no output on error");
    }
}
