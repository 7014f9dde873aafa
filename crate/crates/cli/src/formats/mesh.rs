//! Mesh and polyline exports for inspection in standard viewers.
//!
//! Occupied cells become axis-aligned cubes, 8 vertices and 12 triangles
//! each, so cube counts can be read straight off the element counts.

use occu_core::{OccupancyGrid, Vec3};
use std::fmt::Write;

/// Cube corner k has offsets (k&1, k>>1&1, k>>2&1) in x, y, z.
const CORNERS: [[f64; 3]; 8] = [
    [0.0, 0.0, 0.0],
    [1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [1.0, 1.0, 0.0],
    [0.0, 0.0, 1.0],
    [1.0, 0.0, 1.0],
    [0.0, 1.0, 1.0],
    [1.0, 1.0, 1.0],
];

/// Outward-facing triangles over [`CORNERS`].
const TRIS: [[usize; 3]; 12] = [
    [0, 2, 1],
    [1, 2, 3],
    [4, 5, 6],
    [5, 7, 6],
    [0, 1, 4],
    [1, 5, 4],
    [2, 6, 3],
    [3, 6, 7],
    [0, 4, 2],
    [2, 4, 6],
    [1, 3, 5],
    [3, 7, 5],
];

fn cube_corner(grid: &OccupancyGrid, cell: [usize; 3], k: usize) -> Vec3 {
    let spec = grid.spec();
    let lo = spec.origin
        + Vec3::new(
            cell[0] as f64 * spec.unit,
            cell[1] as f64 * spec.unit,
            cell[2] as f64 * spec.unit,
        );
    lo + Vec3::new(
        CORNERS[k][0] * spec.unit,
        CORNERS[k][1] * spec.unit,
        CORNERS[k][2] * spec.unit,
    )
}

pub fn grid_to_ply(grid: &OccupancyGrid) -> String {
    let cells: Vec<[usize; 3]> = grid.iter_occupied().collect();
    let mut out = String::new();
    out.push_str("ply\nformat ascii 1.0\n");
    let _ = writeln!(out, "comment occupancy cubes, cell size {}", grid.spec().unit);
    let _ = writeln!(out, "element vertex {}", cells.len() * 8);
    out.push_str("property float x\nproperty float y\nproperty float z\n");
    let _ = writeln!(out, "element face {}", cells.len() * 12);
    out.push_str("property list uchar int vertex_indices\nend_header\n");
    for cell in &cells {
        for k in 0..8 {
            let p = cube_corner(grid, *cell, k);
            let _ = writeln!(out, "{} {} {}", p.x as f32, p.y as f32, p.z as f32);
        }
    }
    for (i, _) in cells.iter().enumerate() {
        let base = i * 8;
        for t in TRIS {
            let _ = writeln!(out, "3 {} {} {}", base + t[0], base + t[1], base + t[2]);
        }
    }
    out
}

pub fn grid_to_obj(grid: &OccupancyGrid) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# occupancy cubes, cell size {}", grid.spec().unit);
    let cells: Vec<[usize; 3]> = grid.iter_occupied().collect();
    for cell in &cells {
        for k in 0..8 {
            let p = cube_corner(grid, *cell, k);
            let _ = writeln!(out, "v {} {} {}", p.x, p.y, p.z);
        }
    }
    for (i, _) in cells.iter().enumerate() {
        let base = i * 8 + 1; // OBJ indices are 1-based
        for t in TRIS {
            let _ = writeln!(out, "f {} {} {}", base + t[0], base + t[1], base + t[2]);
        }
    }
    out
}

/// Occupied cell centers plus the grid frame, for downstream scripting.
pub fn grid_to_json(grid: &OccupancyGrid) -> String {
    let spec = grid.spec();
    let centers: Vec<[f64; 3]> = grid
        .iter_occupied()
        .map(|cell| {
            let c = spec.cell_center(cell);
            [c.x, c.y, c.z]
        })
        .collect();
    let value = serde_json::json!({
        "origin": [spec.origin.x, spec.origin.y, spec.origin.z],
        "unit": spec.unit,
        "dims": spec.dims,
        "count": centers.len(),
        "cubes": centers,
    });
    let mut text = serde_json::to_string_pretty(&value).expect("static structure");
    text.push('\n');
    text
}

/// A trajectory as a PLY edge soup.
pub fn polyline_to_ply(points: &[Vec3]) -> String {
    let mut out = String::new();
    out.push_str("ply\nformat ascii 1.0\n");
    let _ = writeln!(out, "element vertex {}", points.len());
    out.push_str("property float x\nproperty float y\nproperty float z\n");
    let _ = writeln!(out, "element edge {}", points.len().saturating_sub(1));
    out.push_str("property int vertex1\nproperty int vertex2\nend_header\n");
    for p in points {
        let _ = writeln!(out, "{} {} {}", p.x as f32, p.y as f32, p.z as f32);
    }
    for i in 1..points.len() {
        let _ = writeln!(out, "{} {}", i - 1, i);
    }
    out
}

/// A trajectory as an OBJ polyline (`l` element).
pub fn polyline_to_obj(points: &[Vec3]) -> String {
    let mut out = String::new();
    for p in points {
        let _ = writeln!(out, "v {} {} {}", p.x, p.y, p.z);
    }
    if points.len() > 1 {
        out.push('l');
        for i in 1..=points.len() {
            let _ = write!(out, " {i}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use occu_core::GridSpec;

    fn two_cube_grid() -> OccupancyGrid {
        let spec = GridSpec {
            origin: Vec3::new(0.0, 0.0, 0.0),
            unit: 0.5,
            dims: [3, 3, 3],
        };
        let mut g = OccupancyGrid::empty(spec);
        g.set([0, 0, 0], true);
        g.set([2, 1, 0], true);
        g
    }

    #[test]
    fn ply_counts_match_cube_count() {
        let text = grid_to_ply(&two_cube_grid());
        assert!(text.contains("element vertex 16\n"));
        assert!(text.contains("element face 24\n"));
        let body: Vec<&str> = text
            .lines()
            .skip_while(|l| *l != "end_header")
            .skip(1)
            .collect();
        assert_eq!(body.len(), 16 + 24);
        // every face line references valid vertices
        for line in &body[16..] {
            let mut it = line.split_whitespace();
            assert_eq!(it.next(), Some("3"));
            for tok in it {
                let idx: usize = tok.parse().unwrap();
                assert!(idx < 16);
            }
        }
    }

    #[test]
    fn obj_uses_one_based_indices() {
        let text = grid_to_obj(&two_cube_grid());
        let vs = text.lines().filter(|l| l.starts_with("v ")).count();
        let fs = text.lines().filter(|l| l.starts_with("f ")).count();
        assert_eq!(vs, 16);
        assert_eq!(fs, 24);
        for line in text.lines().filter(|l| l.starts_with("f ")) {
            for tok in line.split_whitespace().skip(1) {
                let idx: usize = tok.parse().unwrap();
                assert!((1..=16).contains(&idx));
            }
        }
    }

    #[test]
    fn cube_corners_span_the_cell() {
        let g = two_cube_grid();
        let lo = cube_corner(&g, [2, 1, 0], 0);
        let hi = cube_corner(&g, [2, 1, 0], 7);
        assert_eq!((lo.x, lo.y, lo.z), (1.0, 0.5, 0.0));
        assert_eq!((hi.x, hi.y, hi.z), (1.5, 1.0, 0.5));
    }

    #[test]
    fn json_lists_cell_centers() {
        let text = grid_to_json(&two_cube_grid());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["count"], 2);
        assert_eq!(v["cubes"][0][0], 0.25);
        assert_eq!(v["cubes"][1][0], 1.25);
    }

    #[test]
    fn polylines_chain_every_vertex() {
        let pts = [
            Vec3::new(0.0, 0.0, 0.9),
            Vec3::new(1.0, 0.0, 0.9),
            Vec3::new(1.0, 1.0, 0.9),
        ];
        let ply = polyline_to_ply(&pts);
        assert!(ply.contains("element edge 2\n"));
        let obj = polyline_to_obj(&pts);
        assert!(obj.contains("l 1 2 3"));
    }
}
