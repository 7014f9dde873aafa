use alloc::vec;
use alloc::vec::Vec;

use super::grid::OccupancyGrid;
use super::OccupancyError;
use crate::math::{ceil, sqrt, Vec3};

/// Stand-in for infinity inside the distance transform; finite so that
/// parabola intersections never hit inf - inf.
const FAR: f64 = 1e20;

/// Answer to a nearest-free-voxel query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearestFree {
    pub cell: [usize; 3],
    pub center: Vec3,
    /// Euclidean distance from the query point to `center`, meters.
    pub distance: f64,
}

/// Precomputed nearest-free-voxel structure over one grid.
///
/// A three-pass squared Euclidean distance transform (lower envelope of
/// parabolas, exact) gives each cell its squared cell-unit distance to
/// the nearest free cell. Point queries use that as a search bound and
/// then scan the candidate box exhaustively, so the reported cell is the
/// exact nearest free center with ties broken by smallest linear index.
pub struct NearestFreeField<'a> {
    grid: &'a OccupancyGrid,
    /// Squared distance (cell units) from each cell to the nearest free
    /// cell; 0 for free cells, >= FAR if the grid has no free cell.
    dist2: Vec<f64>,
    has_free: bool,
}

impl<'a> NearestFreeField<'a> {
    pub fn new(grid: &'a OccupancyGrid) -> NearestFreeField<'a> {
        let spec = grid.spec();
        let n = spec.cell_count();
        let mut dist2 = vec![0.0f64; n];
        let mut has_free = false;
        for idx in 0..n {
            if grid.get_linear(idx) {
                dist2[idx] = FAR;
            } else {
                has_free = true;
            }
        }
        if has_free {
            squared_edt_3d(&mut dist2, spec.dims);
        }
        NearestFreeField {
            grid,
            dist2,
            has_free,
        }
    }

    pub fn grid(&self) -> &OccupancyGrid {
        self.grid
    }

    /// Squared cell-unit distance from `cell` to the nearest free cell.
    pub fn cell_distance_squared(&self, cell: [usize; 3]) -> f64 {
        self.dist2[self.grid.spec().linear(cell)]
    }

    /// Exact nearest free voxel center to an arbitrary world point.
    pub fn nearest_free(&self, p: &Vec3) -> Result<NearestFree, OccupancyError> {
        if !self.has_free {
            return Err(OccupancyError::NoFreeVoxel);
        }
        let spec = self.grid.spec();
        let u = spec.unit;
        let c = spec.clamped_cell_of_point(p);
        let d0 = (p - spec.cell_center(c)).norm();
        let reach = d0 + u * sqrt(self.dist2[spec.linear(c)].min(FAR));
        // every cell whose center could beat `reach` lies within this
        // Chebyshev index radius of c (d0 accounts for p sitting off
        // center or outside the grid entirely)
        let rad = ceil((reach + d0) / u) as isize + 1;

        let lo = [
            (c[0] as isize - rad).max(0) as usize,
            (c[1] as isize - rad).max(0) as usize,
            (c[2] as isize - rad).max(0) as usize,
        ];
        let hi = [
            ((c[0] as isize + rad) as usize).min(spec.dims[0] - 1),
            ((c[1] as isize + rad) as usize).min(spec.dims[1] - 1),
            ((c[2] as isize + rad) as usize).min(spec.dims[2] - 1),
        ];

        let mut best: Option<([usize; 3], f64)> = None;
        for z in lo[2]..=hi[2] {
            for y in lo[1]..=hi[1] {
                for x in lo[0]..=hi[0] {
                    let cell = [x, y, z];
                    if self.grid.get(cell) {
                        continue;
                    }
                    let d2 = (p - spec.cell_center(cell)).norm_squared();
                    // strict < keeps the first (smallest linear index) on ties
                    if best.is_none_or(|(_, b)| d2 < b) {
                        best = Some((cell, d2));
                    }
                }
            }
        }
        let (cell, d2) = best.ok_or(OccupancyError::NoFreeVoxel)?;
        Ok(NearestFree {
            cell,
            center: spec.cell_center(cell),
            distance: sqrt(d2),
        })
    }
}

/// In-place exact squared EDT: input holds 0 at feature cells and FAR
/// elsewhere, output holds squared cell-unit distances to the nearest
/// feature. One lower-envelope pass per axis.
fn squared_edt_3d(f: &mut [f64], dims: [usize; 3]) {
    let [nx, ny, nz] = dims;
    let max_n = nx.max(ny).max(nz);
    let mut row = vec![0.0f64; max_n];
    let mut out = vec![0.0f64; max_n];
    let mut v = vec![0usize; max_n];
    let mut z = vec![0.0f64; max_n + 1];

    // x rows
    for kz in 0..nz {
        for ky in 0..ny {
            let base = nx * (ky + ny * kz);
            row[..nx].copy_from_slice(&f[base..base + nx]);
            dt1d(&row[..nx], &mut out[..nx], &mut v, &mut z);
            f[base..base + nx].copy_from_slice(&out[..nx]);
        }
    }
    // y rows
    for kz in 0..nz {
        for kx in 0..nx {
            for ky in 0..ny {
                row[ky] = f[kx + nx * (ky + ny * kz)];
            }
            dt1d(&row[..ny], &mut out[..ny], &mut v, &mut z);
            for ky in 0..ny {
                f[kx + nx * (ky + ny * kz)] = out[ky];
            }
        }
    }
    // z rows
    for ky in 0..ny {
        for kx in 0..nx {
            for kz in 0..nz {
                row[kz] = f[kx + nx * (ky + ny * kz)];
            }
            dt1d(&row[..nz], &mut out[..nz], &mut v, &mut z);
            for kz in 0..nz {
                f[kx + nx * (ky + ny * kz)] = out[kz];
            }
        }
    }
}

/// 1D squared distance transform of sampled function `f` (lower envelope
/// of parabolas rooted at (q, f[q])).
fn dt1d(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    if n == 0 {
        return;
    }
    let mut k = 0usize;
    v[0] = 0;
    z[0] = -FAR;
    z[1] = FAR;
    for q in 1..n {
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64))
                / (2 * q - 2 * p) as f64;
            if s <= z[k] && k > 0 {
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = FAR;
                break;
            }
        }
    }
    k = 0;
    for q in 0..n {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let d = q as f64 - p as f64;
        out[q] = d * d + f[p];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::Vec3;
    use crate::occupancy::grid::GridSpec;
    use crate::rng;
    use proptest::prelude::*;

    fn grid_from_bits(dims: [usize; 3], occupied: &[[usize; 3]]) -> OccupancyGrid {
        let spec = GridSpec {
            origin: Vec3::new(0.0, 0.0, 0.0),
            unit: 0.5,
            dims,
        };
        let mut g = OccupancyGrid::empty(spec);
        for &c in occupied {
            g.set(c, true);
        }
        g
    }

    #[test]
    fn row_distances_match_hand_computation() {
        // occupied at x = 0,1,3,4; free at x = 2
        let g = grid_from_bits(
            [5, 1, 1],
            &[[0, 0, 0], [1, 0, 0], [3, 0, 0], [4, 0, 0]],
        );
        let f = NearestFreeField::new(&g);
        let expect = [4.0, 1.0, 0.0, 1.0, 4.0];
        for x in 0..5 {
            assert_eq!(f.cell_distance_squared([x, 0, 0]), expect[x]);
        }
    }

    #[test]
    fn single_free_corner_gives_squared_index_distance() {
        let dims = [4, 3, 2];
        let mut occupied = alloc::vec::Vec::new();
        for z in 0..2 {
            for y in 0..3 {
                for x in 0..4 {
                    if (x, y, z) != (0, 0, 0) {
                        occupied.push([x, y, z]);
                    }
                }
            }
        }
        let g = grid_from_bits(dims, &occupied);
        let f = NearestFreeField::new(&g);
        for z in 0..2usize {
            for y in 0..3usize {
                for x in 0..4usize {
                    let want = (x * x + y * y + z * z) as f64;
                    assert_eq!(f.cell_distance_squared([x, y, z]), want);
                }
            }
        }
    }

    #[test]
    fn query_from_free_cell_returns_it() {
        let g = grid_from_bits([3, 3, 3], &[[1, 1, 1]]);
        let f = NearestFreeField::new(&g);
        let p = Vec3::new(0.3, 0.3, 0.3); // inside free cell [0,0,0]
        let n = f.nearest_free(&p).unwrap();
        assert_eq!(n.cell, [0, 0, 0]);
        assert!((n.center - Vec3::new(0.25, 0.25, 0.25)).norm() < 1e-12);
    }

    #[test]
    fn query_from_occupied_cell_finds_neighbor() {
        let g = grid_from_bits([3, 1, 1], &[[0, 0, 0]]);
        let f = NearestFreeField::new(&g);
        let p = Vec3::new(0.4, 0.25, 0.25); // in occupied [0,0,0], right edge
        let n = f.nearest_free(&p).unwrap();
        assert_eq!(n.cell, [1, 0, 0]);
        assert!((n.distance - 0.35).abs() < 1e-12);
    }

    #[test]
    fn full_grid_errors() {
        let g = grid_from_bits([2, 2, 1], &[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]]);
        let f = NearestFreeField::new(&g);
        assert_eq!(
            f.nearest_free(&Vec3::new(0.1, 0.1, 0.1)),
            Err(OccupancyError::NoFreeVoxel)
        );
    }

    #[test]
    fn outside_points_are_handled() {
        let g = grid_from_bits([2, 2, 2], &[[0, 0, 0]]);
        let f = NearestFreeField::new(&g);
        let p = Vec3::new(-5.0, -5.0, -5.0);
        let n = f.nearest_free(&p).unwrap();
        // nearest free center to the far-negative corner: [1,0,0] or
        // [0,1,0] or [0,0,1] are equidistant; smallest linear index wins
        assert_eq!(n.cell, [1, 0, 0]);
    }

    /// Brute force over every free cell in linear order with strict <,
    /// the same tie rule the query promises.
    fn brute_force(g: &OccupancyGrid, p: &Vec3) -> Option<([usize; 3], f64)> {
        let spec = g.spec();
        let mut best: Option<([usize; 3], f64)> = None;
        for idx in 0..spec.cell_count() {
            if g.get_linear(idx) {
                continue;
            }
            let cell = spec.cell_of_linear(idx);
            let d2 = (p - spec.cell_center(cell)).norm_squared();
            if best.is_none_or(|(_, b)| d2 < b) {
                best = Some((cell, d2));
            }
        }
        best
    }

    #[test]
    fn matches_brute_force_on_random_grids() {
        let mut rng = rng::seeded(909);
        for case in 0..150 {
            let dims = [
                1 + (rng.next_u64() % 6) as usize,
                1 + (rng.next_u64() % 6) as usize,
                1 + (rng.next_u64() % 6) as usize,
            ];
            let spec = GridSpec {
                origin: Vec3::new(-0.7, 0.3, -0.2),
                unit: 0.25,
                dims,
            };
            let mut g = OccupancyGrid::empty(spec);
            for idx in 0..spec.cell_count() {
                if rng::unit_f64(&mut rng) < 0.55 {
                    g.set_linear(idx, true);
                }
            }
            let field = NearestFreeField::new(&g);
            for _ in 0..20 {
                let p = Vec3::new(
                    rng::range_f64(&mut rng, -2.0, 2.0),
                    rng::range_f64(&mut rng, -1.0, 2.0),
                    rng::range_f64(&mut rng, -1.5, 1.5),
                );
                match (field.nearest_free(&p), brute_force(&g, &p)) {
                    (Ok(n), Some((cell, d2))) => {
                        assert_eq!(n.cell, cell, "case {case} point {p:?}");
                        assert!((n.distance - sqrt(d2)).abs() < 1e-12);
                    }
                    (Err(OccupancyError::NoFreeVoxel), None) => {}
                    (a, b) => panic!("case {case}: query {a:?} vs brute {b:?}"),
                }
            }
        }
    }

    use rand_chacha::rand_core::RngCore;

    proptest! {
        /// EDT of a grid with any free cell assigns 0 exactly to free cells.
        #[test]
        fn free_cells_have_zero_distance(bits in proptest::collection::vec(any::<bool>(), 24)) {
            let spec = GridSpec { origin: Vec3::zeros(), unit: 1.0, dims: [4, 3, 2] };
            let mut g = OccupancyGrid::empty(spec);
            for (i, b) in bits.iter().enumerate() {
                g.set_linear(i, *b);
            }
            let f = NearestFreeField::new(&g);
            if bits.iter().any(|b| !b) {
                for i in 0..24 {
                    let c = spec.cell_of_linear(i);
                    if !g.get_linear(i) {
                        prop_assert_eq!(f.cell_distance_squared(c), 0.0);
                    } else {
                        prop_assert!(f.cell_distance_squared(c) >= 1.0);
                    }
                }
            }
        }
    }
}
