//! Reachability probe: can an upright cylinder of a person's footprint
//! travel from start to goal through a static occupancy grid?
//!
//! The grid's XY lattice doubles as the search graph. A column is
//! traversable when no occupied voxel center falls inside the cylinder
//! placed on that column; the search is 8-connected A* with diagonal
//! moves forbidden from cutting corners past blocked columns.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;

use crate::math::{ceil, floor, hypot, Vec3};
use crate::occupancy::OccupancyGrid;

/// Clearance volume swept along the path: axis vertical, base on the
/// ground plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderSpec {
    pub radius: f64,
    pub height: f64,
    /// Ground plane height; the cylinder spans `[ground, ground + height]`.
    pub ground: f64,
}

impl Default for CylinderSpec {
    fn default() -> Self {
        CylinderSpec {
            radius: 0.25,
            height: 1.7,
            ground: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfeasibleReason {
    StartBlocked,
    GoalBlocked,
    NoPath,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// Voxel-center waypoints on the ground plane, start through goal.
    Feasible { path: Vec<Vec3> },
    Infeasible { reason: InfeasibleReason },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

/// Per-column traversability for the whole grid. Voxels outside the grid
/// never block (unknown space is optimistic-free).
struct ColumnMap {
    nx: usize,
    ny: usize,
    free: Vec<bool>,
}

impl ColumnMap {
    fn build(grid: &OccupancyGrid, spec: &CylinderSpec) -> ColumnMap {
        let g = grid.spec();
        let [nx, ny, nz] = g.dims;
        let u = g.unit;

        // z layers whose centers fall inside the cylinder's span
        let z_lo = ceil((spec.ground - g.origin.z) / u - 0.5).max(0.0) as usize;
        let z_hi_f = floor((spec.ground + spec.height - g.origin.z) / u - 0.5);
        let z_hi = if z_hi_f < 0.0 { 0 } else { (z_hi_f as usize + 1).min(nz) };

        // lattice offsets whose center-to-center distance fits the radius
        let reach = floor(spec.radius / u) as i64;
        let mut disk: Vec<(i64, i64)> = Vec::new();
        for dy in -reach..=reach {
            for dx in -reach..=reach {
                if hypot(dx as f64 * u, dy as f64 * u) <= spec.radius {
                    disk.push((dx, dy));
                }
            }
        }

        let mut free = vec![true; nx * ny];
        if z_lo >= z_hi {
            return ColumnMap { nx, ny, free };
        }
        let blocked = |x: usize, y: usize| {
            disk.iter().any(|&(dx, dy)| {
                let cx = x as i64 + dx;
                let cy = y as i64 + dy;
                cx >= 0
                    && cy >= 0
                    && cx < nx as i64
                    && cy < ny as i64
                    && (z_lo..z_hi).any(|z| grid.get([cx as usize, cy as usize, z]))
            })
        };
        for y in 0..ny {
            for x in 0..nx {
                if blocked(x, y) {
                    free[x + nx * y] = false;
                }
            }
        }
        ColumnMap { nx, ny, free }
    }

    fn is_free(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && x < self.nx as i64
            && y < self.ny as i64
            && self.free[x as usize + self.nx * y as usize]
    }
}

/// Heap entry ordered by smallest f-score, ties broken by smallest
/// linear column index so the search is deterministic.
struct Node {
    f: f64,
    g: f64,
    index: usize,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f && self.index == other.index
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        // reversed: BinaryHeap pops the maximum
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.index.cmp(&self.index))
    }
}

const MOVES: [(i64, i64); 8] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
];

/// Searches the grid's XY lattice for a cylinder-clear route between the
/// columns containing `start` and `goal` (z ignored, positions clamped
/// into the grid footprint). Path points are column centers on the
/// ground plane.
pub fn path_feasibility(
    grid: &OccupancyGrid,
    start: &Vec3,
    goal: &Vec3,
    spec: &CylinderSpec,
) -> Feasibility {
    let g = grid.spec();
    let [nx, ny, _] = g.dims;
    if nx == 0 || ny == 0 {
        return Feasibility::Infeasible {
            reason: InfeasibleReason::StartBlocked,
        };
    }
    let u = g.unit;
    let columns = ColumnMap::build(grid, spec);

    let clamp2 = |p: &Vec3| {
        let c = g.clamped_cell_of_point(&Vec3::new(p.x, p.y, g.origin.z));
        [c[0], c[1]]
    };
    let s = clamp2(start);
    let t = clamp2(goal);
    if !columns.is_free(s[0] as i64, s[1] as i64) {
        return Feasibility::Infeasible {
            reason: InfeasibleReason::StartBlocked,
        };
    }
    if !columns.is_free(t[0] as i64, t[1] as i64) {
        return Feasibility::Infeasible {
            reason: InfeasibleReason::GoalBlocked,
        };
    }

    let lin = |x: usize, y: usize| x + nx * y;
    let heuristic = |x: usize, y: usize| {
        hypot(
            (x as f64 - t[0] as f64) * u,
            (y as f64 - t[1] as f64) * u,
        )
    };

    let mut best = vec![f64::INFINITY; nx * ny];
    let mut came_from = vec![usize::MAX; nx * ny];
    let mut heap = BinaryHeap::new();
    let start_idx = lin(s[0], s[1]);
    best[start_idx] = 0.0;
    heap.push(Node {
        f: heuristic(s[0], s[1]),
        g: 0.0,
        index: start_idx,
    });

    let goal_idx = lin(t[0], t[1]);
    let diag = u * core::f64::consts::SQRT_2;
    while let Some(node) = heap.pop() {
        if node.g > best[node.index] {
            continue; // stale entry
        }
        if node.index == goal_idx {
            let mut cells = Vec::new();
            let mut idx = goal_idx;
            while idx != usize::MAX {
                cells.push(idx);
                idx = came_from[idx];
            }
            cells.reverse();
            let path = cells
                .into_iter()
                .map(|idx| {
                    let (x, y) = (idx % nx, idx / nx);
                    let c = g.cell_center([x, y, 0]);
                    Vec3::new(c.x, c.y, spec.ground)
                })
                .collect();
            return Feasibility::Feasible { path };
        }
        let (x, y) = ((node.index % nx) as i64, (node.index / nx) as i64);
        for (dx, dy) in MOVES {
            let (mx, my) = (x + dx, y + dy);
            if !columns.is_free(mx, my) {
                continue;
            }
            let diagonal = dx != 0 && dy != 0;
            // a diagonal step must not squeeze between two blocked columns
            if diagonal && !(columns.is_free(x + dx, y) && columns.is_free(x, y + dy)) {
                continue;
            }
            let step = if diagonal { diag } else { u };
            let tentative = node.g + step;
            let midx = lin(mx as usize, my as usize);
            if tentative < best[midx] {
                best[midx] = tentative;
                came_from[midx] = node.index;
                heap.push(Node {
                    f: tentative + heuristic(mx as usize, my as usize),
                    g: tentative,
                    index: midx,
                });
            }
        }
    }
    Feasibility::Infeasible {
        reason: InfeasibleReason::NoPath,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::occupancy::GridSpec;
    use crate::rng;
    use alloc::collections::VecDeque;

    fn open_grid(nx: usize, ny: usize, nz: usize) -> OccupancyGrid {
        OccupancyGrid::empty(GridSpec {
            origin: Vec3::new(0.0, 0.0, 0.0),
            unit: 0.08,
            dims: [nx, ny, nz],
        })
    }

    fn fill_box(grid: &mut OccupancyGrid, lo: [usize; 3], hi: [usize; 3]) {
        for z in lo[2]..=hi[2] {
            for y in lo[1]..=hi[1] {
                for x in lo[0]..=hi[0] {
                    grid.set([x, y, z], true);
                }
            }
        }
    }

    /// Independent column check: brute force over every voxel instead of
    /// a precomputed disk.
    fn column_free_oracle(
        grid: &OccupancyGrid,
        spec: &CylinderSpec,
        x: usize,
        y: usize,
    ) -> bool {
        let g = grid.spec();
        let u = g.unit;
        for cell in grid.iter_occupied() {
            let c = g.cell_center(cell);
            if c.z < spec.ground || c.z > spec.ground + spec.height {
                continue;
            }
            let dh = hypot(
                (cell[0] as f64 - x as f64) * u,
                (cell[1] as f64 - y as f64) * u,
            );
            if dh <= spec.radius {
                return false;
            }
        }
        true
    }

    /// Plain reachability with the same movement rules, no costs.
    fn reachable_oracle(
        grid: &OccupancyGrid,
        spec: &CylinderSpec,
        s: [usize; 2],
        t: [usize; 2],
    ) -> bool {
        let [nx, ny, _] = grid.spec().dims;
        let free_at = |x: i64, y: i64| {
            x >= 0
                && y >= 0
                && x < nx as i64
                && y < ny as i64
                && column_free_oracle(grid, spec, x as usize, y as usize)
        };
        if !free_at(s[0] as i64, s[1] as i64) || !free_at(t[0] as i64, t[1] as i64) {
            return false;
        }
        let mut seen = vec![false; nx * ny];
        let mut queue = VecDeque::new();
        seen[s[0] + nx * s[1]] = true;
        queue.push_back((s[0] as i64, s[1] as i64));
        while let Some((x, y)) = queue.pop_front() {
            if [x as usize, y as usize] == [t[0], t[1]] {
                return true;
            }
            for (dx, dy) in MOVES {
                let (mx, my) = (x + dx, y + dy);
                if !free_at(mx, my) {
                    continue;
                }
                if dx != 0 && dy != 0 && !(free_at(x + dx, y) && free_at(x, y + dy)) {
                    continue;
                }
                let idx = mx as usize + nx * my as usize;
                if !seen[idx] {
                    seen[idx] = true;
                    queue.push_back((mx, my));
                }
            }
        }
        false
    }

    fn centers_to_cells(grid: &OccupancyGrid, path: &[Vec3]) -> Vec<[usize; 2]> {
        path.iter()
            .map(|p| {
                let c = grid.spec().clamped_cell_of_point(&Vec3::new(
                    p.x,
                    p.y,
                    grid.spec().origin.z,
                ));
                [c[0], c[1]]
            })
            .collect()
    }

    #[test]
    fn open_floor_is_feasible_and_near_straight() {
        let grid = open_grid(50, 20, 25);
        let spec = CylinderSpec::default();
        let start = Vec3::new(0.4, 0.8, 0.0);
        let goal = Vec3::new(3.6, 0.8, 0.0);
        let Feasibility::Feasible { path } = path_feasibility(&grid, &start, &goal, &spec)
        else {
            panic!("open floor must be feasible");
        };
        // start/goal columns are the path endpoints
        let cells = centers_to_cells(&grid, &path);
        assert_eq!(cells.first(), Some(&[5usize, 10usize]));
        assert_eq!(cells.last(), Some(&[45usize, 10usize]));
        // straight row: 41 columns, each step one cell
        assert_eq!(path.len(), 41);
        for pair in path.windows(2) {
            assert!(((pair[1] - pair[0]).norm() - 0.08).abs() < 1e-12);
        }
        assert!(path.iter().all(|p| p.z == 0.0));
    }

    #[test]
    fn wall_blocks_until_it_has_a_wide_gap() {
        let spec = CylinderSpec::default();
        let start = Vec3::new(0.4, 1.2, 0.0);
        let goal = Vec3::new(3.6, 1.2, 0.0);

        // full-height wall across y at x cell 25
        let mut walled = open_grid(50, 30, 25);
        fill_box(&mut walled, [25, 0, 0], [26, 29, 24]);
        let r = path_feasibility(&walled, &start, &goal, &spec);
        assert_eq!(
            r,
            Feasibility::Infeasible {
                reason: InfeasibleReason::NoPath
            }
        );

        // open a 0.96 m doorway (12 cells), comfortably over the 0.5 m
        // footprint diameter
        let mut doorway = walled.clone();
        for z in 0..25 {
            for y in 9..21 {
                for x in 25..=26 {
                    doorway.set([x, y, z], false);
                }
            }
        }
        let r = path_feasibility(&doorway, &start, &goal, &spec);
        assert!(r.is_feasible(), "doorway run: {r:?}");
        if let Feasibility::Feasible { path } = r {
            // the route threads the gap: near the wall it stays inside it
            for p in &path {
                if (p.x - 2.08).abs() < 0.12 {
                    assert!(p.y > 9.0 * 0.08 && p.y < 21.0 * 0.08, "cuts the wall at {p:?}");
                }
            }
        }
    }

    #[test]
    fn low_ceiling_blocks_upright_but_not_crouched_clearance() {
        // slab over the whole footprint at 1.0..1.2 m
        let mut grid = open_grid(40, 40, 25);
        fill_box(&mut grid, [0, 0, 13], [39, 39, 14]);
        let start = Vec3::new(0.4, 0.4, 0.0);
        let goal = Vec3::new(2.8, 2.8, 0.0);

        let upright = CylinderSpec::default();
        assert_eq!(
            path_feasibility(&grid, &start, &goal, &upright),
            Feasibility::Infeasible {
                reason: InfeasibleReason::StartBlocked
            }
        );

        let crouched = CylinderSpec {
            height: 0.9,
            ..CylinderSpec::default()
        };
        assert!(path_feasibility(&grid, &start, &goal, &crouched).is_feasible());
    }

    #[test]
    fn blocked_endpoints_are_reported_separately() {
        let spec = CylinderSpec::default();
        let start = Vec3::new(0.4, 0.4, 0.0);
        let goal = Vec3::new(2.8, 2.8, 0.0);

        let mut pillar_at_goal = open_grid(40, 40, 25);
        fill_box(&mut pillar_at_goal, [33, 33, 0], [37, 37, 24]);
        assert_eq!(
            path_feasibility(&pillar_at_goal, &start, &goal, &spec),
            Feasibility::Infeasible {
                reason: InfeasibleReason::GoalBlocked
            }
        );

        let mut pillar_at_start = open_grid(40, 40, 25);
        fill_box(&mut pillar_at_start, [3, 3, 0], [7, 7, 24]);
        assert_eq!(
            path_feasibility(&pillar_at_start, &start, &goal, &spec),
            Feasibility::Infeasible {
                reason: InfeasibleReason::StartBlocked
            }
        );
    }

    #[test]
    fn corners_are_never_cut_diagonally() {
        // two pillars touching at a corner: diagonal squeeze forbidden
        let spec = CylinderSpec {
            radius: 0.03, // sub-cell footprint isolates the movement rule
            ..CylinderSpec::default()
        };
        let mut grid = open_grid(9, 9, 25);
        fill_box(&mut grid, [0, 0, 0], [3, 3, 24]); // low-left block
        fill_box(&mut grid, [4, 4, 0], [8, 8, 24]); // high-right block
        let start = Vec3::new(0.52, 0.04, 0.0); // cell (6, 0)
        let goal = Vec3::new(0.04, 0.52, 0.0); // cell (0, 6)
        // only connection would be the diagonal (3,3) <-> (4,4) corner
        let r = path_feasibility(&grid, &start, &goal, &spec);
        assert_eq!(
            r,
            Feasibility::Infeasible {
                reason: InfeasibleReason::NoPath
            }
        );
    }

    #[test]
    fn matches_breadth_first_reachability_on_random_scenes() {
        let mut rng = rng::seeded(402);
        let spec = CylinderSpec {
            radius: 0.25,
            height: 1.2,
            ground: 0.0,
        };
        let mut feasible_seen = 0;
        let mut infeasible_seen = 0;
        for case in 0..60 {
            let nx = 12 + (rng::unit_f64(&mut rng) * 8.0) as usize;
            let ny = 12 + (rng::unit_f64(&mut rng) * 8.0) as usize;
            let nz = 18;
            let mut grid = open_grid(nx, ny, nz);
            let boxes = 1 + (rng::unit_f64(&mut rng) * 4.0) as usize;
            for _ in 0..boxes {
                let x0 = (rng::unit_f64(&mut rng) * (nx - 1) as f64) as usize;
                let y0 = (rng::unit_f64(&mut rng) * (ny - 1) as f64) as usize;
                let w = 1 + (rng::unit_f64(&mut rng) * 6.0) as usize;
                let h = 1 + (rng::unit_f64(&mut rng) * 6.0) as usize;
                fill_box(
                    &mut grid,
                    [x0, y0, 0],
                    [(x0 + w).min(nx - 1), (y0 + h).min(ny - 1), nz - 1],
                );
            }
            let s = [1usize, 1usize];
            let t = [nx - 2, ny - 2];
            let g = grid.spec();
            let start = g.cell_center([s[0], s[1], 0]);
            let goal = g.cell_center([t[0], t[1], 0]);

            let got = path_feasibility(&grid, &start, &goal, &spec);
            let want = reachable_oracle(&grid, &spec, s, t);
            assert_eq!(got.is_feasible(), want, "case {case} disagrees");

            match &got {
                Feasibility::Feasible { path } => {
                    feasible_seen += 1;
                    // every waypoint passes the independent column check;
                    // steps are single-cell, corner cuts forbidden
                    let cells = centers_to_cells(&grid, path);
                    assert_eq!(cells[0], s);
                    assert_eq!(*cells.last().unwrap(), t);
                    for pair in cells.windows(2) {
                        let dx = pair[1][0] as i64 - pair[0][0] as i64;
                        let dy = pair[1][1] as i64 - pair[0][1] as i64;
                        assert!(dx.abs() <= 1 && dy.abs() <= 1 && (dx, dy) != (0, 0));
                        if dx != 0 && dy != 0 {
                            assert!(column_free_oracle(
                                &grid,
                                &spec,
                                (pair[0][0] as i64 + dx) as usize,
                                pair[0][1],
                            ));
                            assert!(column_free_oracle(
                                &grid,
                                &spec,
                                pair[0][0],
                                (pair[0][1] as i64 + dy) as usize,
                            ));
                        }
                    }
                    for c in &cells {
                        assert!(column_free_oracle(&grid, &spec, c[0], c[1]));
                    }
                    // same query again: identical path (deterministic ties)
                    let again = path_feasibility(&grid, &start, &goal, &spec);
                    assert_eq!(got, again);
                }
                Feasibility::Infeasible { .. } => infeasible_seen += 1,
            }
        }
        // the corpus must exercise both outcomes to mean anything
        assert!(feasible_seen >= 5, "only {feasible_seen} feasible cases");
        assert!(infeasible_seen >= 5, "only {infeasible_seen} infeasible cases");
    }
}
