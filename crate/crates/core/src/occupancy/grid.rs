use alloc::vec;
use alloc::vec::Vec;

use crate::math::{floor, Aabb, Vec3};

/// Placement of a dense voxel grid in the world. Voxel `(i, j, k)` spans
/// the half-open cube `origin + unit * [i, i+1) x [j, j+1) x [k, k+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub origin: Vec3,
    pub unit: f64,
    pub dims: [usize; 3],
}

impl GridSpec {
    pub fn cell_count(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    /// Linear index with x fastest: `x + nx * (y + ny * z)`.
    pub fn linear(&self, cell: [usize; 3]) -> usize {
        cell[0] + self.dims[0] * (cell[1] + self.dims[1] * cell[2])
    }

    pub fn cell_of_linear(&self, idx: usize) -> [usize; 3] {
        let x = idx % self.dims[0];
        let rest = idx / self.dims[0];
        [x, rest % self.dims[1], rest / self.dims[1]]
    }

    pub fn cell_center(&self, cell: [usize; 3]) -> Vec3 {
        self.origin
            + Vec3::new(
                (cell[0] as f64 + 0.5) * self.unit,
                (cell[1] as f64 + 0.5) * self.unit,
                (cell[2] as f64 + 0.5) * self.unit,
            )
    }

    /// Cell containing `p`, or `None` outside the grid. Points exactly on
    /// the max face are outside (cells are half-open).
    pub fn cell_of_point(&self, p: &Vec3) -> Option<[usize; 3]> {
        let mut cell = [0usize; 3];
        for a in 0..3 {
            let rel = (p[a] - self.origin[a]) / self.unit;
            let idx = floor(rel);
            if idx < 0.0 || idx >= self.dims[a] as f64 {
                return None;
            }
            cell[a] = idx as usize;
        }
        Some(cell)
    }

    /// Nearest in-range cell to `p` (componentwise clamp).
    pub fn clamped_cell_of_point(&self, p: &Vec3) -> [usize; 3] {
        let mut cell = [0usize; 3];
        for a in 0..3 {
            let rel = floor((p[a] - self.origin[a]) / self.unit);
            let hi = (self.dims[a] - 1) as f64;
            cell[a] = rel.clamp(0.0, hi) as usize;
        }
        cell
    }

    pub fn world_aabb(&self) -> Aabb {
        let ext = Vec3::new(
            self.dims[0] as f64 * self.unit,
            self.dims[1] as f64 * self.unit,
            self.dims[2] as f64 * self.unit,
        );
        Aabb::new(self.origin, self.origin + ext)
    }
}

/// Dense occupancy bit grid. Bits are packed LSB-first in linear-index
/// order, which is also the on-disk layout of the binary grid format.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    spec: GridSpec,
    bits: Vec<u8>,
}

impl OccupancyGrid {
    pub fn empty(spec: GridSpec) -> OccupancyGrid {
        let n = spec.cell_count();
        OccupancyGrid {
            spec,
            bits: vec![0u8; n.div_ceil(8)],
        }
    }

    /// Rebuilds a grid from its packed bytes. Trailing bits past
    /// `cell_count` must be zero; byte length must match exactly.
    pub fn from_bytes(spec: GridSpec, bits: Vec<u8>) -> Option<OccupancyGrid> {
        let n = spec.cell_count();
        if bits.len() != n.div_ceil(8) {
            return None;
        }
        let tail_bits = bits.len() * 8 - n;
        if tail_bits > 0 {
            let mask = !(0xffu8 >> tail_bits);
            if bits.last().copied().unwrap_or(0) & mask != 0 {
                return None;
            }
        }
        Some(OccupancyGrid { spec, bits })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bits
    }

    pub fn get_linear(&self, idx: usize) -> bool {
        self.bits[idx / 8] & (1 << (idx % 8)) != 0
    }

    pub fn set_linear(&mut self, idx: usize, value: bool) {
        let mask = 1u8 << (idx % 8);
        if value {
            self.bits[idx / 8] |= mask;
        } else {
            self.bits[idx / 8] &= !mask;
        }
    }

    pub fn get(&self, cell: [usize; 3]) -> bool {
        self.get_linear(self.spec.linear(cell))
    }

    pub fn set(&mut self, cell: [usize; 3], value: bool) {
        self.set_linear(self.spec.linear(cell), value)
    }

    /// Occupancy at a world point: the bit of the containing voxel, false
    /// outside the grid.
    pub fn is_point_occupied(&self, p: &Vec3) -> bool {
        match self.spec.cell_of_point(p) {
            Some(cell) => self.get(cell),
            None => false,
        }
    }

    pub fn count_occupied(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn occupied_fraction(&self) -> f64 {
        if self.spec.cell_count() == 0 {
            return 0.0;
        }
        self.count_occupied() as f64 / self.spec.cell_count() as f64
    }

    /// Exact complement over the same spec: every bit flips, so
    /// `complement(complement(g)) == g` and the occupied counts of a grid
    /// and its complement partition the cell count.
    pub fn complement(&self) -> OccupancyGrid {
        let mut out = OccupancyGrid {
            spec: self.spec,
            bits: self.bits.iter().map(|b| !b).collect(),
        };
        let n = self.spec.cell_count();
        let tail_bits = out.bits.len() * 8 - n;
        if tail_bits > 0 {
            if let Some(last) = out.bits.last_mut() {
                *last &= 0xffu8 >> tail_bits;
            }
        }
        out
    }

    /// Cells set in `self` in increasing linear order.
    pub fn iter_occupied(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let spec = self.spec;
        (0..spec.cell_count()).filter_map(move |idx| {
            if self.get_linear(idx) {
                Some(spec.cell_of_linear(idx))
            } else {
                None
            }
        })
    }

    /// World centers of occupied cells, linear order.
    pub fn occupied_centers(&self) -> Vec<Vec3> {
        self.iter_occupied()
            .map(|c| self.spec.cell_center(c))
            .collect()
    }
}
