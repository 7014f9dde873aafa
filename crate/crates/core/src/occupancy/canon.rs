use alloc::vec;
use alloc::vec::Vec;

use super::provider::OccupancyProvider;
use crate::math::Vec3;
use crate::motion::CanonicalFrame;

/// How each cell of the canonical cube decides it is occupied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Query the cell center only.
    Center,
    /// Query the center and all 8 cell corners; any hit marks the cell.
    /// Produces a superset of `Center` and catches thin geometry.
    Conservative,
}

/// Geometry of the body-centric occupancy cube.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalOccupancyConfig {
    /// Cells per edge.
    pub side: usize,
    /// Cell edge length, meters.
    pub unit: f64,
    pub mode: SampleMode,
}

impl Default for CanonicalOccupancyConfig {
    fn default() -> Self {
        // 25^3 cells of 8 cm: a 2 m cube, enough to cover the reachable
        // surroundings of one control step
        CanonicalOccupancyConfig {
            side: 25,
            unit: 0.08,
            mode: SampleMode::Center,
        }
    }
}

impl CanonicalOccupancyConfig {
    /// Cube center in canonical coordinates: shifted a quarter of the
    /// cube edge ahead of the body (facing is +X) at root height, so
    /// three quarters of the cube looks forward.
    pub fn center(&self, root_height: f64) -> Vec3 {
        Vec3::new(self.side as f64 * self.unit / 4.0, 0.0, root_height)
    }

    pub fn cell_count(&self) -> usize {
        self.side * self.side * self.side
    }

    pub fn linear(&self, cell: [usize; 3]) -> usize {
        cell[0] + self.side * (cell[1] + self.side * cell[2])
    }

    /// Canonical-frame center of cell `(i, j, k)`; the cube is centered
    /// index-wise, so cell `(side-1)/2` sits on the cube center for odd
    /// sides.
    pub fn cell_center(&self, cell: [usize; 3], root_height: f64) -> Vec3 {
        let half = (self.side as f64 - 1.0) / 2.0;
        self.center(root_height)
            + Vec3::new(
                (cell[0] as f64 - half) * self.unit,
                (cell[1] as f64 - half) * self.unit,
                (cell[2] as f64 - half) * self.unit,
            )
    }
}

/// The body-centric occupancy snapshot fed to the controller and the
/// field regulator: one bit per cell of a canonical cube riding the
/// body's facing frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalOccupancy {
    cfg: CanonicalOccupancyConfig,
    frame: CanonicalFrame,
    root_height: f64,
    bits: Vec<u8>,
}

/// Samples a provider into the canonical cube of the given body frame.
///
/// Because every queried point is first mapped through the frame, two
/// worlds that differ by a rigid ground-plane motion produce bit-identical
/// cubes when the frames differ by the same motion.
pub fn sample_canonical_occupancy(
    provider: &dyn OccupancyProvider,
    time: f64,
    frame: &CanonicalFrame,
    root_height: f64,
    cfg: &CanonicalOccupancyConfig,
) -> CanonicalOccupancy {
    let n = cfg.cell_count();
    let mut bits = vec![0u8; n.div_ceil(8)];
    let h = cfg.unit / 2.0;

    for k in 0..cfg.side {
        for j in 0..cfg.side {
            for i in 0..cfg.side {
                let c = cfg.cell_center([i, j, k], root_height);
                let occupied = match cfg.mode {
                    SampleMode::Center => {
                        provider.is_occupied(&frame.to_world_point(&c), time)
                    }
                    SampleMode::Conservative => {
                        let mut hit =
                            provider.is_occupied(&frame.to_world_point(&c), time);
                        if !hit {
                            'corners: for dx in [-h, h] {
                                for dy in [-h, h] {
                                    for dz in [-h, h] {
                                        let q = c + Vec3::new(dx, dy, dz);
                                        if provider
                                            .is_occupied(&frame.to_world_point(&q), time)
                                        {
                                            hit = true;
                                            break 'corners;
                                        }
                                    }
                                }
                            }
                        }
                        hit
                    }
                };
                if occupied {
                    let idx = cfg.linear([i, j, k]);
                    bits[idx / 8] |= 1 << (idx % 8);
                }
            }
        }
    }

    CanonicalOccupancy {
        cfg: *cfg,
        frame: *frame,
        root_height,
        bits,
    }
}

impl CanonicalOccupancy {
    pub fn config(&self) -> &CanonicalOccupancyConfig {
        &self.cfg
    }

    pub fn frame(&self) -> &CanonicalFrame {
        &self.frame
    }

    pub fn root_height(&self) -> f64 {
        self.root_height
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, cell: [usize; 3]) -> bool {
        let idx = self.cfg.linear(cell);
        self.bits[idx / 8] & (1 << (idx % 8)) != 0
    }

    pub fn count_occupied(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    /// Canonical-frame centers of occupied cells, linear order. This is
    /// the point set the field regulator repels from.
    pub fn occupied_centers_canonical(&self) -> Vec<Vec3> {
        let mut out = Vec::new();
        for k in 0..self.cfg.side {
            for j in 0..self.cfg.side {
                for i in 0..self.cfg.side {
                    if self.get([i, j, k]) {
                        out.push(self.cfg.cell_center([i, j, k], self.root_height));
                    }
                }
            }
        }
        out
    }

    pub fn occupied_centers_world(&self) -> Vec<Vec3> {
        self.occupied_centers_canonical()
            .iter()
            .map(|c| self.frame.to_world_point(c))
            .collect()
    }

    /// FNV-1a over the packed bits; a cheap fingerprint for episode logs.
    pub fn content_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &b in &self.bits {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}
