use alloc::vec::Vec;

use super::grid::{GridSpec, OccupancyGrid};

/// Dense signed distance grid over the same cell layout as
/// [`OccupancyGrid`]: one f32 per cell, linear order, negative inside
/// geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct SdfGrid {
    spec: GridSpec,
    values: Vec<f32>,
}

impl SdfGrid {
    pub fn new(spec: GridSpec, values: Vec<f32>) -> Option<SdfGrid> {
        if values.len() != spec.cell_count() {
            return None;
        }
        Some(SdfGrid { spec, values })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn get(&self, cell: [usize; 3]) -> f32 {
        self.values[self.spec.linear(cell)]
    }
}

/// Thresholds a signed distance grid into occupancy: cells with
/// `value <= threshold` are occupied. The usual threshold is 0 (the
/// surface and everything behind it).
pub fn sdf_to_occupancy(sdf: &SdfGrid, threshold: f32) -> OccupancyGrid {
    let mut grid = OccupancyGrid::empty(*sdf.spec());
    for (idx, &v) in sdf.values.iter().enumerate() {
        if v <= threshold {
            grid.set_linear(idx, true);
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::Vec3;
    use alloc::vec;

    #[test]
    fn thresholding_selects_nonpositive_cells() {
        let spec = GridSpec {
            origin: Vec3::zeros(),
            unit: 1.0,
            dims: [2, 2, 1],
        };
        let sdf = SdfGrid::new(spec, vec![-1.0, 0.0, 0.5, 2.0]).unwrap();
        let g = sdf_to_occupancy(&sdf, 0.0);
        assert!(g.get_linear(0));
        assert!(g.get_linear(1));
        assert!(!g.get_linear(2));
        assert!(!g.get_linear(3));

        // a looser threshold only adds cells
        let loose = sdf_to_occupancy(&sdf, 0.5);
        for i in 0..4 {
            assert!(!g.get_linear(i) || loose.get_linear(i));
        }
        assert!(loose.get_linear(2));
    }

    #[test]
    fn wrong_value_count_is_rejected() {
        let spec = GridSpec {
            origin: Vec3::zeros(),
            unit: 1.0,
            dims: [2, 2, 1],
        };
        assert!(SdfGrid::new(spec, vec![0.0; 3]).is_none());
    }
}
