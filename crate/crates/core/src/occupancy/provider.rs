use alloc::boxed::Box;
use alloc::vec::Vec;

use super::grid::{GridSpec, OccupancyGrid};
use crate::math::{cos, floor, sin, Aabb, Vec3};

/// Lattice used to give provider queries a voxel identity (distinct-voxel
/// penetration counts need stable cell ids even for analytic scenes).
/// Cells are `origin + unit * [i, i+1)` per axis over the whole space,
/// indices may be negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantization {
    pub origin: Vec3,
    pub unit: f64,
}

impl Quantization {
    pub fn cell_of(&self, p: &Vec3) -> [i64; 3] {
        [
            floor((p.x - self.origin.x) / self.unit) as i64,
            floor((p.y - self.origin.y) / self.unit) as i64,
            floor((p.z - self.origin.z) / self.unit) as i64,
        ]
    }

    pub fn cell_center(&self, cell: [i64; 3]) -> Vec3 {
        self.origin
            + Vec3::new(
                (cell[0] as f64 + 0.5) * self.unit,
                (cell[1] as f64 + 0.5) * self.unit,
                (cell[2] as f64 + 0.5) * self.unit,
            )
    }
}

/// A scene the controller can query for occupancy at any point and time.
///
/// Implementations must be pure functions of `(point, time)` so that
/// concurrent readers and replays see identical worlds.
pub trait OccupancyProvider: Send + Sync {
    fn is_occupied(&self, p: &Vec3, time: f64) -> bool;

    /// Cell lattice for counting distinct penetrated voxels.
    fn quantization(&self) -> Quantization {
        Quantization {
            origin: Vec3::zeros(),
            unit: 0.08,
        }
    }

    /// Freezes the provider at `time` into a grid by sampling cell
    /// centers.
    fn snapshot(&self, time: f64, spec: &GridSpec) -> OccupancyGrid {
        let mut g = OccupancyGrid::empty(*spec);
        for idx in 0..spec.cell_count() {
            let c = spec.cell_of_linear(idx);
            if self.is_occupied(&spec.cell_center(c), time) {
                g.set_linear(idx, true);
            }
        }
        g
    }
}

/// Obstacle-free world.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmptyScene;

impl OccupancyProvider for EmptyScene {
    fn is_occupied(&self, _p: &Vec3, _time: f64) -> bool {
        false
    }
}

/// Static scene backed by a dense grid; space outside the grid is free.
#[derive(Debug, Clone)]
pub struct StaticGridScene {
    grid: OccupancyGrid,
}

impl StaticGridScene {
    pub fn new(grid: OccupancyGrid) -> Self {
        StaticGridScene { grid }
    }

    pub fn grid(&self) -> &OccupancyGrid {
        &self.grid
    }
}

impl OccupancyProvider for StaticGridScene {
    fn is_occupied(&self, p: &Vec3, _time: f64) -> bool {
        self.grid.is_point_occupied(p)
    }

    fn quantization(&self) -> Quantization {
        Quantization {
            origin: self.grid.spec().origin,
            unit: self.grid.spec().unit,
        }
    }
}

/// Everything at or below a height is occupied (a ground slab).
#[derive(Debug, Clone, Copy)]
pub struct HalfSpaceFloor {
    pub level: f64,
}

impl OccupancyProvider for HalfSpaceFloor {
    fn is_occupied(&self, p: &Vec3, _time: f64) -> bool {
        p.z <= self.level
    }
}

/// Union of axis-aligned boxes (walls, corridors, furniture blocks).
#[derive(Debug, Clone)]
pub struct BoxScene {
    boxes: Vec<Aabb>,
}

impl BoxScene {
    pub fn new(boxes: Vec<Aabb>) -> Self {
        BoxScene { boxes }
    }

    pub fn boxes(&self) -> &[Aabb] {
        &self.boxes
    }
}

impl OccupancyProvider for BoxScene {
    fn is_occupied(&self, p: &Vec3, _time: f64) -> bool {
        self.boxes.iter().any(|b| b.contains(p))
    }
}

/// A revolving door: flat blades spinning about a vertical axis at
/// constant rate. Each blade is a slab reaching from the axis out to the
/// door radius.
#[derive(Debug, Clone, Copy)]
pub struct RevolvingDoorScene {
    /// Ground point of the axis.
    pub center: Vec3,
    /// Blade length from the axis, meters.
    pub radius: f64,
    /// Blade slab thickness, meters.
    pub thickness: f64,
    /// Blade height above `center.z`, meters.
    pub height: f64,
    /// Spin rate, radians per second (positive is counterclockwise seen
    /// from above).
    pub omega: f64,
    /// Blade 0 angle at time 0, radians.
    pub phase: f64,
    pub blades: usize,
}

impl RevolvingDoorScene {
    /// Door-lobby door: three 1.5 m blades, 35 cm thick, turning at 15
    /// degrees per second.
    pub fn standard() -> Self {
        RevolvingDoorScene {
            center: Vec3::zeros(),
            radius: 1.5,
            thickness: 0.35,
            height: 2.2,
            omega: 15.0 * core::f64::consts::PI / 180.0,
            phase: 0.0,
            blades: 3,
        }
    }

    /// Angle of blade `i` at `time`.
    pub fn blade_angle(&self, i: usize, time: f64) -> f64 {
        self.phase + self.omega * time
            + 2.0 * core::f64::consts::PI * i as f64 / self.blades as f64
    }
}

impl OccupancyProvider for RevolvingDoorScene {
    fn is_occupied(&self, p: &Vec3, time: f64) -> bool {
        let d = p - self.center;
        if d.z < 0.0 || d.z > self.height {
            return false;
        }
        let half = self.thickness / 2.0;
        for i in 0..self.blades {
            let ang = self.blade_angle(i, time);
            let (s, c) = (sin(ang), cos(ang));
            let along = c * d.x + s * d.y;
            let across = -s * d.x + c * d.y;
            if (0.0..=self.radius).contains(&along) && crate::math::fabs(across) <= half {
                return true;
            }
        }
        false
    }
}

/// Scene that switches from one provider to another at a fixed time
/// (models an abrupt world change mid-episode).
pub struct ScheduledSwapScene {
    before: Box<dyn OccupancyProvider>,
    after: Box<dyn OccupancyProvider>,
    swap_time: f64,
}

impl ScheduledSwapScene {
    pub fn new(
        before: Box<dyn OccupancyProvider>,
        after: Box<dyn OccupancyProvider>,
        swap_time: f64,
    ) -> Self {
        ScheduledSwapScene {
            before,
            after,
            swap_time,
        }
    }

    pub fn swap_time(&self) -> f64 {
        self.swap_time
    }
}

impl OccupancyProvider for ScheduledSwapScene {
    fn is_occupied(&self, p: &Vec3, time: f64) -> bool {
        if time < self.swap_time {
            self.before.is_occupied(p, time)
        } else {
            self.after.is_occupied(p, time)
        }
    }

    fn quantization(&self) -> Quantization {
        self.before.quantization()
    }
}

/// Test helper: the rotation-equivariant twin of a scene, occupied
/// wherever `inner` is occupied after undoing a yaw about the origin.
#[cfg(test)]
pub struct YawedScene<P> {
    pub inner: P,
    pub yaw: f64,
}

#[cfg(test)]
impl<P: OccupancyProvider> OccupancyProvider for YawedScene<P> {
    fn is_occupied(&self, p: &Vec3, time: f64) -> bool {
        let (s, c) = (sin(-self.yaw), cos(-self.yaw));
        let q = Vec3::new(c * p.x - s * p.y, s * p.x + c * p.y, p.z);
        self.inner.is_occupied(&q, time)
    }

    fn quantization(&self) -> Quantization {
        self.inner.quantization()
    }
}
