use alloc::vec::Vec;

use crate::math::{ceil, cos, sin, Aabb, Vec3};
use crate::motion::kinematics::FkResult;
use crate::motion::skeleton::Skeleton;

/// A capsule: the set of points within `radius` of segment `a`-`b`.
/// A zero-length segment degenerates to a sphere, which is fine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capsule {
    pub a: Vec3,
    pub b: Vec3,
    pub radius: f64,
}

impl Capsule {
    pub fn distance_squared(&self, p: &Vec3) -> f64 {
        point_segment_distance_squared(p, &self.a, &self.b)
    }

    pub fn contains(&self, p: &Vec3) -> bool {
        self.distance_squared(p) <= self.radius * self.radius
    }

    pub fn aabb(&self) -> Aabb {
        let r = Vec3::repeat(self.radius);
        Aabb::new(self.a.inf(&self.b) - r, self.a.sup(&self.b) + r)
    }

    pub fn length(&self) -> f64 {
        (self.b - self.a).norm()
    }
}

fn point_segment_distance_squared(p: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 < 1e-18 {
        return (p - a).norm_squared();
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm_squared()
}

/// The posed volumetric body: one capsule per bone (segment from parent
/// joint to child joint, with the child bone's radius).
#[derive(Debug, Clone, PartialEq)]
pub struct CapsuleBody {
    capsules: Vec<Capsule>,
}

impl CapsuleBody {
    pub fn from_fk(skeleton: &Skeleton, fk: &FkResult) -> CapsuleBody {
        let mut capsules = Vec::with_capacity(skeleton.joint_count() - 1);
        for child in 1..skeleton.joint_count() {
            let parent = skeleton.parent(child);
            capsules.push(Capsule {
                a: fk.positions[parent],
                b: fk.positions[child],
                radius: skeleton.bone_radius(child),
            });
        }
        CapsuleBody { capsules }
    }

    pub fn capsules(&self) -> &[Capsule] {
        &self.capsules
    }

    pub fn contains(&self, p: &Vec3) -> bool {
        self.capsules.iter().any(|c| c.contains(p))
    }

    pub fn aabb(&self) -> Aabb {
        let mut out = Aabb::empty();
        for c in &self.capsules {
            out.union(&c.aabb());
        }
        out
    }

    /// Walks a deterministic covering of the body surface with sample
    /// spacing at most `spacing` and feeds every point to `f`.
    ///
    /// Per capsule: rings along the cylindrical part plus polar rings on
    /// both hemispherical caps. Points where capsules overlap are visited
    /// once per capsule; callers that need sets must deduplicate. The
    /// traversal order is fixed (capsule, then ring, then angle), so the
    /// stream of points is reproducible bit for bit.
    pub fn for_each_surface_sample(&self, spacing: f64, mut f: impl FnMut(Vec3)) {
        assert!(spacing > 0.0, "sample spacing must be positive");
        for c in &self.capsules {
            sample_capsule_surface(c, spacing, &mut f);
        }
    }

    /// Collects [`CapsuleBody::for_each_surface_sample`] into a vector.
    pub fn surface_samples(&self, spacing: f64) -> Vec<Vec3> {
        let mut out = Vec::new();
        self.for_each_surface_sample(spacing, |p| out.push(p));
        out
    }
}

fn orthonormal_basis(n: &Vec3) -> (Vec3, Vec3) {
    let pick = if crate::math::fabs(n.x) < 0.9 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        Vec3::new(0.0, 1.0, 0.0)
    };
    let u = n.cross(&pick).normalize();
    let v = n.cross(&u);
    (u, v)
}

fn sample_capsule_surface(c: &Capsule, spacing: f64, f: &mut impl FnMut(Vec3)) {
    let axis = c.b - c.a;
    let len = axis.norm();
    let n = if len < 1e-12 {
        Vec3::new(0.0, 0.0, 1.0)
    } else {
        axis / len
    };
    let (u, v) = orthonormal_basis(&n);
    let r = c.radius;
    let two_pi = 2.0 * core::f64::consts::PI;

    let ring = |center: Vec3, ring_r: f64, f: &mut dyn FnMut(Vec3)| {
        if ring_r < 1e-12 {
            f(center);
            return;
        }
        let steps = (ceil(two_pi * ring_r / spacing) as usize).max(3);
        for i in 0..steps {
            let ang = two_pi * i as f64 / steps as f64;
            f(center + u * (ring_r * cos(ang)) + v * (ring_r * sin(ang)));
        }
    };

    // cylindrical part
    if len >= 1e-12 {
        let slices = (ceil(len / spacing) as usize).max(1);
        for i in 0..=slices {
            let center = c.a + n * (len * i as f64 / slices as f64);
            ring(center, r, f);
        }
    } else {
        ring(c.a, r, f);
    }

    // hemispherical caps: polar rings from the equator (exclusive) to each pole
    let arc = core::f64::consts::FRAC_PI_2 * r;
    let polar_steps = (ceil(arc / spacing) as usize).max(1);
    for (end, dir) in [(c.a, -1.0), (c.b, 1.0)] {
        for i in 1..=polar_steps {
            let phi = core::f64::consts::FRAC_PI_2 * i as f64 / polar_steps as f64;
            let ring_r = r * cos(phi);
            let center = end + n * (dir * r * sin(phi));
            ring(center, ring_r, f);
        }
    }
}
