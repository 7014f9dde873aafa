//! Seeded synthetic motion generators.
//!
//! Stand-ins for captured motion: a straight walk, a turning walk, a
//! sit-and-rise arc, a low crawl and a standing reach, all on the
//! default humanoid at 30 fps. A seed fully determines the output; the
//! per-seed variation (speed, stride, depth) is what makes a corpus out
//! of one generator.
//!
//! The walk generator has a sway mode (`sway > 0`) that advances slowly
//! while sweeping the whole body left and right in a triangular wave.
//! The swept volume of such a motion is a corridor that is wide at every
//! height, which is what an upright-agent feasibility probe needs; a
//! plain walk carves a person-shaped tube instead. Sway walks back out
//! half a meter behind their start and overshoot their end before
//! returning, so the columns around both endpoints are fully swept.

use occu_core::math::{matrix_to_rot6, rot_z, Mat3, Rot6};
use occu_core::motion::forward_kinematics;
use occu_core::rng::{range_f64, seeded, Rng};
use occu_core::{MotionSequence, Pose, Skeleton, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotionKind {
    Walk,
    Turn,
    Sit,
    Crawl,
    Reach,
}

impl MotionKind {
    pub fn parse(name: &str) -> Option<MotionKind> {
        Some(match name {
            "walk" => MotionKind::Walk,
            "turn" => MotionKind::Turn,
            "sit" => MotionKind::Sit,
            "crawl" => MotionKind::Crawl,
            "reach" => MotionKind::Reach,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            MotionKind::Walk => "walk",
            MotionKind::Turn => "turn",
            MotionKind::Sit => "sit",
            MotionKind::Crawl => "crawl",
            MotionKind::Reach => "reach",
        }
    }

    pub const ALL: [MotionKind; 5] = [
        MotionKind::Walk,
        MotionKind::Turn,
        MotionKind::Sit,
        MotionKind::Crawl,
        MotionKind::Reach,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub seed: u64,
    pub fps: f64,
    pub duration: f64,
    /// Forward speed override, m/s; `None` draws one from the seed.
    pub speed: Option<f64>,
    /// Lateral sway amplitude for walks, meters. 0 disables sway mode.
    pub sway: f64,
    /// Sway cycle length, seconds.
    pub sway_period: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            fps: 30.0,
            duration: 4.0,
            speed: None,
            sway: 0.0,
            sway_period: 1.5,
        }
    }
}

pub fn generate(kind: MotionKind, params: &GenParams) -> MotionSequence {
    // salt the stream per kind so walk seed 3 and sit seed 3 differ
    let salt: u64 = match kind {
        MotionKind::Walk => 0x77a1,
        MotionKind::Turn => 0x712d,
        MotionKind::Sit => 0x517,
        MotionKind::Crawl => 0xc4a1,
        MotionKind::Reach => 0x4eac,
    };
    let mut rng = seeded(params.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt);
    match kind {
        MotionKind::Walk => walk(params, &mut rng),
        MotionKind::Turn => turn(params, &mut rng),
        MotionKind::Sit => sit(params, &mut rng),
        MotionKind::Crawl => crawl(params, &mut rng),
        MotionKind::Reach => reach(params, &mut rng),
    }
}

fn rot_y(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    Mat3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

fn r6(m: &Mat3) -> Rot6 {
    matrix_to_rot6(m)
}

/// Triangular wave: 0 at t = 0, peaks +-1, period 1.
fn tri(t: f64) -> f64 {
    let s = t.rem_euclid(1.0);
    if s < 0.25 {
        4.0 * s
    } else if s < 0.75 {
        2.0 - 4.0 * s
    } else {
        4.0 * s - 4.0
    }
}

/// Smooth 0 -> 1 ramp.
fn ease(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * (3.0 - 2.0 * x)
}

fn frame_count(params: &GenParams) -> usize {
    ((params.duration * params.fps).round() as usize).max(2)
}

/// Leg and arm swing for a gait cycle at phase `phi` (radians).
fn apply_gait(pose: &mut Pose, skeleton: &Skeleton, phi: f64, amp: f64) {
    let lm = skeleton.landmarks();
    let (l_hip, r_hip) = (lm.left_hip, lm.right_hip);
    let swing = amp * phi.sin();
    pose.joint_rot[l_hip] = r6(&rot_y(swing));
    pose.joint_rot[r_hip] = r6(&rot_y(-swing));
    // the recovering leg flexes its knee; the planted one stays long
    let bend = |p: f64| 0.9 * amp * (p.sin()).max(0.0);
    pose.joint_rot[l_hip + 1] = r6(&rot_y(bend(phi + 2.2)));
    pose.joint_rot[r_hip + 1] = r6(&rot_y(bend(phi + 2.2 + core::f64::consts::PI)));
    // arms counter-swing
    pose.joint_rot[lm.left_shoulder] = r6(&rot_z(-0.6 * swing));
    pose.joint_rot[lm.right_shoulder] = r6(&rot_z(-0.6 * swing));
}

fn walk(params: &GenParams, rng: &mut Rng) -> MotionSequence {
    let skeleton = Skeleton::default_humanoid();
    let n = frame_count(params);
    let stride_hz = range_f64(rng, 1.5, 1.9);
    let bob = range_f64(rng, 0.015, 0.03);
    if params.sway > 0.0 {
        return sway_walk(params, &skeleton, n, stride_hz);
    }
    let speed = params.speed.unwrap_or_else(|| range_f64(rng, 0.9, 1.3));
    let gait_amp = range_f64(rng, 0.3, 0.42);
    let frames = (0..n)
        .map(|i| {
            let t = i as f64 / params.fps;
            let phi = 2.0 * core::f64::consts::PI * stride_hz * t;
            let z = 0.9 - bob * phi.sin().powi(2);
            let mut pose = Pose::rest(&skeleton, Vec3::new(speed * t, 0.0, z));
            apply_gait(&mut pose, &skeleton, phi, gait_amp);
            pose
        })
        .collect();
    MotionSequence::new(skeleton, params.fps, frames).expect("generated walk is valid")
}

/// Slow advance with a full-body triangular sway. The root runs
/// back-out, sweep, return segments so that every column between start
/// and end is crossed at full amplitude.
fn sway_walk(
    params: &GenParams,
    skeleton: &Skeleton,
    n: usize,
    stride_hz: f64,
) -> MotionSequence {
    let speed = params.speed.unwrap_or(0.12);
    let amp = params.sway;
    let period = params.sway_period;
    let back = 0.5;
    let t_total = (n - 1) as f64 / params.fps;
    let t1 = back / speed; // 0 -> -back
    let t3 = back / speed; // overshoot -> end
    let sweep = (t_total - t1 - t3).max(0.0);
    let x_of = |t: f64| -> f64 {
        if t < t1 {
            -speed * t
        } else if t < t1 + sweep {
            -back + speed * (t - t1)
        } else {
            -back + speed * sweep - speed * (t - t1 - sweep)
        }
    };
    let frames = (0..n)
        .map(|i| {
            let t = i as f64 / params.fps;
            // fade the sway in and out so the path starts and ends on
            // the center line
            let fade = ease(t / 1.0).min(ease((t_total - t) / 1.0));
            let y = amp * fade * tri(t / period);
            let phi = 2.0 * core::f64::consts::PI * stride_hz * t;
            let mut pose = Pose::rest(skeleton, Vec3::new(x_of(t), y, 0.9));
            apply_gait(&mut pose, skeleton, phi, 0.22);
            pose
        })
        .collect();
    MotionSequence::new(skeleton.clone(), params.fps, frames).expect("generated sway walk is valid")
}

fn turn(params: &GenParams, rng: &mut Rng) -> MotionSequence {
    let skeleton = Skeleton::default_humanoid();
    let n = frame_count(params);
    let speed = params.speed.unwrap_or_else(|| range_f64(rng, 0.8, 1.1));
    let omega = range_f64(rng, 0.45, 0.8)
        * if range_f64(rng, -1.0, 1.0) < 0.0 { -1.0 } else { 1.0 };
    let stride_hz = range_f64(rng, 1.5, 1.9);
    let gait_amp = range_f64(rng, 0.3, 0.4);
    let radius = speed / omega;
    let frames = (0..n)
        .map(|i| {
            let t = i as f64 / params.fps;
            let heading = omega * t;
            // exact circle through the origin with initial heading +X
            let pos = Vec3::new(
                radius * heading.sin(),
                radius * (1.0 - heading.cos()),
                0.9,
            );
            let phi = 2.0 * core::f64::consts::PI * stride_hz * t;
            let mut pose = Pose::rest(&skeleton, pos);
            pose.root_rot = r6(&rot_z(heading));
            apply_gait(&mut pose, &skeleton, phi, gait_amp);
            pose
        })
        .collect();
    MotionSequence::new(skeleton, params.fps, frames).expect("generated turn is valid")
}

fn sit(params: &GenParams, rng: &mut Rng) -> MotionSequence {
    let skeleton = Skeleton::default_humanoid();
    let n = frame_count(params);
    let depth = range_f64(rng, 0.38, 0.5);
    let lean = range_f64(rng, 0.25, 0.4);
    let t_total = (n - 1) as f64 / params.fps;
    let lm = *skeleton.landmarks();
    let frames = (0..n)
        .map(|i| {
            let t = i as f64 / params.fps;
            // sit-and-rise arc: down over the first half, back up over
            // the second
            let u = t / t_total;
            let s = ease((1.0 - (2.0 * u - 1.0).abs()) * 1.6);
            let z = 0.9 - depth * s;
            let mut pose = Pose::rest(&skeleton, Vec3::new(0.05 * s, 0.0, z));
            let hip = 1.5 * s;
            let knee = 1.6 * s;
            pose.joint_rot[lm.left_hip] = r6(&rot_y(-hip));
            pose.joint_rot[lm.right_hip] = r6(&rot_y(-hip));
            pose.joint_rot[lm.left_hip + 1] = r6(&rot_y(knee));
            pose.joint_rot[lm.right_hip + 1] = r6(&rot_y(knee));
            // torso leans into the motion, arms reach forward for balance
            pose.joint_rot[1] = r6(&rot_y(lean * s));
            pose.joint_rot[lm.left_shoulder] = r6(&rot_z(-0.9 * s));
            pose.joint_rot[lm.right_shoulder] = r6(&rot_z(0.9 * s));
            pose
        })
        .collect();
    MotionSequence::new(skeleton, params.fps, frames).expect("generated sit is valid")
}

fn crawl(params: &GenParams, rng: &mut Rng) -> MotionSequence {
    let skeleton = Skeleton::default_humanoid();
    let n = frame_count(params);
    let speed = params.speed.unwrap_or_else(|| range_f64(rng, 0.45, 0.65));
    let cycle_hz = range_f64(rng, 0.9, 1.2);
    let weave = range_f64(rng, 0.02, 0.05);
    let pitch = range_f64(rng, 1.25, 1.4);
    let lm = *skeleton.landmarks();
    let frames = (0..n)
        .map(|i| {
            let t = i as f64 / params.fps;
            let phi = 2.0 * core::f64::consts::PI * cycle_hz * t;
            let pos = Vec3::new(
                speed * t,
                weave * phi.sin(),
                0.42 + 0.015 * (2.0 * phi).sin(),
            );
            let mut pose = Pose::rest(&skeleton, pos);
            // prone: the whole body pitches forward, thighs fold under,
            // shins trail flat
            pose.root_rot = r6(&rot_y(pitch));
            let hip_sw = 0.2 * phi.sin();
            pose.joint_rot[lm.left_hip] = r6(&rot_y(-0.6 + hip_sw));
            pose.joint_rot[lm.right_hip] = r6(&rot_y(-0.6 - hip_sw));
            pose.joint_rot[lm.left_hip + 1] = r6(&rot_y(0.73));
            pose.joint_rot[lm.right_hip + 1] = r6(&rot_y(0.73));
            // arms prop forward-down
            let arm_sw = 0.15 * phi.cos();
            pose.joint_rot[lm.left_shoulder] = r6(&rot_z(-1.1 + arm_sw));
            pose.joint_rot[lm.right_shoulder] = r6(&rot_z(1.1 + arm_sw));
            pose.joint_rot[lm.left_shoulder + 1] = r6(&rot_z(-0.25));
            pose.joint_rot[lm.right_shoulder + 1] = r6(&rot_z(0.25));
            // neck counter-pitches so the head looks ahead
            pose.joint_rot[3] = r6(&rot_y(-0.8));
            pose
        })
        .collect();
    MotionSequence::new(skeleton, params.fps, frames).expect("generated crawl is valid")
}

/// Rotation taking unit vector `a` to unit vector `b` (Rodrigues).
fn rot_between(a: &Vec3, b: &Vec3) -> Mat3 {
    let v = a.cross(b);
    let c = a.dot(b);
    let s2 = v.norm_squared();
    if s2 < 1e-16 {
        return Mat3::identity();
    }
    let vx = Mat3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0);
    Mat3::identity() + vx + vx * vx * ((1.0 - c) / s2)
}

fn reach(params: &GenParams, rng: &mut Rng) -> MotionSequence {
    let skeleton = Skeleton::default_humanoid();
    let n = frame_count(params);
    let target = Vec3::new(
        range_f64(rng, 0.45, 0.65),
        range_f64(rng, -0.3, 0.1),
        range_f64(rng, 0.9, 1.5),
    );
    let lm = *skeleton.landmarks();
    let base = Pose::rest(&skeleton, Vec3::new(0.0, 0.0, 0.9));
    let fk = forward_kinematics(&skeleton, &base).expect("rest pose is valid");
    // aim the right upper arm at the target once, then blend toward it
    let shoulder = lm.right_shoulder;
    let parent_rot = fk.rotations[skeleton.parent(shoulder)];
    let bone_dir = parent_rot * Vec3::new(0.0, -1.0, 0.0);
    let want = (target - fk.positions[shoulder]).normalize();
    let aimed = parent_rot.transpose() * rot_between(&bone_dir, &want) * parent_rot;
    let aimed6 = r6(&aimed);
    let t_total = (n - 1) as f64 / params.fps;
    let frames = (0..n)
        .map(|i| {
            let t = i as f64 / params.fps;
            let s = ease(t / (0.6 * t_total));
            let mut pose = base.clone();
            // linear blend of the 6D encoding is fine for a single joint
            // (both endpoints are proper rotations, the blend re-normalizes)
            let mut blended = [0.0; 6];
            for (k, b) in blended.iter_mut().enumerate() {
                *b = (1.0 - s) * Rot6::IDENTITY.0[k] + s * aimed6.0[k];
            }
            pose.joint_rot[shoulder] = Rot6(blended);
            pose.joint_rot[shoulder + 1] = r6(&rot_z(0.25 * s));
            pose.joint_rot[1] = r6(&rot_y(0.12 * s));
            pose.joint_rot[2] = r6(&rot_y(0.1 * s));
            pose
        })
        .collect();
    MotionSequence::new(skeleton, params.fps, frames).expect("generated reach is valid")
}
