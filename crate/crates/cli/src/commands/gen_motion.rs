//! Synthetic motion generation to a motion JSON file.

use std::path::PathBuf;

use anyhow::bail;

use crate::formats::save_motion;
use crate::genmotion::{generate, GenParams, MotionKind};
use crate::Outcome;

#[derive(Debug, clap::Args)]
pub struct GenMotionArgs {
    /// walk, turn, sit, crawl or reach.
    #[arg(long)]
    pub kind: String,
    /// Output motion JSON path.
    #[arg(long)]
    pub out: PathBuf,
    /// Clip length, seconds.
    #[arg(long, default_value_t = 4.0)]
    pub duration: f64,
    /// Forward speed override, m/s.
    #[arg(long)]
    pub speed: Option<f64>,
    /// Frame rate, Hz.
    #[arg(long, default_value_t = 30.0)]
    pub fps: f64,
    /// Lateral sway amplitude for walks, meters; carves a wide corridor.
    #[arg(long, default_value_t = 0.0)]
    pub sway: f64,
    /// Sway cycle length, seconds.
    #[arg(long, default_value_t = 1.5)]
    pub sway_period: f64,
}

pub fn gen_motion(args: &GenMotionArgs, seed: u64, verbose: bool) -> anyhow::Result<Outcome> {
    let Some(kind) = MotionKind::parse(&args.kind) else {
        let names: Vec<&str> = MotionKind::ALL.iter().map(|k| k.name()).collect();
        bail!("unknown kind `{}` (expected one of {})", args.kind, names.join(", "));
    };
    if !(args.duration > 0.0) {
        bail!("duration must be positive, got {}", args.duration);
    }
    if !(args.fps > 0.0) {
        bail!("fps must be positive, got {}", args.fps);
    }
    if args.sway < 0.0 || !(args.sway_period > 0.0) {
        bail!("sway must be >= 0 and sway-period positive");
    }
    let params = GenParams {
        seed,
        fps: args.fps,
        duration: args.duration,
        speed: args.speed,
        sway: args.sway,
        sway_period: args.sway_period,
    };
    let seq = generate(kind, &params);
    save_motion(&args.out, &seq)?;
    if verbose {
        eprintln!(
            "{}: {} frames at {} Hz -> {}",
            kind.name(),
            seq.len(),
            seq.fps(),
            args.out.display()
        );
    }
    Ok(Outcome::Success)
}
