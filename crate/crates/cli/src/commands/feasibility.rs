//! Upright-agent reachability probes over obstacle grids.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde_json::json;

use occu_core::metrics::{path_feasibility, CylinderSpec, Feasibility};
use occu_core::Vec3;

use crate::formats::{self, write_atomic, Manifest};
use crate::Outcome;

#[derive(Debug, clap::Args)]
pub struct FeasibilityArgs {
    /// Single obstacle grid to probe (needs --start and --goal).
    #[arg(long, conflicts_with = "manifest")]
    pub grid: Option<PathBuf>,
    /// Batch manifest as written by build-mob; each entry is probed from
    /// its motion's start root to its end root.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Probe each grid's complement. Swept-motion grids mark the body's
    /// volume; the space an agent could walk through is the complement.
    #[arg(long)]
    pub complement: bool,
    /// Start `x,y[,z]` for single-grid mode.
    #[arg(long)]
    pub start: Option<String>,
    /// Goal `x,y[,z]` for single-grid mode.
    #[arg(long)]
    pub goal: Option<String>,
    /// Agent cylinder radius, meters.
    #[arg(long, default_value_t = 0.25)]
    pub radius: f64,
    /// Agent cylinder height, meters.
    #[arg(long, default_value_t = 1.7)]
    pub height: f64,
    /// Ground height the cylinder stands on, meters.
    #[arg(long, default_value_t = 0.0)]
    pub ground: f64,
    /// Write the JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn parse_point(text: &str) -> anyhow::Result<Vec3> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad point `{text}`: expected x,y[,z]"))?;
    match parts.as_slice() {
        [x, y] => Ok(Vec3::new(*x, *y, 0.0)),
        [x, y, z] => Ok(Vec3::new(*x, *y, *z)),
        _ => bail!("bad point `{text}`: expected x,y[,z]"),
    }
}

fn probe(
    grid_path: &Path,
    complement: bool,
    start: &Vec3,
    goal: &Vec3,
    cylinder: &CylinderSpec,
) -> anyhow::Result<Feasibility> {
    let mut grid = formats::load_grid(grid_path)?;
    if complement {
        grid = grid.complement();
    }
    Ok(path_feasibility(&grid, start, goal, cylinder))
}

fn emit(args: &FeasibilityArgs, doc: &serde_json::Value) -> anyhow::Result<()> {
    if let Some(out) = &args.json {
        let mut text = serde_json::to_string_pretty(doc)?;
        text.push('\n');
        write_atomic(out, text.as_bytes())?;
    }
    Ok(())
}

pub fn feasibility(args: &FeasibilityArgs, verbose: bool) -> anyhow::Result<Outcome> {
    let cylinder = CylinderSpec {
        radius: args.radius,
        height: args.height,
        ground: args.ground,
    };
    match (&args.grid, &args.manifest) {
        (Some(grid_path), None) => {
            let start = parse_point(args.start.as_deref().context("--grid needs --start")?)?;
            let goal = parse_point(args.goal.as_deref().context("--grid needs --goal")?)?;
            let got = probe(grid_path, args.complement, &start, &goal, &cylinder)?;
            match &got {
                Feasibility::Feasible { path } => {
                    println!("feasible ({} waypoints)", path.len());
                    let pts: Vec<[f64; 3]> =
                        path.iter().map(|p| [p.x, p.y, p.z]).collect();
                    emit(args, &json!({ "feasible": true, "path": pts }))?;
                }
                Feasibility::Infeasible { reason } => {
                    println!("infeasible: {reason:?}");
                    emit(
                        args,
                        &json!({ "feasible": false, "reason": format!("{reason:?}") }),
                    )?;
                }
            }
            Ok(Outcome::Success)
        }
        (None, Some(manifest_path)) => {
            let manifest = Manifest::load(manifest_path)?;
            if manifest.entries.is_empty() {
                bail!("manifest lists no grids");
            }
            let base = manifest_path.parent().unwrap_or(Path::new("."));
            let mut rows = Vec::new();
            let mut feasible = 0usize;
            let mut infeasible = 0usize;
            let mut errors = 0usize;
            for entry in &manifest.entries {
                let row = (|| -> anyhow::Result<serde_json::Value> {
                    if let Some(err) = &entry.error {
                        bail!("skipped at build time: {err}");
                    }
                    let start = entry
                        .start_root
                        .map(|p| Vec3::new(p[0], p[1], p[2]))
                        .context("manifest entry has no start_root")?;
                    let goal = entry
                        .end_root
                        .map(|p| Vec3::new(p[0], p[1], p[2]))
                        .context("manifest entry has no end_root")?;
                    let got = probe(
                        &base.join(&entry.path),
                        args.complement,
                        &start,
                        &goal,
                        &cylinder,
                    )?;
                    Ok(match got {
                        Feasibility::Feasible { .. } => {
                            feasible += 1;
                            json!({ "path": entry.path, "feasible": true })
                        }
                        Feasibility::Infeasible { reason } => {
                            infeasible += 1;
                            json!({
                                "path": entry.path,
                                "feasible": false,
                                "reason": format!("{reason:?}"),
                            })
                        }
                    })
                })();
                match row {
                    Ok(r) => {
                        if verbose {
                            eprintln!("{r}");
                        }
                        rows.push(r);
                    }
                    Err(e) => {
                        errors += 1;
                        eprintln!("error: {}: {e:#}", entry.path);
                        rows.push(json!({ "path": entry.path, "error": format!("{e:#}") }));
                    }
                }
            }
            let scored = feasible + infeasible;
            if scored == 0 {
                bail!("no grid in the manifest could be probed");
            }
            let fraction = infeasible as f64 / scored as f64;
            println!(
                "{infeasible}/{scored} infeasible ({:.1}%)",
                100.0 * fraction
            );
            emit(
                args,
                &json!({
                    "grids": manifest.entries.len(),
                    "scored": scored,
                    "feasible": feasible,
                    "infeasible": infeasible,
                    "errors": errors,
                    "infeasible_fraction": fraction,
                    "rows": rows,
                }),
            )?;
            Ok(if errors > 0 { Outcome::Partial } else { Outcome::Success })
        }
        _ => bail!("pass exactly one of --grid or --manifest"),
    }
}
