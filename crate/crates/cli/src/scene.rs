//! Scene spec strings.
//!
//! A compact one-line grammar for picking the occupancy provider an
//! episode runs against:
//!
//! ```text
//! empty                         obstacle-free world
//! floor:Z                       everything at or below height Z
//! boxes:X0,Y0,Z0,X1,Y1,Z1;...   union of axis-aligned boxes
//! door                          revolving door at the origin
//! door:CX,CY[,PHASE]            revolving door at (CX, CY)
//! static:PATH                   occupancy grid file
//! swap:T:BEFORE|AFTER           switch specs at time T
//! ```

use crate::formats::load_grid;
use anyhow::{bail, Context};
use occu_core::math::Aabb;
use occu_core::occupancy::{
    BoxScene, EmptyScene, HalfSpaceFloor, RevolvingDoorScene, ScheduledSwapScene,
    StaticGridScene,
};
use occu_core::{OccupancyProvider, Vec3};
use std::path::Path;

pub fn parse_scene(spec: &str) -> anyhow::Result<Box<dyn OccupancyProvider>> {
    let spec = spec.trim();
    if spec == "empty" {
        return Ok(Box::new(EmptyScene));
    }
    if spec == "door" {
        return Ok(Box::new(RevolvingDoorScene::standard()));
    }
    if let Some(rest) = spec.strip_prefix("floor:") {
        let level: f64 = rest
            .trim()
            .parse()
            .with_context(|| format!("floor level `{rest}`"))?;
        return Ok(Box::new(HalfSpaceFloor { level }));
    }
    if let Some(rest) = spec.strip_prefix("door:") {
        let nums = parse_numbers(rest)?;
        let mut door = RevolvingDoorScene::standard();
        match nums.as_slice() {
            [cx, cy] => {
                door.center = Vec3::new(*cx, *cy, 0.0);
            }
            [cx, cy, phase] => {
                door.center = Vec3::new(*cx, *cy, 0.0);
                door.phase = *phase;
            }
            _ => bail!("door spec needs `cx,cy` or `cx,cy,phase`, got `{rest}`"),
        }
        return Ok(Box::new(door));
    }
    if let Some(rest) = spec.strip_prefix("boxes:") {
        let mut boxes = Vec::new();
        for part in rest.split(';') {
            let nums = parse_numbers(part)?;
            let [x0, y0, z0, x1, y1, z1] = nums.as_slice() else {
                bail!("each box needs six numbers `x0,y0,z0,x1,y1,z1`, got `{part}`");
            };
            if x0 >= x1 || y0 >= y1 || z0 >= z1 {
                bail!("degenerate box `{part}` (min must be below max on every axis)");
            }
            boxes.push(Aabb::new(
                Vec3::new(*x0, *y0, *z0),
                Vec3::new(*x1, *y1, *z1),
            ));
        }
        return Ok(Box::new(BoxScene::new(boxes)));
    }
    if let Some(rest) = spec.strip_prefix("static:") {
        let grid = load_grid(Path::new(rest.trim()))?;
        return Ok(Box::new(StaticGridScene::new(grid)));
    }
    if let Some(rest) = spec.strip_prefix("swap:") {
        let Some((time, worlds)) = rest.split_once(':') else {
            bail!("swap spec is `swap:T:BEFORE|AFTER`, got `{spec}`");
        };
        let time: f64 = time
            .trim()
            .parse()
            .with_context(|| format!("swap time `{time}`"))?;
        let Some((before, after)) = worlds.split_once('|') else {
            bail!("swap spec is `swap:T:BEFORE|AFTER`, got `{spec}`");
        };
        let before = parse_scene(before).context("swap `before` spec")?;
        let after = parse_scene(after).context("swap `after` spec")?;
        return Ok(Box::new(ScheduledSwapScene::new(before, after, time)));
    }
    bail!(
        "unknown scene spec `{spec}` (expected empty, floor:Z, boxes:..., door, \
         door:CX,CY[,PHASE], static:PATH or swap:T:BEFORE|AFTER)"
    );
}

fn parse_numbers(text: &str) -> anyhow::Result<Vec<f64>> {
    text.split(',')
        .map(|p| {
            let p = p.trim();
            p.parse::<f64>()
                .with_context(|| format!("bad number `{p}`"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_specs_parse() {
        let empty = parse_scene("empty").unwrap();
        assert!(!empty.is_occupied(&Vec3::new(0.0, 0.0, 1.0), 0.0));

        let floor = parse_scene("floor:0.5").unwrap();
        assert!(floor.is_occupied(&Vec3::new(3.0, -2.0, 0.4), 1.0));
        assert!(!floor.is_occupied(&Vec3::new(3.0, -2.0, 0.6), 1.0));
    }

    #[test]
    fn boxes_spec_builds_a_union() {
        let scene = parse_scene("boxes:0,0,0,1,1,1; 3,0,0,4,1,1").unwrap();
        assert!(scene.is_occupied(&Vec3::new(0.5, 0.5, 0.5), 0.0));
        assert!(!scene.is_occupied(&Vec3::new(2.0, 0.5, 0.5), 0.0));
        assert!(scene.is_occupied(&Vec3::new(3.5, 0.5, 0.5), 0.0));
    }

    #[test]
    fn door_center_and_phase_apply() {
        let scene = parse_scene("door:10,0,0").unwrap();
        // a blade reaches along +X from the recentered axis at t = 0
        assert!(scene.is_occupied(&Vec3::new(11.0, 0.0, 1.0), 0.0));
        assert!(!scene.is_occupied(&Vec3::new(1.0, 0.0, 1.0), 0.0));
    }

    #[test]
    fn swap_switches_between_nested_specs() {
        let scene = parse_scene("swap:2.0:boxes:0,0,0,1,1,1|empty").unwrap();
        let p = Vec3::new(0.5, 0.5, 0.5);
        assert!(scene.is_occupied(&p, 0.0));
        assert!(!scene.is_occupied(&p, 2.5));
    }

    #[test]
    fn static_spec_loads_a_grid_file() {
        use occu_core::{GridSpec, OccupancyGrid};
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.mobg");
        let mut grid = OccupancyGrid::empty(GridSpec {
            origin: Vec3::zeros(),
            unit: 0.5,
            dims: [2, 2, 2],
        });
        grid.set([0, 0, 0], true);
        crate::formats::save_grid(&path, &grid).unwrap();
        let scene = parse_scene(&format!("static:{}", path.display())).unwrap();
        assert!(scene.is_occupied(&Vec3::new(0.25, 0.25, 0.25), 0.0));
        assert!(!scene.is_occupied(&Vec3::new(0.75, 0.25, 0.25), 0.0));
    }

    #[test]
    fn malformed_specs_are_rejected() {
        for bad in [
            "unknown",
            "floor:",
            "floor:abc",
            "boxes:1,2,3",
            "boxes:0,0,0,0,1,1",
            "door:1",
            "swap:1:empty",
            "swap:x:empty|empty",
        ] {
            assert!(parse_scene(bad).is_err(), "`{bad}` should fail");
        }
    }
}
