//! Split a map into easy/medium/hard regions and plan balloon spawns.

use nalgebra::Point3;
use reachmap::analysis::{classify_regions, plan_spawns, DEFAULT_D_MIN};
use reachmap::arm::{ArmGeometry, CollisionModel, RomLimits};
use reachmap::capmap::{generate_capability_map, GenerationParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = GenerationParams { voxel_edge: 0.10, proximal_step: 30f64.to_radians(), n_dir: 16, ..Default::default() };
    let map = generate_capability_map(&ArmGeometry::default(), &RomLimits::nominal(), &CollisionModel::default(), &params)?;
    let labels = classify_regions(&map);
    for t in &labels.thresholds {
        println!("{}: {} voxels, scores [{:.3}, {:.3}]", t.difficulty, t.count, t.min_score, t.max_score);
    }
    let plan = plan_spawns(&map, &labels, Point3::new(0.0, 0.25, -0.35), 10, DEFAULT_D_MIN, 42)?;
    for s in &plan.spawns {
        println!("{:>6} balloon at {:.3?}", s.difficulty.as_str(), s.position);
    }
    Ok(())
}
