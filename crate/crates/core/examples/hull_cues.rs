//! Convex-hull cue meshes for the whole workspace and the top-score band,
//! written as Wavefront OBJ.

use reachmap::analysis::{classify_regions, extract_hull, Difficulty};
use reachmap::arm::{ArmGeometry, CollisionModel, RomLimits};
use reachmap::capmap::{generate_capability_map, GenerationParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = GenerationParams { voxel_edge: 0.10, proximal_step: 30f64.to_radians(), n_dir: 16, ..Default::default() };
    let map = generate_capability_map(&ArmGeometry::default(), &RomLimits::nominal(), &CollisionModel::default(), &params)?;

    let top = classify_regions(&map)
        .thresholds
        .iter()
        .find(|t| t.difficulty == Difficulty::Easy)
        .map(|t| t.min_score)
        .unwrap_or(1.0);
    let dir = std::env::temp_dir();
    for (name, lo, hi) in [("workspace", 0.0, 1.0), ("top_band", top, 1.0)] {
        let mesh = extract_hull(&map, lo, hi)?;
        let path = dir.join(format!("reachmap_{name}.obj"));
        std::fs::write(&path, mesh.to_obj(name))?;
        println!(
            "{name} [{lo:.3}, {hi:.3}]: {} vertices, {} triangles, {:.4} m^3, watertight={} -> {}",
            mesh.vertices.len(),
            mesh.triangles.len(),
            mesh.volume(),
            mesh.is_watertight(),
            path.display()
        );
    }
    Ok(())
}
