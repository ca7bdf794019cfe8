//! Generate a coarse capability map, save it, reload it and query it.

use nalgebra::Point3;
use reachmap::arm::{ArmGeometry, CollisionModel, RomLimits};
use reachmap::capmap::{generate_capability_map, load_map, save_map, GenerationParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = GenerationParams {
        voxel_edge: 0.10,
        proximal_step: 30f64.to_radians(),
        n_dir: 16,
        seed: 3,
        ..Default::default()
    };
    let t = std::time::Instant::now();
    let map = generate_capability_map(&ArmGeometry::default(), &RomLimits::nominal(), &CollisionModel::default(), &params)?
        .with_labels("example", "unrestricted");
    println!("{} occupied voxels in {:.1?}", map.occupied_count(), t.elapsed());

    let path = std::env::temp_dir().join("reachmap_example.rmap");
    save_map(&map, &path)?;
    let back = load_map(&path)?;
    assert_eq!(back, map);
    println!("saved and reloaded {} ({} bytes)", path.display(), std::fs::metadata(&path)?.len());

    for p in [[0.0, 0.4, -0.3], [0.3, 0.3, 0.0], [0.0, 0.0, -0.7], [0.0, 0.0, 1.0]] {
        match map.score_at(&Point3::from(p)) {
            Some(s) => println!("score at {p:?}: {s:.3}"),
            None => println!("score at {p:?}: unreachable"),
        }
    }
    Ok(())
}
