//! Simulate balloon-pop sessions on three nested-ROM maps and print the
//! speed table.

use nalgebra::Point3;
use reachmap::analysis::classify_regions;
use reachmap::arm::{ArmGeometry, CollisionModel, RomLimits};
use reachmap::capmap::{generate_capability_map, GenerationParams};
use reachmap::session::{session_report, simulate_session, UserModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let geom = ArmGeometry::default();
    let cm = CollisionModel::default();
    let params = GenerationParams { voxel_edge: 0.10, proximal_step: 30f64.to_radians(), n_dir: 16, ..Default::default() };
    let home = Point3::new(0.0, 0.25, -0.35);

    let nominal = RomLimits::nominal().to_degrees();
    let mut partial = nominal;
    partial[0] = [-30.0, 120.0];
    partial[1] = [-40.0, 120.0];
    let mut restricted = partial;
    restricted[0] = [-30.0, 60.0];
    restricted[1] = [-20.0, 60.0];

    let mut logs = Vec::new();
    for (condition, deg, base) in
        [("unrestricted", nominal, 0.45), ("partially_restricted", partial, 0.40), ("restricted", restricted, 0.35)]
    {
        let map = generate_capability_map(&geom, &RomLimits::from_degrees(deg)?, &cm, &params)?.with_labels("sim", condition);
        let labels = classify_regions(&map);
        let model = UserModel { base_speed: base, score_gain: 0.4, noise_sd: 0.02 };
        logs.push(simulate_session(&map, &labels, home, &model, 10, 0.15, 5)?);
    }
    let report = session_report(&logs);
    print!("{}\n{}", report.to_csv(), report.to_markdown());
    Ok(())
}
