//! Volume and dexterity reduction of two restricted shoulders against the
//! nominal arm, printed as a CSV and a Markdown table.

use reachmap::analysis::{compare_maps, comparison_csv, comparison_markdown, ComparisonRow};
use reachmap::arm::{ArmGeometry, CollisionModel, RomLimits};
use reachmap::capmap::{generate_capability_map, GenerationParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let geom = ArmGeometry::default();
    let cm = CollisionModel::default();
    let params = GenerationParams { voxel_edge: 0.10, proximal_step: 30f64.to_radians(), n_dir: 16, ..Default::default() };
    let nominal = RomLimits::nominal();
    let mut partial = nominal.to_degrees();
    partial[0] = [-30.0, 120.0];
    partial[1] = [-40.0, 120.0];
    let mut restricted = partial;
    restricted[0] = [-30.0, 60.0];
    restricted[1] = [-20.0, 60.0];
    restricted[2] = [-60.0, 40.0];

    let healthy = generate_capability_map(&geom, &nominal, &cm, &params)?;
    let mut rows = Vec::new();
    for (condition, deg) in [("partially_restricted", partial), ("restricted", restricted)] {
        let map = generate_capability_map(&geom, &RomLimits::from_degrees(deg)?, &cm, &params)?;
        rows.push(ComparisonRow::new("example", condition, &compare_maps(&healthy, &map)?));
    }
    print!("{}\n{}", comparison_csv(&rows), comparison_markdown(&rows));
    Ok(())
}
