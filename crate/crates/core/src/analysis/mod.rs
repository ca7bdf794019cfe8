//! Map comparison, hull cue meshes, difficulty regions and spawn planning.

mod hull;
mod mesh;
mod regions;
mod report;

pub use hull::{lattice_hull, orient, HullError, LatticeHull, LatticePoint};
pub use mesh::Mesh;
pub use regions::{
    classify_regions, plan_spawns, tier_sizes, Difficulty, RegionLabels, Spawn, SpawnPlan, TierThreshold, DEFAULT_D_MIN,
};
pub use report::{comparison_csv, comparison_markdown, ComparisonRow};

use thiserror::Error;

use crate::capmap::CapabilityMap;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("maps have different grids and cannot be compared")]
    IncompatibleMaps,
    #[error("baseline map is empty; reduction is undefined")]
    UndefinedBaseline,
    #[error("maps share no occupied voxels")]
    NoCommonRegion,
    #[error("invalid score band [{0}, {1}]")]
    InvalidBand(f64, f64),
    #[error("no voxels with score in [{0}, {1}]")]
    EmptySelection(f64, f64),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error("{tier} region has {eligible} eligible voxels, {requested} requested")]
    InsufficientRegion { tier: Difficulty, eligible: usize, requested: usize },
    #[error("region labels do not match the map's occupied voxels")]
    LabelsMismatch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Volume and dexterity reduction of one map against a baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapComparison {
    pub volume_reduction_pct: f64,
    pub dexterity_reduction_pct: f64,
    pub common_voxel_count: usize,
}

fn check_grids(a: &CapabilityMap, b: &CapabilityMap) -> Result<(), AnalysisError> {
    if a.grid() != b.grid() {
        return Err(AnalysisError::IncompatibleMaps);
    }
    Ok(())
}

/// `100 * (1 - |occupied(other)| / |occupied(healthy)|)`. Negative when
/// `other` covers more voxels.
pub fn volume_reduction(healthy: &CapabilityMap, other: &CapabilityMap) -> Result<f64, AnalysisError> {
    check_grids(healthy, other)?;
    let base = healthy.occupied_count();
    if base == 0 {
        return Err(AnalysisError::UndefinedBaseline);
    }
    Ok(100.0 * (1.0 - other.occupied_count() as f64 / base as f64))
}

/// Score-sum reduction over the voxels occupied in both maps. Returns the
/// percentage and the number of common voxels.
pub fn dexterity_reduction(healthy: &CapabilityMap, other: &CapabilityMap) -> Result<(f64, usize), AnalysisError> {
    check_grids(healthy, other)?;
    let mut common = 0usize;
    let (mut sum_healthy, mut sum_other) = (0.0, 0.0);
    for (idx, _) in healthy.occupied() {
        if let (Some(h), Some(o)) = (healthy.score(idx), other.score(idx)) {
            common += 1;
            sum_healthy += h;
            sum_other += o;
        }
    }
    if common == 0 {
        return Err(AnalysisError::NoCommonRegion);
    }
    Ok((100.0 * (1.0 - sum_other / sum_healthy), common))
}

pub fn compare_maps(healthy: &CapabilityMap, other: &CapabilityMap) -> Result<MapComparison, AnalysisError> {
    let volume = volume_reduction(healthy, other)?;
    let (dexterity, common) = dexterity_reduction(healthy, other)?;
    Ok(MapComparison { volume_reduction_pct: volume, dexterity_reduction_pct: dexterity, common_voxel_count: common })
}

/// Voxel indices whose score lies in the closed band `[lo, hi]`.
pub fn select_band(map: &CapabilityMap, lo: f64, hi: f64) -> Result<Vec<u32>, AnalysisError> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(AnalysisError::InvalidBand(lo, hi));
    }
    Ok(map
        .occupied()
        .filter(|(idx, _)| map.score(*idx).is_some_and(|s| lo <= s && s <= hi))
        .map(|(idx, _)| idx)
        .collect())
}

/// Convex hull enclosing every voxel (all 8 corners) whose score lies in
/// `[lo, hi]`. `[0, 1]` covers the whole reachable workspace.
pub fn extract_hull(map: &CapabilityMap, lo: f64, hi: f64) -> Result<Mesh, AnalysisError> {
    let selected = select_band(map, lo, hi)?;
    if selected.is_empty() {
        return Err(AnalysisError::EmptySelection(lo, hi));
    }
    let grid = map.grid();
    let corners: Vec<LatticePoint> = selected
        .iter()
        .flat_map(|&idx| {
            let [i, j, k] = grid.ijk(idx).map(i64::from);
            (0..8).map(move |c| [i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1)])
        })
        .collect();
    let hull = lattice_hull(&corners)?;
    Ok(Mesh {
        vertices: hull.vertices.iter().map(|c| grid.corner_point(*c)).collect(),
        triangles: hull.triangles,
        convex: true,
    })
}
