//! Voxelized capability maps.
//!
//! A map is built offline in two passes. The seed pass enumerates a global
//! joint lattice (anchored at 0 rad, so nested ROM inputs produce nested
//! lattices), marks the voxel holding each fingertip position and keeps a
//! few witness configurations per voxel. The score pass then tries, for every
//! occupied voxel and each of `n_dir` Fibonacci-sphere directions, to solve
//! IK for "fingertip at the voxel center pointing along that direction".
//! The voxel's score is the fraction of directions that succeed.
//!
//! Lookups ([`CapabilityMap::score_at`]) are O(1) over a dense array.

mod generate;
mod grid;
mod io;

pub use generate::{
    fk_seed_pass, generate_capability_map, joint_lattice, score_pass, SeedPass, VoxelSeeds,
};
pub use grid::{fibonacci_directions, VoxelGrid, GRID_MARGIN};
pub use io::{load_map, save_map, MAP_FORMAT_VERSION, MAP_MAGIC};

use nalgebra::Point3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arm::{ArmGeometry, CollisionModel, RomLimits};

#[derive(Debug, Error)]
pub enum CapMapError {
    #[error("invalid generation parameters: {0}")]
    InvalidParams(String),
    #[error("joint lattice has {points} points, above the cap of {cap}; coarsen the lattice step")]
    LatticeTooLarge { points: u64, cap: u64 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a capability map file (bad magic)")]
    BadMagic,
    #[error("unsupported map format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("map file is truncated or corrupt: {0}")]
    Corrupt(String),
    #[error("map file checksum mismatch")]
    ChecksumMismatch,
    #[error("invalid map contents: {0}")]
    InvalidMap(String),
}

/// Parameters of one map generation run. Angles are radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationParams {
    pub voxel_edge: f64,
    /// Lattice step for q1..q4.
    pub proximal_step: f64,
    /// Lattice step for q5..q7.
    pub wrist_step: f64,
    pub n_dir: u16,
    /// IK position tolerance to the voxel center; `None` uses the voxel's
    /// half-diagonal so any fingertip inside the voxel counts.
    pub ik_position_tol: Option<f64>,
    pub ik_angle_tol: f64,
    /// Witness configurations kept per voxel by the seed pass.
    pub witnesses: usize,
    /// Extra random in-limit IK seeds tried per direction bin.
    pub random_seeds: usize,
    pub collision: bool,
    pub seed: u64,
    pub lattice_cap: u64,
}

impl Default for GenerationParams {
    fn default() -> Self {
        Self {
            voxel_edge: 0.05,
            proximal_step: 15f64.to_radians(),
            wrist_step: 30f64.to_radians(),
            n_dir: 32,
            ik_position_tol: None,
            ik_angle_tol: 15f64.to_radians(),
            witnesses: 4,
            random_seeds: 2,
            collision: true,
            seed: 0,
            lattice_cap: 50_000_000,
        }
    }
}

impl GenerationParams {
    pub fn validate(&self) -> Result<(), CapMapError> {
        let bad = |m: &str| Err(CapMapError::InvalidParams(m.to_string()));
        if !(self.voxel_edge.is_finite() && self.voxel_edge > 0.0) {
            return bad("voxel_edge must be positive");
        }
        if !(self.proximal_step > 0.0 && self.wrist_step > 0.0) {
            return bad("lattice steps must be positive");
        }
        if self.n_dir == 0 {
            return bad("n_dir must be at least 1");
        }
        if self.ik_position_tol.is_some_and(|t| !(t > 0.0)) || !(self.ik_angle_tol > 0.0) {
            return bad("IK tolerances must be positive");
        }
        if self.witnesses == 0 {
            return bad("witnesses must be at least 1");
        }
        Ok(())
    }

    pub fn position_tolerance(&self, grid: &VoxelGrid) -> f64 {
        self.ik_position_tol.unwrap_or_else(|| grid.half_diagonal())
    }
}

/// Everything needed to regenerate a map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapMetadata {
    pub user_id: String,
    pub condition: String,
    pub geometry: ArmGeometry,
    pub rom: RomLimits,
    pub collision_model: CollisionModel,
    pub params: GenerationParams,
}

impl Default for MapMetadata {
    fn default() -> Self {
        Self {
            user_id: String::new(),
            condition: String::new(),
            geometry: ArmGeometry::default(),
            rom: RomLimits::nominal(),
            collision_model: CollisionModel::default(),
            params: GenerationParams::default(),
        }
    }
}

/// Voxel grid with a reachability score per occupied voxel.
///
/// Scores are stored as numerators `k` of `k / n_dir`; 0 marks an
/// unoccupied voxel.
#[derive(Debug, Clone, PartialEq)]
pub struct CapabilityMap {
    grid: VoxelGrid,
    n_dir: u16,
    numerators: Vec<u16>,
    metadata: MapMetadata,
}

impl CapabilityMap {
    /// Builds a map from `(voxel index, numerator)` pairs.
    pub fn from_entries(
        grid: VoxelGrid,
        n_dir: u16,
        entries: impl IntoIterator<Item = (u32, u16)>,
        metadata: MapMetadata,
    ) -> Result<Self, CapMapError> {
        if n_dir == 0 {
            return Err(CapMapError::InvalidMap("n_dir must be at least 1".into()));
        }
        let mut numerators = vec![0u16; grid.voxel_count()];
        for (idx, k) in entries {
            let slot = numerators
                .get_mut(idx as usize)
                .ok_or_else(|| CapMapError::InvalidMap(format!("voxel index {idx} outside grid")))?;
            if k == 0 || k > n_dir {
                return Err(CapMapError::InvalidMap(format!("voxel {idx}: numerator {k} not in 1..={n_dir}")));
            }
            *slot = k;
        }
        Ok(Self { grid, n_dir, numerators, metadata })
    }

    pub fn grid(&self) -> &VoxelGrid {
        &self.grid
    }

    pub fn n_dir(&self) -> u16 {
        self.n_dir
    }

    pub fn metadata(&self) -> &MapMetadata {
        &self.metadata
    }

    pub fn with_labels(mut self, user_id: &str, condition: &str) -> Self {
        self.metadata.user_id = user_id.to_string();
        self.metadata.condition = condition.to_string();
        self
    }

    pub fn numerator(&self, index: u32) -> u16 {
        self.numerators.get(index as usize).copied().unwrap_or(0)
    }

    pub fn score(&self, index: u32) -> Option<f64> {
        match self.numerator(index) {
            0 => None,
            k => Some(k as f64 / self.n_dir as f64),
        }
    }

    /// Occupied voxels as `(index, numerator)` in index order.
    pub fn occupied(&self) -> impl Iterator<Item = (u32, u16)> + '_ {
        self.numerators.iter().enumerate().filter(|(_, k)| **k > 0).map(|(i, k)| (i as u32, *k))
    }

    pub fn occupied_count(&self) -> usize {
        self.numerators.iter().filter(|k| **k > 0).count()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied_count() == 0
    }

    /// Score of the voxel containing `point`, or `None` outside the grid or
    /// in an unoccupied voxel.
    pub fn score_at(&self, point: &Point3<f64>) -> Option<f64> {
        self.grid.voxel_of(point).and_then(|i| self.score(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_map() -> CapabilityMap {
        let grid = VoxelGrid::new([0.0; 3], 0.1, [4, 4, 4]).unwrap();
        CapabilityMap::from_entries(grid, 8, [(0, 8), (5, 2), (63, 1)], MapMetadata::default()).unwrap()
    }

    #[test]
    fn score_at_center_and_outside() {
        let m = small_map();
        assert_eq!(m.score_at(&m.grid().center(5)), Some(0.25));
        assert_eq!(m.score_at(&Point3::new(-0.01, 0.0, 0.0)), None);
        assert_eq!(m.score_at(&m.grid().center(6)), None);
        assert_eq!(m.occupied_count(), 3);
    }

    #[test]
    fn shared_face_goes_to_upper_voxel() {
        let m = small_map();
        // x = 0.1 is the face between voxel 0 and voxel 1
        assert_eq!(m.score_at(&Point3::new(0.1, 0.05, 0.05)), None);
        assert_eq!(m.score_at(&Point3::new(0.0999, 0.05, 0.05)), Some(1.0));
    }

    #[test]
    fn rejects_bad_entries() {
        let grid = VoxelGrid::new([0.0; 3], 0.1, [2, 2, 2]).unwrap();
        assert!(CapabilityMap::from_entries(grid, 4, [(8, 1)], MapMetadata::default()).is_err());
        assert!(CapabilityMap::from_entries(grid, 4, [(1, 5)], MapMetadata::default()).is_err());
    }

    #[test]
    fn params_validate() {
        assert!(GenerationParams::default().validate().is_ok());
        let p = GenerationParams { n_dir: 0, ..Default::default() };
        assert!(p.validate().is_err());
        let p = GenerationParams { proximal_step: 0.0, ..Default::default() };
        assert!(p.validate().is_err());
    }
}
