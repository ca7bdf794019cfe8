use nalgebra::{Point3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::arm::ArmGeometry;

use super::CapMapError;

/// Margin added to the arm's reach on every side of the default grid.
pub const GRID_MARGIN: f64 = 0.05;

/// Axis-aligned voxel grid. Voxel `(i, j, k)` spans the half-open box
/// `[origin + i*edge, origin + (i+1)*edge)` per axis; its linear index is
/// `i + nx * (j + ny * k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VoxelGrid {
    pub origin: [f64; 3],
    pub voxel_edge: f64,
    pub dims: [u32; 3],
}

impl VoxelGrid {
    pub fn new(origin: [f64; 3], voxel_edge: f64, dims: [u32; 3]) -> Result<Self, CapMapError> {
        if !(voxel_edge.is_finite() && voxel_edge > 0.0) {
            return Err(CapMapError::InvalidParams(format!("voxel edge must be positive, got {voxel_edge}")));
        }
        if dims.iter().any(|d| *d == 0) || origin.iter().any(|o| !o.is_finite()) {
            return Err(CapMapError::InvalidParams("grid dims must be >= 1 and origin finite".into()));
        }
        let total = dims.iter().map(|d| *d as u64).product::<u64>();
        if total > u32::MAX as u64 {
            return Err(CapMapError::InvalidParams(format!("grid has {total} voxels, index overflows u32")));
        }
        Ok(Self { origin, voxel_edge, dims })
    }

    /// Cube centered on the shoulder spanning at least `±(reach + 0.05)`.
    pub fn covering(geom: &ArmGeometry, voxel_edge: f64) -> Result<Self, CapMapError> {
        if !(voxel_edge.is_finite() && voxel_edge > 0.0) {
            return Err(CapMapError::InvalidParams(format!("voxel edge must be positive, got {voxel_edge}")));
        }
        let half = geom.total_reach() + GRID_MARGIN;
        let n = (2.0 * half / voxel_edge).ceil().max(1.0);
        if n > u32::MAX as f64 {
            return Err(CapMapError::InvalidParams("voxel edge too small".into()));
        }
        let o = -0.5 * n * voxel_edge;
        Self::new([o; 3], voxel_edge, [n as u32; 3])
    }

    pub fn voxel_count(&self) -> usize {
        self.dims.iter().map(|d| *d as usize).product()
    }

    pub fn linear_index(&self, ijk: [u32; 3]) -> u32 {
        ijk[0] + self.dims[0] * (ijk[1] + self.dims[1] * ijk[2])
    }

    pub fn ijk(&self, index: u32) -> [u32; 3] {
        let [nx, ny, _] = self.dims;
        [index % nx, (index / nx) % ny, index / (nx * ny)]
    }

    /// Voxel containing `p`, or `None` outside the grid.
    pub fn voxel_of(&self, p: &Point3<f64>) -> Option<u32> {
        let mut ijk = [0u32; 3];
        for axis in 0..3 {
            let f = ((p[axis] - self.origin[axis]) / self.voxel_edge).floor();
            if !(f >= 0.0 && f < self.dims[axis] as f64) {
                return None;
            }
            ijk[axis] = f as u32;
        }
        Some(self.linear_index(ijk))
    }

    pub fn center(&self, index: u32) -> Point3<f64> {
        let ijk = self.ijk(index);
        Point3::new(
            self.origin[0] + (ijk[0] as f64 + 0.5) * self.voxel_edge,
            self.origin[1] + (ijk[1] as f64 + 0.5) * self.voxel_edge,
            self.origin[2] + (ijk[2] as f64 + 0.5) * self.voxel_edge,
        )
    }

    /// Corner `(i, j, k)` of the lattice of voxel corners, in world
    /// coordinates.
    pub fn corner_point(&self, corner: [i64; 3]) -> Point3<f64> {
        Point3::new(
            self.origin[0] + corner[0] as f64 * self.voxel_edge,
            self.origin[1] + corner[1] as f64 * self.voxel_edge,
            self.origin[2] + corner[2] as f64 * self.voxel_edge,
        )
    }

    pub fn half_diagonal(&self) -> f64 {
        self.voxel_edge * 3f64.sqrt() / 2.0
    }
}

/// `n` near-uniform unit directions on a Fibonacci spiral, z descending
/// from near +1 to near -1.
pub fn fibonacci_directions(n: usize) -> Vec<Unit<Vector3<f64>>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Unit::new_normalize(Vector3::new(r * phi.cos(), r * phi.sin(), z))
        })
        .collect()
}
