use std::fmt;

use nalgebra::Point3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::capmap::{CapabilityMap, VoxelGrid};

/// Minimum home-to-balloon distance, meters.
pub const DEFAULT_D_MIN: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Difficulty {
    Easy,
    Medium,
    Hard,
}

impl Difficulty {
    pub const ALL: [Difficulty; 3] = [Difficulty::Easy, Difficulty::Medium, Difficulty::Hard];

    pub fn as_str(self) -> &'static str {
        match self {
            Difficulty::Easy => "easy",
            Difficulty::Medium => "medium",
            Difficulty::Hard => "hard",
        }
    }
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Score range and size of one tier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TierThreshold {
    pub difficulty: Difficulty,
    pub min_score: f64,
    pub max_score: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionLabels {
    pub grid: VoxelGrid,
    pub thresholds: Vec<TierThreshold>,
    /// `(voxel index, label)` in ascending index order.
    pub labels: Vec<(u32, Difficulty)>,
}

impl RegionLabels {
    pub fn label(&self, index: u32) -> Option<Difficulty> {
        self.labels.binary_search_by_key(&index, |(i, _)| *i).ok().map(|k| self.labels[k].1)
    }

    pub fn voxels(&self, tier: Difficulty) -> impl Iterator<Item = u32> + '_ {
        self.labels.iter().filter(move |(_, d)| *d == tier).map(|(i, _)| *i)
    }

    /// Labels cover exactly the occupied voxels of `map` on the same grid.
    pub fn matches(&self, map: &CapabilityMap) -> bool {
        self.grid == *map.grid()
            && self.labels.len() == map.occupied_count()
            && self.labels.iter().zip(map.occupied()).all(|((a, _), (b, _))| *a == b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("labels serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Tier sizes for `n` ranked voxels: thirds, with the remainder going to the
/// earlier tiers.
pub fn tier_sizes(n: usize) -> [usize; 3] {
    let (base, rem) = (n / 3, n % 3);
    [base + usize::from(rem > 0), base + usize::from(rem > 1), base]
}

/// Rank-based tertiles: highest scores are easy. Ties rank by voxel index.
pub fn classify_regions(map: &CapabilityMap) -> RegionLabels {
    let mut ranked: Vec<(u32, u16)> = map.occupied().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let n_dir = f64::from(map.n_dir());
    let mut labels = Vec::with_capacity(ranked.len());
    let mut thresholds = Vec::new();
    let mut start = 0;
    for (tier, size) in Difficulty::ALL.into_iter().zip(tier_sizes(ranked.len())) {
        let slice = &ranked[start..start + size];
        if let (Some(first), Some(last)) = (slice.first(), slice.last()) {
            thresholds.push(TierThreshold {
                difficulty: tier,
                min_score: f64::from(last.1) / n_dir,
                max_score: f64::from(first.1) / n_dir,
                count: size,
            });
        }
        labels.extend(slice.iter().map(|(idx, _)| (*idx, tier)));
        start += size;
    }
    labels.sort_by_key(|(idx, _)| *idx);
    RegionLabels { grid: *map.grid(), thresholds, labels }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spawn {
    pub position: [f64; 3],
    pub difficulty: Difficulty,
    pub voxel: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpawnPlan {
    pub home: [f64; 3],
    pub seed: u64,
    pub per_tier: usize,
    pub d_min: f64,
    /// Grouped by tier (easy, medium, hard), draw order within a tier.
    pub spawns: Vec<Spawn>,
}

impl SpawnPlan {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Draws `per_tier` distinct voxel centers per tier, uniformly among the
/// tier's voxels at least `d_min` from `home`.
pub fn plan_spawns(
    map: &CapabilityMap,
    labels: &RegionLabels,
    home: Point3<f64>,
    per_tier: usize,
    d_min: f64,
    seed: u64,
) -> Result<SpawnPlan, AnalysisError> {
    if per_tier == 0 {
        return Err(AnalysisError::InvalidArgument("per_tier must be at least 1".into()));
    }
    if !(d_min.is_finite() && d_min >= 0.0) || !home.iter().all(|v| v.is_finite()) {
        return Err(AnalysisError::InvalidArgument("home and d_min must be finite, d_min >= 0".into()));
    }
    if !labels.matches(map) {
        return Err(AnalysisError::LabelsMismatch);
    }
    let grid = map.grid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spawns = Vec::with_capacity(3 * per_tier);
    for tier in Difficulty::ALL {
        let eligible: Vec<u32> =
            labels.voxels(tier).filter(|&idx| (grid.center(idx) - home).norm() >= d_min).collect();
        if eligible.len() < per_tier {
            return Err(AnalysisError::InsufficientRegion { tier, eligible: eligible.len(), requested: per_tier });
        }
        for k in rand::seq::index::sample(&mut rng, eligible.len(), per_tier) {
            let voxel = eligible[k];
            let c = grid.center(voxel);
            spawns.push(Spawn { position: [c.x, c.y, c.z], difficulty: tier, voxel });
        }
    }
    Ok(SpawnPlan { home: [home.x, home.y, home.z], seed, per_tier, d_min, spawns })
}
