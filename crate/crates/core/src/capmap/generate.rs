use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arm::{
    chain_frames, solve_ik, ArmGeometry, CollisionModel, IkTolerance, JointAngles, Pose, RomLimits,
    DOF,
};

use super::{fibonacci_directions, CapMapError, CapabilityMap, GenerationParams, MapMetadata, VoxelGrid};

// Lattice membership slack, so bounds that are exact multiples of the step
// survive rounding.
const LATTICE_EPS: f64 = 1e-9;

/// Per-voxel output of the seed pass.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelSeeds {
    /// The first `W` in-limit lattice configurations (lattice order) whose
    /// fingertip lands in the voxel, colliding or not.
    pub witnesses: Vec<JointAngles>,
    /// Whether any lattice configuration landing here passes the collision
    /// filter (always true with collision checks off).
    pub collision_free: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedPass {
    pub grid: VoxelGrid,
    pub lattice_points: u64,
    pub voxels: BTreeMap<u32, VoxelSeeds>,
}

impl SeedPass {
    /// Occupied voxel indices in ascending order.
    pub fn occupied(&self) -> impl Iterator<Item = u32> + '_ {
        self.voxels.iter().filter(|(_, s)| s.collision_free).map(|(i, _)| *i)
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied().count()
    }
}

/// Values `k * step` (integer `k`) inside each joint interval. Values are
/// independent of the interval, so nested limits give nested lattices.
pub fn joint_lattice(rom: &RomLimits, params: &GenerationParams) -> [Vec<f64>; DOF] {
    std::array::from_fn(|j| {
        let step = if j < 4 { params.proximal_step } else { params.wrist_step };
        let lo = ((rom.lo(j) - LATTICE_EPS) / step).ceil() as i64;
        let hi = ((rom.hi(j) + LATTICE_EPS) / step).floor() as i64;
        (lo..=hi)
            .map(|k| (k as f64 * step).clamp(-std::f64::consts::PI, std::f64::consts::PI))
            .collect()
    })
}

pub fn fk_seed_pass(
    geom: &ArmGeometry,
    rom: &RomLimits,
    cm: &CollisionModel,
    grid: &VoxelGrid,
    params: &GenerationParams,
) -> Result<SeedPass, CapMapError> {
    params.validate()?;
    let lattice = joint_lattice(rom, params);
    let points = lattice.iter().map(|v| v.len() as u64).product::<u64>();
    if points > params.lattice_cap {
        return Err(CapMapError::LatticeTooLarge { points, cap: params.lattice_cap });
    }
    log::debug!("seed pass over {points} lattice points");

    let chunks: Vec<(f64, f64)> =
        lattice[0].iter().flat_map(|a| lattice[1].iter().map(move |b| (*a, *b))).collect();
    let w = params.witnesses;
    let partials: Vec<BTreeMap<u32, VoxelSeeds>> = chunks
        .par_iter()
        .map(|&(q1, q2)| {
            let mut local: BTreeMap<u32, VoxelSeeds> = BTreeMap::new();
            let mut q = [q1, q2, 0.0, 0.0, 0.0, 0.0, 0.0];
            for &q3 in &lattice[2] {
                q[2] = q3;
                for &q4 in &lattice[3] {
                    q[3] = q4;
                    for &q5 in &lattice[4] {
                        q[4] = q5;
                        for &q6 in &lattice[5] {
                            q[5] = q6;
                            for &q7 in &lattice[6] {
                                q[6] = q7;
                                let frames = chain_frames(&q, geom);
                                let Some(idx) = grid.voxel_of(&frames.tip) else { continue };
                                let entry = local.entry(idx).or_insert_with(|| VoxelSeeds {
                                    witnesses: Vec::with_capacity(w),
                                    collision_free: false,
                                });
                                if entry.witnesses.len() < w {
                                    entry.witnesses.push(JointAngles(q));
                                }
                                if !entry.collision_free {
                                    entry.collision_free = !params.collision || !cm.frames_collide(&frames);
                                }
                            }
                        }
                    }
                }
            }
            local
        })
        .collect();

    // merge in lattice order
    let mut voxels: BTreeMap<u32, VoxelSeeds> = BTreeMap::new();
    for part in partials {
        for (idx, seeds) in part {
            match voxels.get_mut(&idx) {
                None => {
                    voxels.insert(idx, seeds);
                }
                Some(existing) => {
                    let room = w - existing.witnesses.len();
                    existing.witnesses.extend(seeds.witnesses.into_iter().take(room));
                    existing.collision_free |= seeds.collision_free;
                }
            }
        }
    }
    Ok(SeedPass { grid: *grid, lattice_points: points, voxels })
}

fn random_config(rng: &mut ChaCha8Rng, rom: &RomLimits) -> JointAngles {
    JointAngles(std::array::from_fn(|j| {
        let (lo, hi) = (rom.lo(j), rom.hi(j));
        lo + (hi - lo) * rng.random::<f64>()
    }))
}

/// Scores every occupied voxel of `seeds`. The returned map carries full
/// provenance metadata with empty user/condition labels.
pub fn score_pass(
    seeds: &SeedPass,
    geom: &ArmGeometry,
    rom: &RomLimits,
    cm: &CollisionModel,
    params: &GenerationParams,
) -> Result<CapabilityMap, CapMapError> {
    params.validate()?;
    let grid = seeds.grid;
    let directions = fibonacci_directions(params.n_dir as usize);
    let tol = IkTolerance { position: params.position_tolerance(&grid), angle: params.ik_angle_tol };
    let collision = params.collision.then_some(cm);
    let occupied: Vec<u32> = seeds.occupied().collect();

    let scored: Vec<(u32, u16)> = occupied
        .par_iter()
        .map(|&idx| {
            let voxel = &seeds.voxels[&idx];
            let center = grid.center(idx);
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(idx as u64);
            let mut reachable = 0u16;
            for dir in &directions {
                // drawn unconditionally so the stream does not depend on
                // earlier outcomes
                let extra: Vec<JointAngles> =
                    (0..params.random_seeds).map(|_| random_config(&mut rng, rom)).collect();
                let target = Pose { position: center, pointing_axis: *dir };
                let hit = voxel
                    .witnesses
                    .iter()
                    .chain(extra.iter())
                    .any(|seed| solve_ik(&target, seed, rom, geom, collision, tol).is_some());
                if hit {
                    reachable += 1;
                }
            }
            (idx, reachable)
        })
        .collect();

    let metadata = MapMetadata {
        user_id: String::new(),
        condition: String::new(),
        geometry: *geom,
        rom: *rom,
        collision_model: cm.clone(),
        params: *params,
    };
    CapabilityMap::from_entries(grid, params.n_dir, scored.into_iter().filter(|(_, k)| *k > 0), metadata)
}

/// Seed pass followed by score pass on the default covering grid.
pub fn generate_capability_map(
    geom: &ArmGeometry,
    rom: &RomLimits,
    cm: &CollisionModel,
    params: &GenerationParams,
) -> Result<CapabilityMap, CapMapError> {
    let grid = VoxelGrid::covering(geom, params.voxel_edge)?;
    let seeds = fk_seed_pass(geom, rom, cm, &grid, params)?;
    log::info!(
        "seed pass: {} lattice points, {} occupied voxels",
        seeds.lattice_points,
        seeds.occupied_count()
    );
    let map = score_pass(&seeds, geom, rom, cm, params)?;
    log::info!("score pass: {} voxels with a reachable direction", map.occupied_count());
    Ok(map)
}
