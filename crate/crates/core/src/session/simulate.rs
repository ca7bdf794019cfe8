use nalgebra::Point3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{Condition, PopEvent, SessionError, SessionLog};
use crate::analysis::{plan_spawns, RegionLabels};
use crate::capmap::CapabilityMap;

/// Floor on simulated speed, m/s.
pub const MIN_SPEED: f64 = 1e-3;
/// Pause between a pop and the next spawn, seconds.
pub const INTER_SPAWN_GAP: f64 = 1.0;

/// Reaching speed `base_speed + score_gain * voxel_score + N(0, noise_sd)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserModel {
    pub base_speed: f64,
    pub score_gain: f64,
    pub noise_sd: f64,
}

impl UserModel {
    fn validate(&self) -> Result<(), SessionError> {
        let ok = self.base_speed.is_finite()
            && self.base_speed > 0.0
            && self.score_gain.is_finite()
            && self.score_gain >= 0.0
            && self.noise_sd.is_finite()
            && self.noise_sd >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(SessionError::InvalidArgument(format!("invalid user model {self:?}")))
        }
    }
}

/// Plans spawns on `map` and plays them back one at a time. User id and
/// condition come from the map's metadata labels. `d_min` must be positive
/// so every reach has a non-zero distance.
#[allow(clippy::too_many_arguments)]
pub fn simulate_session(
    map: &CapabilityMap,
    labels: &RegionLabels,
    home: Point3<f64>,
    model: &UserModel,
    per_tier: usize,
    d_min: f64,
    seed: u64,
) -> Result<SessionLog, SessionError> {
    model.validate()?;
    if !(d_min > 0.0) {
        return Err(SessionError::InvalidArgument("d_min must be positive for simulation".into()));
    }
    let condition: Condition = map.metadata().condition.parse()?;
    let plan = plan_spawns(map, labels, home, per_tier, d_min, seed)?;

    let noise = Normal::new(0.0, model.noise_sd).expect("validated sd");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut t = 0.0;
    let mut events = Vec::with_capacity(plan.spawns.len());
    for s in &plan.spawns {
        let score = map.score(s.voxel).expect("spawn voxels are occupied");
        let speed = (model.base_speed + model.score_gain * score + noise.sample(&mut rng)).max(MIN_SPEED);
        let distance = (Point3::from(s.position) - home).norm();
        let t_pop = t + distance / speed;
        events.push(PopEvent { position: s.position, difficulty: s.difficulty, t_spawn: t, t_pop });
        t = t_pop + INTER_SPAWN_GAP;
    }
    Ok(SessionLog { user_id: map.metadata().user_id.clone(), condition, home: plan.home, events })
}
