use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ArmError, ArmGeometry, CollisionModel, RomLimits};

/// Joint limits in degrees, keyed by joint name. This is the on-disk form
/// of [`RomLimits`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RomDegrees {
    pub q1: [f64; 2],
    pub q2: [f64; 2],
    pub q3: [f64; 2],
    pub q4: [f64; 2],
    pub q5: [f64; 2],
    pub q6: [f64; 2],
    pub q7: [f64; 2],
}

impl RomDegrees {
    pub fn to_limits(&self) -> Result<RomLimits, ArmError> {
        RomLimits::from_degrees([self.q1, self.q2, self.q3, self.q4, self.q5, self.q6, self.q7])
    }
}

impl From<&RomLimits> for RomDegrees {
    fn from(r: &RomLimits) -> Self {
        let [q1, q2, q3, q4, q5, q6, q7] = r.to_degrees();
        Self { q1, q2, q3, q4, q5, q6, q7 }
    }
}

/// Arm configuration document. Every section is optional and falls back to
/// the defaults (0.30/0.25/0.18 m links, nominal ROM, default collision
/// volumes).
///
/// ```json
/// {
///   "geometry": {"upper_arm_length": 0.30, "forearm_length": 0.25, "hand_length": 0.18},
///   "rom_deg": {"q1": [-30, 180], "q2": [-60, 180], "q3": [-90, 70], "q4": [0, 150],
///               "q5": [-80, 80], "q6": [-30, 20], "q7": [-70, 80]},
///   "collision": {
///     "torso": {"a": [-0.18, 0, -0.55], "b": [-0.18, 0, -0.05], "radius": 0.13},
///     "head": {"center": [-0.18, 0, 0.25], "radius": 0.10},
///     "upper_arm_radius": 0.045, "forearm_radius": 0.04
///   }
/// }
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ArmConfig {
    #[serde(default)]
    pub geometry: Option<ArmGeometry>,
    #[serde(default)]
    pub rom_deg: Option<RomDegrees>,
    #[serde(default)]
    pub collision: Option<CollisionModel>,
}

impl ArmConfig {
    pub fn from_json(text: &str) -> Result<Self, ArmError> {
        serde_json::from_str(text).map_err(|e| ArmError::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ArmError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| ArmError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn geometry(&self) -> ArmGeometry {
        self.geometry.unwrap_or_default()
    }

    pub fn rom(&self) -> Result<RomLimits, ArmError> {
        self.rom_deg.map_or_else(|| Ok(RomLimits::nominal()), |r| r.to_limits())
    }

    pub fn collision(&self) -> CollisionModel {
        self.collision.clone().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_convert_on_load() {
        let cfg = ArmConfig::from_json(
            r#"{"rom_deg": {"q1": [0, 90], "q2": [0, 0], "q3": [0, 0], "q4": [0, 0],
                            "q5": [0, 0], "q6": [0, 0], "q7": [-45, 45]}}"#,
        )
        .unwrap();
        let rom = cfg.rom().unwrap();
        assert!((rom.hi(0) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((rom.lo(6) + std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(cfg.geometry(), ArmGeometry::default());
    }

    #[test]
    fn rejects_bad_collision_radius() {
        let err = ArmConfig::from_json(
            r#"{"collision": {"torso": {"a": [0,0,0], "b": [0,0,1], "radius": -1},
                              "head": {"center": [0,0,2], "radius": 0.1},
                              "upper_arm_radius": 0.04, "forearm_radius": 0.04}}"#,
        );
        assert!(err.is_err());
    }

    #[test]
    fn empty_document_uses_defaults() {
        let cfg = ArmConfig::from_json("{}").unwrap();
        assert_eq!(cfg.rom().unwrap(), RomLimits::nominal());
        assert_eq!(cfg.collision(), CollisionModel::default());
    }
}
