use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::analysis::DEFAULT_D_MIN;
use crate::arm::{ArmConfig, ArmGeometry, CollisionModel, RomLimits};
use crate::capmap::GenerationParams;
use crate::session::UserModel;

/// Input and output locations. Relative paths resolve against the
/// directory of the config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsConfig {
    /// Skeleton recording for `rom`.
    pub recording: Option<PathBuf>,
    /// Arm config with the nominal ROM (`rom_deg`); built-in nominal values
    /// when absent.
    pub nominal_rom: Option<PathBuf>,
    /// Arm config (geometry, ROM, collision) for `build-map`, typically the
    /// output of `rom`. Falls back to `nominal_rom`.
    pub arm: Option<PathBuf>,
    /// Directory for outputs written without `--out`.
    pub out_dir: Option<PathBuf>,
}

/// Map generation settings in config-file units (degrees).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerationConfig {
    pub voxel_edge: f64,
    pub lattice_step_deg: f64,
    pub wrist_step_deg: f64,
    pub n_dir: u16,
    pub ik_position_tol: Option<f64>,
    pub ik_angle_tol_deg: f64,
    pub witnesses: usize,
    pub random_seeds: usize,
    pub collision: bool,
    pub lattice_cap: u64,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        let p = GenerationParams::default();
        Self {
            voxel_edge: p.voxel_edge,
            lattice_step_deg: p.proximal_step.to_degrees(),
            wrist_step_deg: p.wrist_step.to_degrees(),
            n_dir: p.n_dir,
            ik_position_tol: p.ik_position_tol,
            ik_angle_tol_deg: p.ik_angle_tol.to_degrees(),
            witnesses: p.witnesses,
            random_seeds: p.random_seeds,
            collision: p.collision,
            lattice_cap: p.lattice_cap,
        }
    }
}

impl GenerationConfig {
    pub fn to_params(&self, seed: u64) -> GenerationParams {
        GenerationParams {
            voxel_edge: self.voxel_edge,
            proximal_step: self.lattice_step_deg.to_radians(),
            wrist_step: self.wrist_step_deg.to_radians(),
            n_dir: self.n_dir,
            ik_position_tol: self.ik_position_tol,
            ik_angle_tol: self.ik_angle_tol_deg.to_radians(),
            witnesses: self.witnesses,
            random_seeds: self.random_seeds,
            collision: self.collision,
            seed,
            lattice_cap: self.lattice_cap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpawnConfig {
    /// Hand home position in the torso frame, meters.
    pub home: [f64; 3],
    pub per_tier: usize,
    pub d_min: f64,
}

impl Default for SpawnConfig {
    fn default() -> Self {
        Self { home: [0.0, 0.25, -0.35], per_tier: 10, d_min: DEFAULT_D_MIN }
    }
}

/// Top-level run configuration shared by all subcommands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub user_id: String,
    pub condition: String,
    pub paths: PathsConfig,
    pub generation: GenerationConfig,
    pub spawn: SpawnConfig,
    /// Score band `[a, b]` for `hull` when `--band` is not given.
    pub band: [f64; 2],
    pub user_model: UserModel,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            user_id: "user".into(),
            condition: "unrestricted".into(),
            paths: PathsConfig::default(),
            generation: GenerationConfig::default(),
            spawn: SpawnConfig::default(),
            band: [0.0, 1.0],
            user_model: UserModel { base_speed: 0.4, score_gain: 0.5, noise_sd: 0.03 },
        }
    }
}

impl RunConfig {
    /// Loads a config file, resolves relative paths against its directory
    /// and checks that referenced inputs exist.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &mut Option<PathBuf>| {
            if let Some(p) = p {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        };
        resolve(&mut cfg.paths.recording);
        resolve(&mut cfg.paths.nominal_rom);
        resolve(&mut cfg.paths.arm);
        resolve(&mut cfg.paths.out_dir);
        for p in [&cfg.paths.recording, &cfg.paths.nominal_rom, &cfg.paths.arm].into_iter().flatten() {
            if !p.exists() {
                return Err(CliError::Config(format!("referenced input {} does not exist", p.display())));
            }
        }
        Ok(cfg)
    }

    pub fn nominal_rom(&self) -> Result<RomLimits, CliError> {
        match &self.paths.nominal_rom {
            Some(p) => Ok(ArmConfig::load(p)?.rom()?),
            None => Ok(RomLimits::nominal()),
        }
    }

    /// Geometry, ROM and collision model for map generation.
    pub fn arm(&self, override_path: Option<&Path>) -> Result<(ArmGeometry, RomLimits, CollisionModel), CliError> {
        let path = override_path.or(self.paths.arm.as_deref()).or(self.paths.nominal_rom.as_deref());
        let cfg = match path {
            Some(p) => ArmConfig::load(p)?,
            None => ArmConfig::default(),
        };
        Ok((cfg.geometry(), cfg.rom()?, cfg.collision()))
    }

    pub fn output_path(&self, out: Option<&Path>, default_name: &str) -> PathBuf {
        match out {
            Some(p) => p.to_path_buf(),
            None => self.paths.out_dir.as_deref().unwrap_or(Path::new(".")).join(default_name),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_default() {
        let cfg: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.generation.to_params(0), GenerationParams::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"sede": 3}"#).is_err());
    }

    #[test]
    fn missing_input_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"paths": {"recording": "nope.jsonl"}}"#).unwrap();
        assert!(matches!(RunConfig::load(&path), Err(CliError::Config(_))));
    }
}
