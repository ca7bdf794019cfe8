//! Command-line front end backing the `reachmap` binary.
//!
//! Every subcommand reads an optional `--config` [`RunConfig`]; flags
//! override config values. Failures print one line
//! `error[<Class>]: <message>` to stderr and exit 1; usage errors exit 2.
//! Logging goes to stderr, filtered by `REACHMAP_LOG` (default `warn`).

mod config;

pub use config::{GenerationConfig, PathsConfig, RunConfig, SpawnConfig};

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::Point3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{
    classify_regions, compare_maps, comparison_csv, comparison_markdown, extract_hull, plan_spawns,
    AnalysisError, ComparisonRow, Difficulty, RegionLabels,
};
use crate::arm::{ArmError, CollisionModel, RomDegrees};
use crate::capmap::{generate_capability_map, load_map, save_map, CapMapError, CapabilityMap};
use crate::rom::{estimate_limb_lengths, extract_rom, RomError, SkeletonRecording};
use crate::session::{session_report, simulate_session, SessionError, SessionLog, UserModel};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Arm(#[from] ArmError),
    #[error(transparent)]
    Rom(#[from] RomError),
    #[error(transparent)]
    CapMap(#[from] CapMapError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Session(#[from] SessionError),
}

fn variant_name(debug: String) -> String {
    debug.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect()
}

impl CliError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    /// Machine-parsable class, e.g. `CapMapError::ChecksumMismatch`.
    pub fn class(&self) -> String {
        match self {
            CliError::Config(_) => "ConfigError".into(),
            CliError::Io { .. } => "IoError".into(),
            CliError::Arm(e) => format!("ArmError::{}", variant_name(format!("{e:?}"))),
            CliError::Rom(e) => format!("RomError::{}", variant_name(format!("{e:?}"))),
            CliError::CapMap(e) => format!("CapMapError::{}", variant_name(format!("{e:?}"))),
            CliError::Analysis(e) => format!("AnalysisError::{}", variant_name(format!("{e:?}"))),
            CliError::Session(e) => format!("SessionError::{}", variant_name(format!("{e:?}"))),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "reachmap", version, about = "Arm capability maps for range-of-motion rehabilitation")]
pub struct Cli {
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// RNG seed; overrides the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recording -> limb lengths and ROM limits (arm config JSON).
    Rom {
        /// Skeleton recording (JSON Lines); defaults to paths.recording.
        recording: Option<PathBuf>,
    },
    /// Geometry + ROM -> capability map file.
    BuildMap(BuildMapArgs),
    /// Baseline map vs other maps -> volume/dexterity reduction table.
    Compare {
        healthy: PathBuf,
        #[arg(required = true)]
        others: Vec<PathBuf>,
    },
    /// Map + score band -> convex hull OBJ.
    Hull {
        map: PathBuf,
        /// `a,b` with 0 <= a <= b <= 1, or `top` for the easy tier's band.
        #[arg(long, value_parser = parse_band)]
        band: Option<Band>,
    },
    /// Map -> easy/medium/hard labels JSON.
    Regions { map: PathBuf },
    /// Map + labels + home -> spawn plan JSON.
    Plan {
        map: PathBuf,
        /// Labels from `regions`; recomputed from the map when absent.
        labels: Option<PathBuf>,
        #[command(flatten)]
        spawn: SpawnArgs,
    },
    /// Map + user model -> simulated session log JSON.
    Simulate {
        map: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[command(flatten)]
        spawn: SpawnArgs,
        #[arg(long)]
        base_speed: Option<f64>,
        #[arg(long)]
        score_gain: Option<f64>,
        #[arg(long)]
        noise_sd: Option<f64>,
    },
    /// Session logs -> speed table (Markdown on stdout; `--out` writes CSV,
    /// or Markdown for a `.md` path).
    Report {
        #[arg(required = true)]
        logs: Vec<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct BuildMapArgs {
    /// Arm config (geometry, rom_deg, collision), e.g. the output of `rom`.
    #[arg(long)]
    pub arm: Option<PathBuf>,
    /// Worker threads; 0 uses all cores. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long)]
    pub voxel_edge: Option<f64>,
    /// Lattice step for the shoulder and elbow joints, degrees.
    #[arg(long)]
    pub lattice_step: Option<f64>,
    #[arg(long)]
    pub ndir: Option<u16>,
    #[arg(long)]
    pub user: Option<String>,
    /// unrestricted, partially_restricted or restricted.
    #[arg(long)]
    pub condition: Option<String>,
    /// Disable self-collision filtering.
    #[arg(long)]
    pub no_collision: bool,
}

#[derive(Debug, Args)]
pub struct SpawnArgs {
    /// Home position `x,y,z` in meters.
    #[arg(long, value_parser = parse_point)]
    pub home: Option<[f64; 3]>,
    #[arg(long)]
    pub per_tier: Option<usize>,
    #[arg(long)]
    pub dmin: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Band {
    Range(f64, f64),
    Top,
}

fn parse_band(s: &str) -> Result<Band, String> {
    if s == "top" {
        return Ok(Band::Top);
    }
    let (a, b) = s.split_once(',').ok_or("expected a,b or top")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok(Band::Range(a, b))
}

fn parse_point(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s.split(',').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|e| format!("{e}"))?;
    <[f64; 3]>::try_from(v).map_err(|_| "expected x,y,z".to_string())
}

/// Parameters and inputs recorded in every JSON artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub command: String,
    pub seed: u64,
    pub inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub parameters: serde_json::Value,
}

/// A JSON artifact with optional provenance alongside its payload.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(flatten)]
    pub body: T,
}

fn provenance(command: &str, seed: u64, inputs: &[&Path], parameters: serde_json::Value) -> Provenance {
    Provenance {
        generator: format!("reachmap {}", env!("CARGO_PKG_VERSION")),
        command: command.into(),
        seed,
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        parameters,
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<CapabilityMap, CliError> {
    load_map(path).map_err(|e| match e {
        CapMapError::Io(source) => CliError::io(path, source),
        other => other.into(),
    })
}

fn labels_for(map: &CapabilityMap, path: Option<&Path>) -> Result<RegionLabels, CliError> {
    match path {
        Some(p) => Ok(read_json::<Document<RegionLabels>>(p)?.body),
        None => Ok(classify_regions(map)),
    }
}

fn spawn_settings(cfg: &RunConfig, args: &SpawnArgs) -> (Point3<f64>, usize, f64) {
    (
        Point3::from(args.home.unwrap_or(cfg.spawn.home)),
        args.per_tier.unwrap_or(cfg.spawn.per_tier),
        args.dmin.unwrap_or(cfg.spawn.d_min),
    )
}

#[derive(Serialize)]
struct SkippedRecord {
    frame: usize,
    exercise: String,
    reason: String,
}

#[derive(Serialize)]
struct RomOutput {
    geometry: crate::arm::ArmGeometry,
    rom_deg: RomDegrees,
    collision: CollisionModel,
    skipped_frames: Vec<SkippedRecord>,
}

/// Runs one parsed command line.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let out = cli.out.as_deref();

    match cli.command {
        Command::Rom { recording } => {
            let path = recording
                .or_else(|| cfg.paths.recording.clone())
                .ok_or_else(|| CliError::Config("no recording given (argument or paths.recording)".into()))?;
            let rec = SkeletonRecording::load(&path)?;
            let nominal = cfg.nominal_rom()?;
            let geometry = estimate_limb_lengths(&rec)?;
            let extraction = extract_rom(&rec, &nominal)?;
            let (_, _, collision) = cfg.arm(None)?;
            let body = RomOutput {
                geometry,
                rom_deg: RomDegrees::from(&extraction.limits),
                collision,
                skipped_frames: extraction
                    .skipped
                    .iter()
                    .map(|s| SkippedRecord { frame: s.frame, exercise: s.exercise.to_string(), reason: s.reason.to_string() })
                    .collect(),
            };
            let doc = Document {
                provenance: Some(provenance("rom", cfg.seed, &[&path], serde_json::Value::Null)),
                body,
            };
            let text = serde_json::to_string_pretty(&doc).expect("rom output serializes");
            write_file(&cfg.output_path(out, "rom.json"), text.as_bytes())
        }
        Command::BuildMap(args) => {
            let (geom, rom, collision) = cfg.arm(args.arm.as_deref())?;
            let mut gen = cfg.generation;
            if let Some(v) = args.voxel_edge {
                gen.voxel_edge = v;
            }
            if let Some(v) = args.lattice_step {
                gen.lattice_step_deg = v;
            }
            if let Some(v) = args.ndir {
                gen.n_dir = v;
            }
            if args.no_collision {
                gen.collision = false;
            }
            let params = gen.to_params(cfg.seed);
            let user = args.user.unwrap_or_else(|| cfg.user_id.clone());
            let condition = args.condition.unwrap_or_else(|| cfg.condition.clone());
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(args.workers)
                .build()
                .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
            let map = pool
                .install(|| generate_capability_map(&geom, &rom, &collision, &params))?
                .with_labels(&user, &condition);
            let path = cfg.output_path(out, &format!("{user}_{condition}.rmap"));
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            save_map(&map, &path).map_err(|e| match e {
                CapMapError::Io(source) => CliError::io(&path, source),
                other => other.into(),
            })?;
            println!("{}: {} occupied voxels", path.display(), map.occupied_count());
            Ok(())
        }
        Command::Compare { healthy, others } => {
            let base = load(&healthy)?;
            let mut rows = Vec::new();
            for p in &others {
                let other = load(p)?;
                let c = compare_maps(&base, &other)?;
                let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                let meta = other.metadata();
                let user = if meta.user_id.is_empty() { stem.as_str() } else { &meta.user_id };
                let condition = if meta.condition.is_empty() { stem.as_str() } else { &meta.condition };
                rows.push(ComparisonRow::new(user, condition, &c));
            }
            let md = comparison_markdown(&rows);
            print!("{md}");
            if let Some(path) = out {
                let text = if path.extension().is_some_and(|e| e == "md") { md } else { comparison_csv(&rows) };
                write_file(path, text.as_bytes())?;
            }
            Ok(())
        }
        Command::Hull { map: map_path, band } => {
            let map = load(&map_path)?;
            let (lo, hi) = match band.unwrap_or(Band::Range(cfg.band[0], cfg.band[1])) {
                Band::Range(a, b) => {
                    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a > b {
                        return Err(AnalysisError::InvalidBand(a, b).into());
                    }
                    (a, b)
                }
                Band::Top => {
                    let labels = classify_regions(&map);
                    let easy = labels
                        .thresholds
                        .iter()
                        .find(|t| t.difficulty == Difficulty::Easy)
                        .ok_or(AnalysisError::EmptySelection(0.0, 1.0))?;
                    (easy.min_score, 1.0)
                }
            };
            let mesh = extract_hull(&map, lo, hi)?;
            let name = format!("band_{lo:.4}_{hi:.4}");
            let mut text = format!(
                "# source map: {}\n# score band: [{lo}, {hi}]\n# map seed: {}\n",
                map_path.display(),
                map.metadata().params.seed
            );
            text += &mesh.to_obj(&name);
            write_file(&cfg.output_path(out, &format!("hull_{name}.obj")), text.as_bytes())?;
            println!("hull [{lo:.4}, {hi:.4}]: {} vertices, {} triangles", mesh.vertices.len(), mesh.triangles.len());
            Ok(())
        }
        Command::Regions { map: map_path } => {
            let map = load(&map_path)?;
            let labels = classify_regions(&map);
            let doc = Document {
                provenance: Some(provenance("regions", map.metadata().params.seed, &[&map_path], serde_json::Value::Null)),
                body: labels,
            };
            let text = serde_json::to_string_pretty(&doc).expect("labels serialize");
            write_file(&cfg.output_path(out, "regions.json"), text.as_bytes())
        }
        Command::Plan { map: map_path, labels, spawn } => {
            let map = load(&map_path)?;
            let region_labels = labels_for(&map, labels.as_deref())?;
            let (home, per_tier, d_min) = spawn_settings(&cfg, &spawn);
            let plan = plan_spawns(&map, &region_labels, home, per_tier, d_min, cfg.seed)?;
            let mut inputs: Vec<&Path> = vec![&map_path];
            inputs.extend(labels.as_deref());
            let doc = Document { provenance: Some(provenance("plan", cfg.seed, &inputs, serde_json::Value::Null)), body: plan };
            let text = serde_json::to_string_pretty(&doc).expect("plan serializes");
            write_file(&cfg.output_path(out, "spawn_plan.json"), text.as_bytes())
        }
        Command::Simulate { map: map_path, labels, spawn, base_speed, score_gain, noise_sd } => {
            let map = load(&map_path)?;
            let region_labels = labels_for(&map, labels.as_deref())?;
            let (home, per_tier, d_min) = spawn_settings(&cfg, &spawn);
            let model = UserModel {
                base_speed: base_speed.unwrap_or(cfg.user_model.base_speed),
                score_gain: score_gain.unwrap_or(cfg.user_model.score_gain),
                noise_sd: noise_sd.unwrap_or(cfg.user_model.noise_sd),
            };
            let log = simulate_session(&map, &region_labels, home, &model, per_tier, d_min, cfg.seed)?;
            let mut inputs: Vec<&Path> = vec![&map_path];
            inputs.extend(labels.as_deref());
            let params = serde_json::json!({ "user_model": model, "per_tier": per_tier, "d_min": d_min });
            let default_name = format!("session_{}_{}.json", log.user_id, log.condition);
            let doc = Document { provenance: Some(provenance("simulate", cfg.seed, &inputs, params)), body: log };
            let text = serde_json::to_string_pretty(&doc).expect("log serializes");
            write_file(&cfg.output_path(out, &default_name), text.as_bytes())
        }
        Command::Report { logs } => {
            let mut sessions = Vec::with_capacity(logs.len());
            for p in &logs {
                let doc: Document<SessionLog> = read_json(p)?;
                sessions.push(doc.body);
            }
            let report = session_report(&sessions);
            let md = report.to_markdown();
            print!("{md}");
            if let Some(path) = out {
                let text = if path.extension().is_some_and(|e| e == "md") { md } else { report.to_csv() };
                write_file(path, text.as_bytes())?;
            }
            Ok(())
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("REACHMAP_LOG", "warn")).try_init();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {msg}", e.class());
            1
        }
    }
}
