//! Acceptance suite. Each test prints one `acceptance N: PASS|FAIL` line
//! (run with `--nocapture` to see them) and then asserts. Tests hold a
//! shared lock so runtime budgets are measured without contention.

mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use nalgebra::Point3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reachmap::analysis::{
    classify_regions, dexterity_reduction, extract_hull, volume_reduction, Difficulty,
};
use reachmap::arm::{
    forward_kinematics, solve_ik, within_limits, ArmGeometry, CollisionModel, IkTolerance,
    JointAngles, RomLimits,
};
use reachmap::capmap::{
    fk_seed_pass, generate_capability_map, CapabilityMap, GenerationParams, MapMetadata, VoxelGrid,
};
use reachmap::rom::synth::{exercise_pose, posed_frame, sweep_recording};
use reachmap::rom::{extract_rom, SkeletonRecording};
use reachmap::session::{session_report, simulate_session, Condition, PopEvent, SessionLog, UserModel};

use common::*;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(n: u32, pass: bool, detail: &str) {
    println!("acceptance {n}: {} - {detail}", if pass { "PASS" } else { "FAIL" });
}

#[test]
fn acceptance_01_fk_oracle() {
    let _g = serial();
    let geom = ArmGeometry::default();
    let rom = RomLimits::nominal();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let configs: Vec<JointAngles> = (0..1000).map(|_| random_config(&mut rng, &rom)).collect();
    let t = Instant::now();
    let worst = configs
        .iter()
        .map(|q| (forward_kinematics(q, &geom).position - homogeneous_tip(q, &geom)).norm())
        .fold(0.0, f64::max);
    let elapsed = t.elapsed();
    let pass = worst <= 1e-9 && elapsed < Duration::from_secs(1);
    report(1, pass, &format!("1000 configs, max deviation {worst:.2e} m (<= 1e-9), {elapsed:.2?} (< 1 s)"));
    assert!(pass);
}

#[test]
fn acceptance_02_ik_round_trip() {
    let _g = serial();
    let geom = ArmGeometry::default();
    let rom = RomLimits::nominal();
    let cm = CollisionModel::default();
    let tol = IkTolerance { position: 0.005, angle: 15f64.to_radians() };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    // colliding configurations give targets the solver must refuse
    let configs: Vec<JointAngles> = std::iter::repeat_with(|| random_config(&mut rng, &rom))
        .filter(|q| !reachmap::arm::self_collides(q, &geom, &cm))
        .take(200)
        .collect();

    let verify = |target: &reachmap::arm::Pose, sol: &JointAngles| {
        let got = forward_kinematics(sol, &geom);
        within_limits(sol, &rom)
            && !reachmap::arm::self_collides(sol, &geom, &cm)
            && (got.position - target.position).norm() <= tol.position
            && got.pointing_axis.angle(&target.pointing_axis) <= tol.angle
    };

    let t = Instant::now();
    let (mut solved, mut verified) = (0, 0);
    for q in &configs {
        let target = forward_kinematics(q, &geom);
        if let Some(sol) = solve_ik(&target, q, &rom, &geom, Some(&cm), tol) {
            solved += 1;
            verified += usize::from(verify(&target, &sol));
        }
    }
    let elapsed = t.elapsed();

    // harder, non-gating variants: mid-range seed and a perturbed seed
    let mut mid = 0;
    let mut perturbed = 0;
    let mut prng = ChaCha8Rng::seed_from_u64(20);
    for q in &configs {
        let target = forward_kinematics(q, &geom);
        mid += usize::from(solve_ik(&target, &rom.midpoint(), &rom, &geom, Some(&cm), tol).is_some_and(|s| verify(&target, &s)));
        let seed = rom.clamp(&JointAngles::new(std::array::from_fn(|j| {
            (q.as_array()[j] + prng.random_range(-0.3..=0.3)).clamp(-std::f64::consts::PI, std::f64::consts::PI)
        })).unwrap());
        perturbed += usize::from(solve_ik(&target, &seed, &rom, &geom, Some(&cm), tol).is_some_and(|s| verify(&target, &s)));
    }

    let rate = solved as f64 / 200.0;
    let pass = rate >= 0.99 && verified == solved && elapsed < Duration::from_secs(30);
    report(
        2,
        pass,
        &format!(
            "collision-free targets seeded at the generating config: {solved}/200 solved (>= 99%), {verified}/{solved} re-verified, {elapsed:.2?} (< 30 s); \
             diagnostics: mid-range seed {mid}/200, seed perturbed by up to 0.3 rad {perturbed}/200"
        ),
    );
    assert!(pass);
}

#[test]
fn acceptance_03_voxel_subset_monotonicity() {
    let _g = serial();
    let geom = ArmGeometry::default();
    let cm = CollisionModel::default();
    let params = coarse_params();
    let grid = VoxelGrid::covering(&geom, params.voxel_edge).unwrap();
    let t = Instant::now();
    let [nominal, partial, restricted] = nested_roms();
    let occ = |rom: &RomLimits| -> Vec<u32> { fk_seed_pass(&geom, rom, &cm, &grid, &params).unwrap().occupied().collect() };
    let (o_nom, o_par, o_res) = (occ(&nominal), occ(&partial), occ(&restricted));
    let subset = |a: &[u32], b: &[u32]| a.iter().all(|v| b.binary_search(v).is_ok());
    let nested = subset(&o_par, &o_nom) && subset(&o_res, &o_par);
    let as_map = |occ: &[u32]| CapabilityMap::from_entries(grid, 1, occ.iter().map(|&i| (i, 1)), MapMetadata::default()).unwrap();
    let (m_nom, m_par, m_res) = (as_map(&o_nom), as_map(&o_par), as_map(&o_res));
    let v_par = volume_reduction(&m_nom, &m_par).unwrap();
    let v_res = volume_reduction(&m_nom, &m_res).unwrap();
    let elapsed = t.elapsed();
    let pass = nested && v_res >= v_par && v_par >= 0.0 && elapsed < Duration::from_secs(60);
    report(
        3,
        pass,
        &format!(
            "occupancy {} / {} / {} voxels, nested = {nested}; volume reduction restricted {v_res:.2}% >= partial {v_par:.2}% >= 0; {elapsed:.2?} (< 60 s)",
            o_nom.len(),
            o_par.len(),
            o_res.len()
        ),
    );
    assert!(pass);
}

#[test]
fn acceptance_04_dexterity_arithmetic() {
    let _g = serial();
    let grid = VoxelGrid::new([0.0; 3], 0.1, [20, 20, 20]).unwrap();
    // 250 common voxels: healthy numerators sum to 200 * 40, other to 177 * 40
    let healthy: Vec<(u32, u16)> = (0..250).map(|i| (i * 3, 32)).collect();
    let mut other: Vec<(u32, u16)> = (0..250).map(|i| (i * 3, 28)).collect();
    for e in other.iter_mut().take(80) {
        e.1 += 1;
    }
    // plus voxels only one map has, which must not count
    let mut healthy_extra = healthy.clone();
    healthy_extra.push((7000, 40));
    let m_h = CapabilityMap::from_entries(grid, 40, healthy_extra, MapMetadata::default()).unwrap();
    let m_o = CapabilityMap::from_entries(grid, 40, other, MapMetadata::default()).unwrap();
    let sum = |m: &CapabilityMap| (0..250u32).map(|i| m.score(i * 3).unwrap()).sum::<f64>();
    let (sh, so) = (sum(&m_h), sum(&m_o));
    let (d, common) = dexterity_reduction(&m_h, &m_o).unwrap();
    let (same, _) = dexterity_reduction(&m_h, &m_h).unwrap();
    let pass = (d - 11.50).abs() <= 0.005 && same == 0.0 && common == 250;
    report(4, pass, &format!("sums {sh:.1} vs {so:.1} over {common} common voxels -> {d:.4}% (11.50 +/- 0.005); identical maps -> {same}"));
    assert!(pass);
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_reachmap")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run_cli(args: &[&str]) -> std::process::Output {
    let out = Command::new(bin()).args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "reachmap {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn acceptance_05_determinism() {
    let _g = serial();
    let dir = tempfile::tempdir().unwrap();
    let cfg = data("demo_config.json");
    let cfg = cfg.to_str().unwrap();
    let mut files = Vec::new();
    for (run, workers) in [(0, "1"), (1, "1"), (2, "4"), (3, "4")] {
        let path = dir.path().join(format!("run{run}_w{workers}.rmap"));
        run_cli(&["--config", cfg, "build-map", "--workers", workers, "--out", path.to_str().unwrap()]);
        files.push(std::fs::read(&path).unwrap());
    }
    let identical = files.windows(2).all(|w| w[0] == w[1]);

    let geom = ArmGeometry::default();
    let cm = CollisionModel::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut round_trips = 0;
    for k in 0..10 {
        // small random sub-ROMs keep generation quick
        let nominal = RomLimits::nominal();
        let limits: [[f64; 2]; 7] = std::array::from_fn(|j| {
            let width = if j < 4 { 0.6 } else { 0.3 };
            let lo = rng.random_range(nominal.lo(j)..=nominal.hi(j) - width);
            [lo, lo + width]
        });
        let rom = RomLimits::new(limits).unwrap();
        let params = GenerationParams { n_dir: 8, seed: k, ..coarse_params() };
        let m = generate_capability_map(&geom, &rom, &cm, &params).unwrap().with_labels("u", "restricted");
        let path = dir.path().join(format!("m{k}.rmap"));
        reachmap::capmap::save_map(&m, &path).unwrap();
        let back = reachmap::capmap::load_map(&path).unwrap();
        if back == m && back.to_bytes() == std::fs::read(&path).unwrap() {
            round_trips += 1;
        }
    }
    let pass = identical && round_trips == 10;
    report(
        5,
        pass,
        &format!("build-map x2 at 1 worker and x2 at 4 workers byte-identical = {identical} ({} bytes); load(save(m)) == m on {round_trips}/10 maps", files[0].len()),
    );
    assert!(pass);
}

#[test]
fn acceptance_06_hull_correctness() {
    let _g = serial();
    let grid = VoxelGrid::new([-0.3, -0.3, -0.3], 0.1, [6, 6, 6]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let t = Instant::now();
    let (mut contained, mut watertight, mut matched) = (0, 0, 0);
    for _ in 0..50 {
        let size = rng.random_range(1..=200usize);
        let picks = rand::seq::index::sample(&mut rng, grid.voxel_count(), size);
        let entries: Vec<(u32, u16)> = picks.iter().map(|i| (i as u32, rng.random_range(1..=16))).collect();
        let map = CapabilityMap::from_entries(grid, 16, entries, MapMetadata::default()).unwrap();
        let mesh = extract_hull(&map, 0.0, 1.0).unwrap();

        let corners: Vec<[i64; 3]> = map
            .occupied()
            .flat_map(|(idx, _)| {
                let [i, j, k] = grid.ijk(idx).map(i64::from);
                (0..8).map(move |c| [i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1)])
            })
            .collect();
        contained += usize::from(corners.iter().all(|c| mesh.signed_distance(&grid.corner_point(*c)) <= 1e-9));
        watertight += usize::from(mesh.is_watertight());
        let mesh_vertices: std::collections::BTreeSet<[i64; 3]> = mesh
            .vertices
            .iter()
            .map(|v| {
                let rel = (v.coords - Point3::from(grid.origin).coords) / grid.voxel_edge;
                [rel.x.round() as i64, rel.y.round() as i64, rel.z.round() as i64]
            })
            .collect();
        matched += usize::from(mesh_vertices == brute_force_hull_vertices(&corners) && mesh_vertices.len() == mesh.vertices.len());
    }
    let elapsed = t.elapsed();
    let pass = contained == 50 && watertight == 50 && matched == 50 && elapsed < Duration::from_secs(10);
    report(
        6,
        pass,
        &format!("50 subsets: corners contained {contained}/50, watertight {watertight}/50, brute-force vertex sets matched {matched}/50, {elapsed:.2?} (< 10 s)"),
    );
    assert!(pass);
}

#[test]
fn acceptance_07_rom_extraction() {
    let _g = serial();
    let geom = ArmGeometry::default();
    let programmed = [[10.0, 120.0], [-20.0, 110.0], [-50.0, 40.0], [5.0, 130.0]];
    let rec = sweep_recording(&geom, programmed.map(|[a, b]: [f64; 2]| [a.to_radians(), b.to_radians()]), 200, 1.0 / 30.0).unwrap();
    let limits = extract_rom(&rec, &RomLimits::nominal()).unwrap().limits.to_degrees();
    let tolerance = [1.0, 1.0, 2.0, 1.0];
    let errors: Vec<f64> = (0..4)
        .map(|j| (limits[j][0] - programmed[j][0]).abs().max((limits[j][1] - programmed[j][1]).abs()))
        .collect();
    let sweeps_ok = (0..4).all(|j| errors[j] <= tolerance[j]);

    // 2% of abduction frames (4 of 200) spiked to 170 degrees
    let mut frames = rec.frames().to_vec();
    let seg = rec.segments().iter().find(|s| s.exercise == reachmap::rom::Exercise::ShoulderAbductionAdduction).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in rand::seq::index::sample(&mut rng, seg.to - seg.from, 4) {
        let i = seg.from + k;
        frames[i] = posed_frame(frames[i].t, &exercise_pose(0, 170f64.to_radians()), &geom);
    }
    let spiked = SkeletonRecording::new(frames, rec.segments().to_vec()).unwrap();
    let hi = extract_rom(&spiked, &RomLimits::nominal()).unwrap().limits.to_degrees()[0][1];
    let outlier_ok = 170.0 - hi >= 40.0;
    let pass = sweeps_ok && outlier_ok;
    report(
        7,
        pass,
        &format!(
            "max endpoint error q1 {:.3}, q2 {:.3}, q4 {:.3} deg (<= 1), q3 {:.3} deg (<= 2); outlier fixture max {hi:.2} deg, {:.2} below the 170 deg spike (>= 40)",
            errors[0], errors[1], errors[3], errors[2], 170.0 - hi
        ),
    );
    assert!(pass);
}

#[test]
fn acceptance_08_speed_analytics() {
    let _g = serial();
    // ten unrestricted/easy events with speeds averaging 0.66 m/s
    let speeds = [0.58, 0.61, 0.63, 0.65, 0.66, 0.66, 0.67, 0.69, 0.71, 0.74];
    let mut t = 0.0;
    let events: Vec<PopEvent> = speeds
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let d = 0.2 + 0.03 * i as f64;
            let e = PopEvent { position: [d, 0.0, 0.0], difficulty: Difficulty::Easy, t_spawn: t, t_pop: t + d / v };
            t = e.t_pop + 1.0;
            e
        })
        .collect();
    let log = SessionLog { user_id: "user1".into(), condition: Condition::Unrestricted, home: [0.0; 3], events };
    let cell = session_report(&[log]).cells[0].mean_speed;
    let cell_ok = (cell - 0.66).abs() <= 1e-9;

    let geom = ArmGeometry::default();
    let cm = CollisionModel::default();
    let params = coarse_params();
    let home = Point3::new(0.0, 0.25, -0.35);
    let roms = nested_roms();
    let mut logs = Vec::new();
    for ((rom, condition), base) in roms.iter().zip(Condition::ALL).zip([0.45, 0.40, 0.35]) {
        let map = generate_capability_map(&geom, rom, &cm, &params).unwrap().with_labels("sim", condition.as_str());
        let labels = classify_regions(&map);
        let model = UserModel { base_speed: base, score_gain: 0.4, noise_sd: 0.0 };
        logs.push(simulate_session(&map, &labels, home, &model, 10, 0.15, 8).unwrap());
    }
    let r = session_report(&logs);
    let grid: Vec<[f64; 3]> = Condition::ALL
        .iter()
        .map(|c| Difficulty::ALL.map(|d| r.cell("sim", *c, d).unwrap().mean_speed))
        .collect();
    let rows_ok = grid.iter().all(|row| row[0] >= row[1] && row[1] >= row[2]);
    let cols_ok = (0..3).all(|d| grid[0][d] >= grid[1][d] && grid[1][d] >= grid[2][d]);
    let pass = cell_ok && rows_ok && cols_ok;
    let table: Vec<String> = grid.iter().map(|row| format!("{:.3}/{:.3}/{:.3}", row[0], row[1], row[2])).collect();
    report(
        8,
        pass,
        &format!("(unrestricted, easy) cell {cell:.12} (0.66 +/- 1e-9); simulated easy/med/hard by condition {} non-increasing across difficulty = {rows_ok}, across restriction = {cols_ok}", table.join(", ")),
    );
    assert!(pass);
}

#[test]
fn acceptance_09_collision_filter_property() {
    let _g = serial();
    let geom = ArmGeometry::default();
    let cm = CollisionModel::default();
    let rom = nested_roms()[1];
    let on = generate_capability_map(&geom, &rom, &cm, &coarse_params()).unwrap();
    let off = generate_capability_map(&geom, &rom, &cm, &GenerationParams { collision: false, ..coarse_params() }).unwrap();
    let superset = on.occupied().all(|(idx, _)| off.score(idx).is_some());
    let lower = on.occupied().filter(|(idx, k)| off.numerator(*idx) < *k).count();
    let pass = superset && lower == 0 && off.occupied_count() >= on.occupied_count();
    report(
        9,
        pass,
        &format!("collision on {} voxels, off {} voxels; off covers on = {superset}; voxels with lower score when off: {lower}", on.occupied_count(), off.occupied_count()),
    );
    assert!(pass);
}

#[test]
fn acceptance_10_end_to_end_smoke() {
    let _g = serial();
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_owned();
    let cfg = data("demo_config.json");
    let cfg = cfg.to_str().unwrap();
    let t = Instant::now();
    run_cli(&["--config", cfg, "rom", "--out", &p("rom.json")]);
    run_cli(&["--config", cfg, "build-map", "--out", &p("unrestricted.rmap")]);
    run_cli(&["--config", cfg, "build-map", "--arm", &p("rom.json"), "--condition", "restricted", "--out", &p("restricted.rmap")]);
    run_cli(&["compare", &p("unrestricted.rmap"), &p("restricted.rmap"), "--out", &p("comparison.csv")]);
    run_cli(&["--config", cfg, "hull", &p("unrestricted.rmap"), "--band", "0,1", "--out", &p("workspace.obj")]);
    run_cli(&["--config", cfg, "hull", &p("unrestricted.rmap"), "--band", "top", "--out", &p("top.obj")]);
    run_cli(&["--config", cfg, "regions", &p("unrestricted.rmap"), "--out", &p("regions.json")]);
    run_cli(&["--config", cfg, "plan", &p("unrestricted.rmap"), &p("regions.json"), "--per-tier", "10", "--out", &p("plan.json")]);
    run_cli(&["--config", cfg, "simulate", &p("unrestricted.rmap"), "--labels", &p("regions.json"), "--out", &p("s_unrestricted.json")]);
    run_cli(&["--config", cfg, "simulate", &p("restricted.rmap"), "--out", &p("s_restricted.json")]);
    let out = run_cli(&["report", &p("s_unrestricted.json"), &p("s_restricted.json"), "--out", &p("report.md")]);
    let elapsed = t.elapsed();

    let map_ok = reachmap::capmap::load_map(p("unrestricted.rmap")).is_ok();
    let obj_ok = ["workspace.obj", "top.obj"]
        .iter()
        .all(|f| std::fs::read_to_string(p(f)).is_ok_and(|s| s.lines().any(|l| l.starts_with("f "))));
    let labels_ok = std::fs::read_to_string(p("regions.json")).is_ok_and(|s| s.contains("\"easy\"") && s.contains("\"hard\""));
    let plan: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p("plan.json")).unwrap()).unwrap();
    let spawns = plan["spawns"].as_array().unwrap();
    let plan_ok = spawns.len() == 30
        && ["easy", "medium", "hard"].iter().all(|d| spawns.iter().filter(|s| s["difficulty"] == *d).count() == 10);
    let session_ok = std::fs::read_to_string(p("s_unrestricted.json")).is_ok_and(|s| s.contains("\"events\""));
    let md = String::from_utf8_lossy(&out.stdout);
    let table_ok = md.lines().next().is_some_and(|h| h.matches("(m/s)").count() == 9) && std::fs::read_to_string(p("report.md")).is_ok();
    let pass = map_ok && obj_ok && labels_ok && plan_ok && session_ok && table_ok && elapsed < Duration::from_secs(300);
    report(
        10,
        pass,
        &format!("CLI pipeline in {elapsed:.2?} (< 5 min): map {map_ok}, OBJ hulls {obj_ok}, labels {labels_ok}, 10 spawns per tier {plan_ok}, session {session_ok}, speed table {table_ok}"),
    );
    assert!(pass);
}
