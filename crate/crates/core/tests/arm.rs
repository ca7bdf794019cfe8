mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reachmap::arm::{
    forward_kinematics, self_collides, solve_ik, within_limits, ArmGeometry, CollisionModel, IkTolerance,
    JointAngles, RomLimits,
};

use common::{homogeneous_tip, random_config};

#[test]
fn fk_matches_homogeneous_transforms_on_odd_geometry() {
    let geom = ArmGeometry::new(0.31, 0.22, 0.17).unwrap();
    let rom = RomLimits::nominal();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let q = random_config(&mut rng, &rom);
        let d = (forward_kinematics(&q, &geom).position - homogeneous_tip(&q, &geom)).norm();
        assert!(d <= 1e-12, "{q:?}: {d}");
    }
}

#[test]
fn zero_pose_hangs_straight_down() {
    let geom = ArmGeometry::default();
    let pose = forward_kinematics(&JointAngles::ZERO, &geom);
    assert!((pose.position.z + geom.total_reach()).abs() < 1e-12);
    assert!(pose.position.x.abs() < 1e-12 && pose.position.y.abs() < 1e-12);
    assert!((pose.pointing_axis.z + 1.0).abs() < 1e-12);
}

#[test]
fn ik_solutions_reverify() {
    let geom = ArmGeometry::default();
    let rom = RomLimits::nominal();
    let cm = CollisionModel::default();
    let tol = IkTolerance { position: 0.005, angle: 15f64.to_radians() };
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut solved = 0;
    for _ in 0..100 {
        let q = random_config(&mut rng, &rom);
        let target = forward_kinematics(&q, &geom);
        if let Some(sol) = solve_ik(&target, &rom.midpoint(), &rom, &geom, Some(&cm), tol) {
            solved += 1;
            let got = forward_kinematics(&sol, &geom);
            assert!(within_limits(&sol, &rom));
            assert!(!self_collides(&sol, &geom, &cm));
            assert!((got.position - target.position).norm() <= tol.position);
            assert!(got.pointing_axis.angle(&target.pointing_axis) <= tol.angle);
        }
    }
    assert!(solved > 50, "{solved}");
}

#[test]
fn unreachable_target_fails() {
    let geom = ArmGeometry::default();
    let rom = RomLimits::nominal();
    let far = reachmap::arm::Pose::new(nalgebra::Point3::new(0.0, 2.0, 0.0), nalgebra::Vector3::y()).unwrap();
    let tol = IkTolerance { position: 0.005, angle: 0.2 };
    assert!(solve_ik(&far, &rom.midpoint(), &rom, &geom, None, tol).is_none());
}

#[test]
fn arm_through_torso_collides() {
    let geom = ArmGeometry::default();
    let cm = CollisionModel::default();
    // straight arm adducted across the torso
    let across = JointAngles::from_degrees([-90.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let pos = forward_kinematics(&across, &geom).position;
    assert!(pos.x < -0.3, "{pos}");
    assert!(self_collides(&across, &geom, &cm));
    assert!(!self_collides(&JointAngles::ZERO, &geom, &cm));
}

proptest! {
    #[test]
    fn joint_angles_reject_out_of_range(j in 0usize..7, v in 3.1416f64..100.0, neg: bool) {
        let mut q = [0.0; 7];
        q[j] = if neg { -v } else { v };
        prop_assert!(JointAngles::new(q).is_err());
    }

    #[test]
    fn clamp_lands_within_limits(q in proptest::array::uniform7(-3.14f64..3.14)) {
        let rom = RomLimits::nominal();
        let c = rom.clamp(&JointAngles::new(q).unwrap());
        prop_assert!(within_limits(&c, &rom));
    }

    #[test]
    fn tip_stays_within_reach(q in proptest::array::uniform7(-3.14f64..3.14)) {
        let geom = ArmGeometry::default();
        let p = forward_kinematics(&JointAngles::new(q).unwrap(), &geom).position;
        prop_assert!(p.coords.norm() <= geom.total_reach() + 1e-12);
    }
}
