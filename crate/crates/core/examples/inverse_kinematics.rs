//! Solve IK for fingertip targets produced by forward kinematics and
//! report the residual errors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reachmap::arm::{
    forward_kinematics, solve_ik, ArmGeometry, CollisionModel, IkTolerance, JointAngles, RomLimits,
};

fn main() {
    let geom = ArmGeometry::default();
    let rom = RomLimits::nominal();
    let cm = CollisionModel::default();
    let tol = IkTolerance { position: 0.005, angle: 15f64.to_radians() };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut solved = 0;
    let n = 20;
    for _ in 0..n {
        let q = JointAngles::new(std::array::from_fn(|j| rng.random_range(rom.lo(j)..=rom.hi(j)))).unwrap();
        let target = forward_kinematics(&q, &geom);
        match solve_ik(&target, &rom.midpoint(), &rom, &geom, Some(&cm), tol) {
            Some(sol) => {
                solved += 1;
                let got = forward_kinematics(&sol, &geom);
                let dp = (got.position - target.position).norm() * 1000.0;
                let da = got.pointing_axis.angle(&target.pointing_axis).to_degrees();
                println!("target {:.3?}: {dp:.2} mm, {da:.2} deg", target.position.coords.as_slice());
            }
            None => println!("target {:.3?}: no solution from the mid-range seed", target.position.coords.as_slice()),
        }
    }
    println!("{solved}/{n} solved");
}
