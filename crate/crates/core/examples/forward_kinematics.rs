//! Pose the arm, print joint centers and the fingertip pose, and check
//! self-collision.

use reachmap::arm::{arm_frames, forward_kinematics, self_collides, ArmGeometry, CollisionModel, JointAngles};

fn main() -> Result<(), reachmap::arm::ArmError> {
    let geom = ArmGeometry::default();
    let cm = CollisionModel::default();
    let poses = [
        ("rest", [0.0; 7]),
        ("elbow 90", [0.0, 0.0, 0.0, 90.0, 0.0, 0.0, 0.0]),
        ("arm raised sideways", [90.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
        ("reach forward", [20.0, 80.0, 0.0, 30.0, 0.0, 0.0, 10.0]),
        ("hand into chest", [0.0, 0.0, 90.0, 130.0, 0.0, 0.0, 0.0]),
    ];
    for (name, deg) in poses {
        let q = JointAngles::from_degrees(deg)?;
        let f = arm_frames(&q, &geom);
        let pose = forward_kinematics(&q, &geom);
        println!(
            "{name:>20}: elbow {:.3?} wrist {:.3?} tip {:.3?} pointing {:.3?} collides={}",
            f.elbow.coords.as_slice(),
            f.wrist.coords.as_slice(),
            pose.position.coords.as_slice(),
            pose.pointing_axis.as_slice(),
            self_collides(&q, &geom, &cm)
        );
    }
    Ok(())
}
