//! Skeleton frames posed by the arm model, for fixtures and demos.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Point3;

use super::{
    Exercise, RomError, Segment, SkeletonFrame, SkeletonRecording, HIP_CENTER, NECK, RIGHT_ELBOW,
    RIGHT_HAND_TIP, RIGHT_SHOULDER, RIGHT_WRIST,
};
use crate::arm::{arm_frames, ArmGeometry, JointAngles, DOF};

/// Neck position used for synthesized frames (torso frame, meters).
pub const SYNTH_NECK: [f64; 3] = [-0.18, 0.0, 0.05];
/// Hip-center position used for synthesized frames.
pub const SYNTH_HIP_CENTER: [f64; 3] = [-0.18, 0.0, -0.50];
/// Elbow flexion held during the synthesized rotation exercise.
pub const SYNTH_ROTATION_ELBOW: f64 = FRAC_PI_2;

/// Skeleton frame with the right arm posed at `q`.
pub fn posed_frame(t: f64, q: &JointAngles, geom: &ArmGeometry) -> SkeletonFrame {
    let f = arm_frames(q, geom);
    SkeletonFrame::new(t)
        .with_joint(NECK, Point3::from(SYNTH_NECK))
        .with_joint(HIP_CENTER, Point3::from(SYNTH_HIP_CENTER))
        .with_joint(RIGHT_SHOULDER, f.shoulder)
        .with_joint(RIGHT_ELBOW, f.elbow)
        .with_joint(RIGHT_WRIST, f.wrist)
        .with_joint(RIGHT_HAND_TIP, f.tip)
}

/// `n` samples moving from `lo` to `hi` with cosine easing, so the motion
/// dwells near both extremes like a real end-of-range hold.
pub fn eased_sweep(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                lo + (hi - lo) * 0.5 * (1.0 - (PI * s).cos())
            })
            .collect(),
    }
}

/// Joint vector for exercise `joint` (0..4) at angle `a`, other joints in
/// the protocol's rest posture.
pub fn exercise_pose(joint: usize, a: f64) -> JointAngles {
    let mut q = [0.0; DOF];
    if joint == 2 {
        q[3] = SYNTH_ROTATION_ELBOW;
    }
    q[joint] = a;
    JointAngles::new(q).expect("exercise angles are within [-pi, pi]")
}

/// Recording with a neutral segment followed by one eased sweep per
/// measured exercise. `extrema[j]` is the programmed `[lo, hi]` of
/// q(j+1) in radians.
pub fn sweep_recording(
    geom: &ArmGeometry,
    extrema: [[f64; 2]; 4],
    frames_per_segment: usize,
    dt: f64,
) -> Result<SkeletonRecording, RomError> {
    let mut frames = Vec::new();
    let mut segments = Vec::new();
    let mut t = 0.0;
    let mut push = |frames: &mut Vec<SkeletonFrame>, q: JointAngles| {
        frames.push(posed_frame(t, &q, geom));
        t += dt;
    };
    for _ in 0..frames_per_segment {
        push(&mut frames, JointAngles::ZERO);
    }
    segments.push(Segment { exercise: Exercise::Neutral, from: 0, to: frames.len() });
    for (joint, exercise) in Exercise::MEASURED.into_iter().enumerate() {
        let from = frames.len();
        for a in eased_sweep(extrema[joint][0], extrema[joint][1], frames_per_segment) {
            push(&mut frames, exercise_pose(joint, a));
        }
        segments.push(Segment { exercise, from, to: frames.len() });
    }
    SkeletonRecording::new(frames, segments)
}
