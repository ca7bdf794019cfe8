//! Range-of-motion capture from skeleton-tracking recordings.
//!
//! Limb lengths come from the neutral pose. Joint angles for q1..q4 are
//! computed per frame with goniometer-style plane projections against a
//! torso reference built from the neck→hip_center vector; measured
//! extrema are the 2nd/98th percentiles of those angles. The wrist DoFs
//! (q5..q7) cannot be tracked reliably and are copied from the nominal
//! limits.

mod recording;
pub mod synth;

pub use recording::{
    Exercise, Segment, SkeletonFrame, SkeletonRecording, HIP_CENTER, NECK, RIGHT_ELBOW,
    RIGHT_HAND_TIP, RIGHT_SHOULDER, RIGHT_WRIST,
};

use std::f64::consts::PI;

use nalgebra::{Point3, Vector3};
use thiserror::Error;

use crate::arm::{ArmGeometry, RomLimits};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RomError {
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid recording: {0}")]
    InvalidRecording(String),
    #[error("recording has no {0} segment")]
    MissingSegment(Exercise),
    #[error("frame {frame} is missing joint {joint}")]
    MissingJoint { frame: usize, joint: &'static str },
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("rotation angle undefined: elbow flexion {flexion_deg:.1} deg is below 45 deg")]
    ElbowNotFlexed { flexion_deg: f64 },
    #[error("{exercise}: only {valid} valid frames, need at least {required}")]
    InsufficientData { exercise: Exercise, valid: usize, required: usize },
    #[error("{0} has no associated joint angle")]
    NotMeasured(Exercise),
}

/// Minimum valid frames per exercise segment.
pub const MIN_VALID_FRAMES: usize = 10;
/// Lower and upper percentiles used as ROM extrema.
pub const ROM_PERCENTILES: (f64, f64) = (0.02, 0.98);
/// Rotation angles need at least this much elbow flexion.
pub const MIN_ROTATION_FLEXION: f64 = PI / 4.0;

fn require(frame: &SkeletonFrame, index: usize, joint: &'static str) -> Result<Point3<f64>, RomError> {
    frame.joint(joint).ok_or(RomError::MissingJoint { frame: index, joint })
}

fn unit(v: Vector3<f64>, what: &str) -> Result<Vector3<f64>, RomError> {
    let n = v.norm();
    if !(n > 1e-9) {
        return Err(RomError::Degenerate(format!("{what} has zero length")));
    }
    Ok(v / n)
}

/// Mean neutral-pose link lengths.
pub fn estimate_limb_lengths(rec: &SkeletonRecording) -> Result<ArmGeometry, RomError> {
    let indices = rec.frame_indices(Exercise::Neutral);
    if indices.is_empty() {
        return Err(RomError::MissingSegment(Exercise::Neutral));
    }
    let mut sums = [0.0; 3];
    for &i in &indices {
        let f = &rec.frames()[i];
        let s = require(f, i, RIGHT_SHOULDER)?;
        let e = require(f, i, RIGHT_ELBOW)?;
        let w = require(f, i, RIGHT_WRIST)?;
        let t = require(f, i, RIGHT_HAND_TIP)?;
        sums[0] += (e - s).norm();
        sums[1] += (w - e).norm();
        sums[2] += (t - w).norm();
    }
    let n = indices.len() as f64;
    ArmGeometry::new(sums[0] / n, sums[1] / n, sums[2] / n)
        .map_err(|e| RomError::Degenerate(e.to_string()))
}

/// Orthonormal torso basis: lateral (+X-like), anterior (+Y-like), down.
struct TorsoBasis {
    lateral: Vector3<f64>,
    anterior: Vector3<f64>,
    down: Vector3<f64>,
}

impl TorsoBasis {
    fn from_frame(frame: &SkeletonFrame, index: usize) -> Result<Self, RomError> {
        let neck = require(frame, index, NECK)?;
        let hip = require(frame, index, HIP_CENTER)?;
        let down = unit(hip - neck, "neck→hip_center")?;
        let x = Vector3::x();
        let lateral = unit(x - down * x.dot(&down), "lateral axis")?;
        let anterior = lateral.cross(&down);
        Ok(Self { lateral, anterior, down })
    }
}

/// Signed angle from "down" to `v` inside the plane spanned by `axis` and
/// up, positive toward `axis`.
fn plane_angle(v: &Vector3<f64>, axis: &Vector3<f64>, basis: &TorsoBasis, what: &str) -> Result<f64, RomError> {
    let a = v.dot(axis);
    let b = -v.dot(&basis.down);
    if (a * a + b * b).sqrt() <= 1e-9 * v.norm().max(1e-300) {
        return Err(RomError::Degenerate(format!("{what} is perpendicular to the measurement plane")));
    }
    // down is (0, -1) in (a, b) coordinates
    Ok(a.atan2(-b))
}

fn elbow_flexion(s: Point3<f64>, e: Point3<f64>, w: Point3<f64>) -> Result<f64, RomError> {
    let to_shoulder = unit(s - e, "elbow→shoulder")?;
    let to_wrist = unit(w - e, "elbow→wrist")?;
    let inner = to_shoulder.cross(&to_wrist).norm().atan2(to_shoulder.dot(&to_wrist));
    Ok(PI - inner)
}

/// Per-frame joint angle (radians) for one measured exercise.
///
/// `index` is only used to label errors.
pub fn exercise_angle(frame: &SkeletonFrame, index: usize, exercise: Exercise) -> Result<f64, RomError> {
    let shoulder = require(frame, index, RIGHT_SHOULDER)?;
    let elbow = require(frame, index, RIGHT_ELBOW)?;
    match exercise {
        Exercise::Neutral => Err(RomError::NotMeasured(exercise)),
        Exercise::ShoulderAbductionAdduction | Exercise::ShoulderFlexionExtension => {
            let basis = TorsoBasis::from_frame(frame, index)?;
            let humerus = unit(elbow - shoulder, "shoulder→elbow")?;
            if exercise == Exercise::ShoulderAbductionAdduction {
                plane_angle(&humerus, &basis.lateral, &basis, "upper arm")
            } else {
                plane_angle(&humerus, &basis.anterior, &basis, "upper arm")
            }
        }
        Exercise::ShoulderRotation => {
            let wrist = require(frame, index, RIGHT_WRIST)?;
            let flexion = elbow_flexion(shoulder, elbow, wrist)?;
            if flexion < MIN_ROTATION_FLEXION {
                return Err(RomError::ElbowNotFlexed { flexion_deg: flexion.to_degrees() });
            }
            let basis = TorsoBasis::from_frame(frame, index)?;
            let h = unit(elbow - shoulder, "shoulder→elbow")?;
            let reference = unit(basis.anterior - h * basis.anterior.dot(&h), "sagittal reference")?;
            let forearm = wrist - elbow;
            let perp = unit(forearm - h * forearm.dot(&h), "forearm projection")?;
            Ok(perp.cross(&reference).dot(&h).atan2(reference.dot(&perp)))
        }
        Exercise::ElbowFlexionExtension => {
            let wrist = require(frame, index, RIGHT_WRIST)?;
            elbow_flexion(shoulder, elbow, wrist)
        }
    }
}

/// Linear-interpolation percentile of sorted data, `p` in [0, 1].
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = p.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedFrame {
    pub frame: usize,
    pub exercise: Exercise,
    pub reason: RomError,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RomExtraction {
    pub limits: RomLimits,
    /// Frames excluded from the angle statistics, with the reason.
    pub skipped: Vec<SkippedFrame>,
}

/// Per-exercise angle series over the labeled frames; invalid frames are
/// skipped and reported.
pub fn exercise_series(
    rec: &SkeletonRecording,
    exercise: Exercise,
    skipped: &mut Vec<SkippedFrame>,
) -> Vec<f64> {
    rec.frame_indices(exercise)
        .into_iter()
        .filter_map(|i| match exercise_angle(&rec.frames()[i], i, exercise) {
            Ok(a) => Some(a),
            Err(reason) => {
                skipped.push(SkippedFrame { frame: i, exercise, reason });
                None
            }
        })
        .collect()
}

/// Measured limits for q1..q4; q5..q7 are copied from `nominal`.
pub fn extract_rom(rec: &SkeletonRecording, nominal: &RomLimits) -> Result<RomExtraction, RomError> {
    if let Some(missing) = Exercise::MEASURED.iter().find(|e| !rec.has_segment(**e)) {
        return Err(RomError::MissingSegment(*missing));
    }
    let mut limits = *nominal.as_array();
    let mut skipped = Vec::new();
    for (joint, exercise) in Exercise::MEASURED.into_iter().enumerate() {
        let mut series = exercise_series(rec, exercise, &mut skipped);
        if series.len() < MIN_VALID_FRAMES {
            return Err(RomError::InsufficientData {
                exercise,
                valid: series.len(),
                required: MIN_VALID_FRAMES,
            });
        }
        series.sort_by(f64::total_cmp);
        let lo = percentile(&series, ROM_PERCENTILES.0);
        let hi = percentile(&series, ROM_PERCENTILES.1);
        limits[joint] = [lo.max(-PI), hi.min(PI)];
    }
    let limits = RomLimits::new(limits).map_err(|e| RomError::Degenerate(e.to_string()))?;
    Ok(RomExtraction { limits, skipped })
}
