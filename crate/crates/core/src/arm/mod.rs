//! Seven-DoF right-arm kinematic chain.
//!
//! Torso frame: origin at the right glenohumeral joint, X to the user's
//! right, Y anterior, Z superior. At the zero pose the arm hangs straight
//! down with the palm facing medially.
//!
//! Joint order and positive directions:
//!
//! | joint | motion                                   | axis (local) | positive  |
//! |-------|------------------------------------------|--------------|-----------|
//! | q1    | shoulder abduction-adduction             | -Y           | abduction |
//! | q2    | shoulder flexion-extension               | +X           | flexion   |
//! | q3    | shoulder internal-external rotation      | +Z           | internal  |
//! | q4    | elbow flexion-extension                  | +X           | flexion   |
//! | q5    | forearm pronation-supination             | +Z           | pronation |
//! | q6    | wrist ulnar-radial deviation             | +X           | radial    |
//! | q7    | wrist flexion-extension                  | +Y           | flexion   |
//!
//! The tool center point (TCP) is the index fingertip; its pointing axis is
//! the hand's long axis (local -Z).

mod collision;
mod config;
mod ik;

pub use collision::{
    segment_segment_distance, self_collides, Capsule, CollisionModel, CollisionPair, Sphere,
};
pub use config::{ArmConfig, RomDegrees};
pub use ik::{solve_ik, solve_ik_with, IkSettings, IkTolerance};

use std::f64::consts::PI;

use nalgebra::{Matrix3, Point3, Unit, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of joints in the chain.
pub const DOF: usize = 7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArmError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("config error: {0}")]
    Config(String),
}

/// The seven joint values q1..q7 in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 7]", into = "[f64; 7]")]
pub struct JointAngles(pub(crate) [f64; DOF]);

impl JointAngles {
    pub const ZERO: JointAngles = JointAngles([0.0; DOF]);

    pub fn new(q: [f64; DOF]) -> Result<Self, ArmError> {
        for (i, v) in q.iter().enumerate() {
            if !v.is_finite() {
                return Err(ArmError::InvalidArgument(format!("q{} is not finite", i + 1)));
            }
            if v.abs() > PI {
                return Err(ArmError::InvalidArgument(format!(
                    "q{} = {v} lies outside [-pi, pi]",
                    i + 1
                )));
            }
        }
        Ok(Self(q))
    }

    pub fn from_degrees(q: [f64; DOF]) -> Result<Self, ArmError> {
        Self::new(q.map(f64::to_radians))
    }

    pub fn as_array(&self) -> &[f64; DOF] {
        &self.0
    }

    pub fn get(&self, joint: usize) -> f64 {
        self.0[joint]
    }
}

impl TryFrom<[f64; DOF]> for JointAngles {
    type Error = ArmError;

    fn try_from(q: [f64; DOF]) -> Result<Self, Self::Error> {
        Self::new(q)
    }
}

impl From<JointAngles> for [f64; DOF] {
    fn from(q: JointAngles) -> Self {
        q.0
    }
}

/// Link lengths in meters: shoulder to elbow, elbow to wrist, wrist to
/// index fingertip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeometry", into = "RawGeometry")]
pub struct ArmGeometry {
    upper_arm: f64,
    forearm: f64,
    hand: f64,
}

#[derive(Serialize, Deserialize)]
struct RawGeometry {
    upper_arm_length: f64,
    forearm_length: f64,
    hand_length: f64,
}

impl ArmGeometry {
    pub fn new(upper_arm: f64, forearm: f64, hand: f64) -> Result<Self, ArmError> {
        for (name, v) in [("upper_arm_length", upper_arm), ("forearm_length", forearm), ("hand_length", hand)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ArmError::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { upper_arm, forearm, hand })
    }

    pub fn upper_arm_length(&self) -> f64 {
        self.upper_arm
    }

    pub fn forearm_length(&self) -> f64 {
        self.forearm
    }

    pub fn hand_length(&self) -> f64 {
        self.hand
    }

    pub fn total_reach(&self) -> f64 {
        self.upper_arm + self.forearm + self.hand
    }
}

impl Default for ArmGeometry {
    fn default() -> Self {
        Self { upper_arm: 0.30, forearm: 0.25, hand: 0.18 }
    }
}

impl TryFrom<RawGeometry> for ArmGeometry {
    type Error = ArmError;

    fn try_from(raw: RawGeometry) -> Result<Self, Self::Error> {
        Self::new(raw.upper_arm_length, raw.forearm_length, raw.hand_length)
    }
}

impl From<ArmGeometry> for RawGeometry {
    fn from(g: ArmGeometry) -> Self {
        Self { upper_arm_length: g.upper_arm, forearm_length: g.forearm, hand_length: g.hand }
    }
}

/// Closed per-joint intervals `[lo, hi]` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[f64; 2]; 7]", into = "[[f64; 2]; 7]")]
pub struct RomLimits([[f64; 2]; DOF]);

impl RomLimits {
    pub fn new(limits: [[f64; 2]; DOF]) -> Result<Self, ArmError> {
        for (i, [lo, hi]) in limits.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(ArmError::InvalidArgument(format!("q{} limits not finite", i + 1)));
            }
            if lo > hi {
                return Err(ArmError::InvalidArgument(format!("q{}: lo {lo} > hi {hi}", i + 1)));
            }
            if *lo < -PI || *hi > PI {
                return Err(ArmError::InvalidArgument(format!(
                    "q{}: [{lo}, {hi}] exceeds [-pi, pi]",
                    i + 1
                )));
            }
        }
        Ok(Self(limits))
    }

    pub fn from_degrees(limits: [[f64; 2]; DOF]) -> Result<Self, ArmError> {
        Self::new(limits.map(|[lo, hi]| [lo.to_radians(), hi.to_radians()]))
    }

    /// Typical normal ROM of a healthy adult (AAOS / CDC normal joint ROM
    /// tables), expressed in this crate's sign conventions.
    pub fn nominal() -> Self {
        Self::from_degrees([
            [-30.0, 180.0],
            [-60.0, 180.0],
            [-90.0, 70.0],
            [0.0, 150.0],
            [-80.0, 80.0],
            [-30.0, 20.0],
            [-70.0, 80.0],
        ])
        .expect("nominal limits are valid")
    }

    pub fn as_array(&self) -> &[[f64; 2]; DOF] {
        &self.0
    }

    pub fn lo(&self, joint: usize) -> f64 {
        self.0[joint][0]
    }

    pub fn hi(&self, joint: usize) -> f64 {
        self.0[joint][1]
    }

    pub fn to_degrees(&self) -> [[f64; 2]; DOF] {
        self.0.map(|[lo, hi]| [lo.to_degrees(), hi.to_degrees()])
    }

    pub fn midpoint(&self) -> JointAngles {
        JointAngles(self.0.map(|[lo, hi]| 0.5 * (lo + hi)))
    }

    /// True if every interval of `self` contains the matching interval of
    /// `inner`.
    pub fn contains(&self, inner: &RomLimits) -> bool {
        self.0.iter().zip(inner.0.iter()).all(|(o, i)| o[0] <= i[0] && i[1] <= o[1])
    }

    pub fn clamp(&self, q: &JointAngles) -> JointAngles {
        let mut out = q.0;
        self.clamp_in_place(&mut out);
        JointAngles(out)
    }

    pub(crate) fn clamp_in_place(&self, q: &mut [f64; DOF]) {
        for (v, [lo, hi]) in q.iter_mut().zip(self.0.iter()) {
            *v = v.clamp(*lo, *hi);
        }
    }

    pub(crate) fn contains_raw(&self, q: &[f64; DOF]) -> bool {
        q.iter().zip(self.0.iter()).all(|(v, [lo, hi])| lo <= v && v <= hi)
    }
}

impl Default for RomLimits {
    fn default() -> Self {
        Self::nominal()
    }
}

impl TryFrom<[[f64; 2]; DOF]> for RomLimits {
    type Error = ArmError;

    fn try_from(l: [[f64; 2]; DOF]) -> Result<Self, Self::Error> {
        Self::new(l)
    }
}

impl From<RomLimits> for [[f64; 2]; DOF] {
    fn from(r: RomLimits) -> Self {
        r.0
    }
}

/// TCP position plus pointing direction. Roll about the pointing axis is not
/// represented.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub position: Point3<f64>,
    pub pointing_axis: Unit<Vector3<f64>>,
}

impl Pose {
    pub fn new(position: Point3<f64>, pointing: Vector3<f64>) -> Result<Self, ArmError> {
        if !position.coords.iter().all(|v| v.is_finite()) {
            return Err(ArmError::InvalidArgument("position is not finite".into()));
        }
        let norm = pointing.norm();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(ArmError::InvalidArgument("pointing axis is degenerate".into()));
        }
        Ok(Self { position, pointing_axis: Unit::new_normalize(pointing) })
    }
}

/// Joint centers and TCP of a posed chain, all in the torso frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmFrames {
    pub shoulder: Point3<f64>,
    pub elbow: Point3<f64>,
    pub wrist: Point3<f64>,
    pub tip: Point3<f64>,
    pub pointing: Vector3<f64>,
}

#[inline]
fn rot_x(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

#[inline]
fn rot_y(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

#[inline]
fn rot_z(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

pub(crate) fn chain_frames(q: &[f64; DOF], geom: &ArmGeometry) -> ArmFrames {
    let down = Vector3::new(0.0, 0.0, -1.0);
    // abduction is a rotation about -Y
    let shoulder_rot = rot_y(-q[0]) * rot_x(q[1]) * rot_z(q[2]);
    let forearm_rot = shoulder_rot * rot_x(q[3]) * rot_z(q[4]);
    let hand_rot = forearm_rot * rot_x(q[5]) * rot_y(q[6]);

    let shoulder = Point3::origin();
    let elbow = shoulder + shoulder_rot * down * geom.upper_arm;
    let wrist = elbow + forearm_rot * down * geom.forearm;
    let pointing = hand_rot * down;
    let tip = wrist + pointing * geom.hand;
    ArmFrames { shoulder, elbow, wrist, tip, pointing }
}

/// Joint centers of the posed chain.
pub fn arm_frames(q: &JointAngles, geom: &ArmGeometry) -> ArmFrames {
    chain_frames(&q.0, geom)
}

/// TCP pose (index fingertip) in the torso frame.
pub fn forward_kinematics(q: &JointAngles, geom: &ArmGeometry) -> Pose {
    let f = chain_frames(&q.0, geom);
    Pose { position: f.tip, pointing_axis: Unit::new_normalize(f.pointing) }
}

/// Closed-interval limit check.
pub fn within_limits(q: &JointAngles, rom: &RomLimits) -> bool {
    rom.contains_raw(&q.0)
}
