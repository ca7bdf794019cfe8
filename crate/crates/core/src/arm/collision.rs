use nalgebra::{Point3, Vector3};
use serde::{Deserialize, Serialize};

use super::{chain_frames, ArmError, ArmFrames, ArmGeometry, JointAngles, DOF};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Capsule {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sphere {
    pub center: [f64; 3],
    pub radius: f64,
}

/// Body/arm volume pairs tested for interpenetration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollisionPair {
    ForearmTorso,
    ForearmHead,
    UpperArmTorso,
    UpperArmHead,
}

/// Capsule/sphere stand-ins for the body and arm links.
///
/// The forearm and hand share one radius and are tested as two capsules
/// (elbow to wrist, wrist to fingertip). The upper arm is adjacent to the
/// torso, so its capsule is trimmed by `upper_arm_trim` (a fraction of its
/// length) at the shoulder end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCollisionModel", into = "RawCollisionModel")]
pub struct CollisionModel {
    torso: Capsule,
    head: Sphere,
    upper_arm_radius: f64,
    forearm_radius: f64,
    upper_arm_trim: f64,
    pairs: Vec<CollisionPair>,
}

#[derive(Serialize, Deserialize)]
struct RawCollisionModel {
    torso: Capsule,
    head: Sphere,
    upper_arm_radius: f64,
    forearm_radius: f64,
    #[serde(default = "default_trim")]
    upper_arm_trim: f64,
    #[serde(default = "default_pairs")]
    pairs: Vec<CollisionPair>,
}

fn default_trim() -> f64 {
    0.2
}

fn default_pairs() -> Vec<CollisionPair> {
    vec![CollisionPair::ForearmTorso, CollisionPair::ForearmHead, CollisionPair::UpperArmTorso]
}

impl CollisionModel {
    pub fn new(
        torso: Capsule,
        head: Sphere,
        upper_arm_radius: f64,
        forearm_radius: f64,
        upper_arm_trim: f64,
        pairs: Vec<CollisionPair>,
    ) -> Result<Self, ArmError> {
        let radii = [torso.radius, head.radius, upper_arm_radius, forearm_radius];
        if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(ArmError::InvalidArgument("collision radii must be positive".into()));
        }
        if !(0.0..1.0).contains(&upper_arm_trim) {
            return Err(ArmError::InvalidArgument(format!(
                "upper_arm_trim must lie in [0, 1), got {upper_arm_trim}"
            )));
        }
        let coords = torso.a.iter().chain(&torso.b).chain(&head.center);
        if coords.into_iter().any(|v| !v.is_finite()) {
            return Err(ArmError::InvalidArgument("collision geometry not finite".into()));
        }
        Ok(Self { torso, head, upper_arm_radius, forearm_radius, upper_arm_trim, pairs })
    }

    pub fn torso(&self) -> &Capsule {
        &self.torso
    }

    pub fn head(&self) -> &Sphere {
        &self.head
    }

    pub fn pairs(&self) -> &[CollisionPair] {
        &self.pairs
    }

    pub(crate) fn collides_raw(&self, q: &[f64; DOF], geom: &ArmGeometry) -> bool {
        self.frames_collide(&chain_frames(q, geom))
    }

    pub fn frames_collide(&self, f: &ArmFrames) -> bool {
        let torso_a = Point3::from(self.torso.a);
        let torso_b = Point3::from(self.torso.b);
        let head = Point3::from(self.head.center);
        let upper_start = f.shoulder + (f.elbow - f.shoulder) * self.upper_arm_trim;

        self.pairs.iter().any(|pair| match pair {
            CollisionPair::ForearmTorso => {
                let limit = self.forearm_radius + self.torso.radius;
                segment_segment_distance(&f.elbow, &f.wrist, &torso_a, &torso_b) < limit
                    || segment_segment_distance(&f.wrist, &f.tip, &torso_a, &torso_b) < limit
            }
            CollisionPair::ForearmHead => {
                let limit = self.forearm_radius + self.head.radius;
                point_segment_distance(&head, &f.elbow, &f.wrist) < limit
                    || point_segment_distance(&head, &f.wrist, &f.tip) < limit
            }
            CollisionPair::UpperArmTorso => {
                segment_segment_distance(&upper_start, &f.elbow, &torso_a, &torso_b)
                    < self.upper_arm_radius + self.torso.radius
            }
            CollisionPair::UpperArmHead => {
                point_segment_distance(&head, &upper_start, &f.elbow)
                    < self.upper_arm_radius + self.head.radius
            }
        })
    }
}

impl Default for CollisionModel {
    fn default() -> Self {
        Self {
            torso: Capsule { a: [-0.18, 0.0, -0.55], b: [-0.18, 0.0, -0.05], radius: 0.13 },
            head: Sphere { center: [-0.18, 0.0, 0.25], radius: 0.10 },
            upper_arm_radius: 0.045,
            forearm_radius: 0.04,
            upper_arm_trim: default_trim(),
            pairs: default_pairs(),
        }
    }
}

impl TryFrom<RawCollisionModel> for CollisionModel {
    type Error = ArmError;

    fn try_from(r: RawCollisionModel) -> Result<Self, Self::Error> {
        Self::new(r.torso, r.head, r.upper_arm_radius, r.forearm_radius, r.upper_arm_trim, r.pairs)
    }
}

impl From<CollisionModel> for RawCollisionModel {
    fn from(m: CollisionModel) -> Self {
        Self {
            torso: m.torso,
            head: m.head,
            upper_arm_radius: m.upper_arm_radius,
            forearm_radius: m.forearm_radius,
            upper_arm_trim: m.upper_arm_trim,
            pairs: m.pairs,
        }
    }
}

/// True iff any checked pair interpenetrates.
pub fn self_collides(q: &JointAngles, geom: &ArmGeometry, cm: &CollisionModel) -> bool {
    cm.collides_raw(q.as_array(), geom)
}

fn point_segment_distance(p: &Point3<f64>, a: &Point3<f64>, b: &Point3<f64>) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let t = if len2 > 0.0 { ((p - a).dot(&ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + ab * t)).norm()
}

/// Minimum distance between segments `p1q1` and `p2q2` (closest-point
/// parameters clamped to both segments; handles degenerate segments).
pub fn segment_segment_distance(
    p1: &Point3<f64>,
    q1: &Point3<f64>,
    p2: &Point3<f64>,
    q2: &Point3<f64>,
) -> f64 {
    const EPS: f64 = 1e-15;
    let d1: Vector3<f64> = q1 - p1;
    let d2: Vector3<f64> = q2 - p2;
    let r = p1 - p2;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(&r);

    let (s, t);
    if a <= EPS && e <= EPS {
        return r.norm();
    }
    if a <= EPS {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e <= EPS {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > EPS { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    ((p1 + d1 * s) - (p2 + d2 * t)).norm()
}
