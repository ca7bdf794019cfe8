use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use super::RomError;

pub const NECK: &str = "neck";
pub const HIP_CENTER: &str = "hip_center";
pub const RIGHT_SHOULDER: &str = "right_shoulder";
pub const RIGHT_ELBOW: &str = "right_elbow";
pub const RIGHT_WRIST: &str = "right_wrist";
pub const RIGHT_HAND_TIP: &str = "right_hand_tip";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exercise {
    Neutral,
    ShoulderAbductionAdduction,
    ShoulderFlexionExtension,
    ShoulderRotation,
    ElbowFlexionExtension,
}

impl Exercise {
    /// The four measured movements, in joint order q1..q4.
    pub const MEASURED: [Exercise; 4] = [
        Exercise::ShoulderAbductionAdduction,
        Exercise::ShoulderFlexionExtension,
        Exercise::ShoulderRotation,
        Exercise::ElbowFlexionExtension,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Exercise::Neutral => "neutral",
            Exercise::ShoulderAbductionAdduction => "shoulder_abduction_adduction",
            Exercise::ShoulderFlexionExtension => "shoulder_flexion_extension",
            Exercise::ShoulderRotation => "shoulder_rotation",
            Exercise::ElbowFlexionExtension => "elbow_flexion_extension",
        }
    }
}

impl fmt::Display for Exercise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One tracked skeleton sample. Joint positions are in meters in the torso
/// frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkeletonFrame {
    pub t: f64,
    pub joints: BTreeMap<String, [f64; 3]>,
}

impl SkeletonFrame {
    pub fn new(t: f64) -> Self {
        Self { t, joints: BTreeMap::new() }
    }

    pub fn with_joint(mut self, name: &str, p: Point3<f64>) -> Self {
        self.joints.insert(name.to_string(), [p.x, p.y, p.z]);
        self
    }

    pub fn joint(&self, name: &str) -> Option<Point3<f64>> {
        self.joints.get(name).map(|p| Point3::from(*p))
    }
}

/// Frame range `[from, to)` labeled with one exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub exercise: Exercise,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Header {
    segments: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonRecording {
    frames: Vec<SkeletonFrame>,
    segments: Vec<Segment>,
}

impl SkeletonRecording {
    pub fn new(frames: Vec<SkeletonFrame>, segments: Vec<Segment>) -> Result<Self, RomError> {
        for (i, f) in frames.iter().enumerate() {
            if !f.t.is_finite() {
                return Err(RomError::InvalidRecording(format!("frame {i}: timestamp not finite")));
            }
            if i > 0 && f.t <= frames[i - 1].t {
                return Err(RomError::InvalidRecording(format!(
                    "frame {i}: timestamp {} does not increase",
                    f.t
                )));
            }
            if let Some((name, _)) = f.joints.iter().find(|(_, p)| p.iter().any(|v| !v.is_finite())) {
                return Err(RomError::InvalidRecording(format!("frame {i}: joint {name} not finite")));
            }
        }
        let mut sorted = segments.clone();
        sorted.sort_by_key(|s| (s.from, s.to));
        for (k, s) in sorted.iter().enumerate() {
            if s.from >= s.to || s.to > frames.len() {
                return Err(RomError::InvalidRecording(format!(
                    "segment {} [{}, {}) is empty or out of bounds ({} frames)",
                    s.exercise,
                    s.from,
                    s.to,
                    frames.len()
                )));
            }
            if k > 0 && sorted[k - 1].to > s.from {
                return Err(RomError::InvalidRecording(format!(
                    "segments {} and {} overlap",
                    sorted[k - 1].exercise, s.exercise
                )));
            }
        }
        Ok(Self { frames, segments })
    }

    pub fn frames(&self) -> &[SkeletonFrame] {
        &self.frames
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Indices of all frames labeled `exercise`, in recording order.
    pub fn frame_indices(&self, exercise: Exercise) -> Vec<usize> {
        let mut segs: Vec<&Segment> = self.segments.iter().filter(|s| s.exercise == exercise).collect();
        segs.sort_by_key(|s| s.from);
        segs.iter().flat_map(|s| s.from..s.to).collect()
    }

    pub fn has_segment(&self, exercise: Exercise) -> bool {
        self.segments.iter().any(|s| s.exercise == exercise)
    }

    /// Parses the JSON Lines form: a header line `{"segments": [...]}`
    /// followed by one `{"t": .., "joints": {..}}` object per line. Blank
    /// lines are ignored.
    pub fn read_jsonl(reader: impl BufRead) -> Result<Self, RomError> {
        let mut header: Option<Header> = None;
        let mut frames = Vec::new();
        for (n, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| RomError::Io(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let parse_err = |e: serde_json::Error| RomError::Parse { line: n + 1, message: e.to_string() };
            if header.is_none() {
                header = Some(serde_json::from_str(&line).map_err(parse_err)?);
            } else {
                frames.push(serde_json::from_str(&line).map_err(parse_err)?);
            }
        }
        let header = header.ok_or_else(|| RomError::Parse { line: 1, message: "missing header line".into() })?;
        Self::new(frames, header.segments)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, RomError> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| RomError::Io(format!("{}: {e}", path.display())))?;
        Self::read_jsonl(std::io::BufReader::new(file))
    }

    pub fn write_jsonl(&self, mut w: impl Write) -> Result<(), RomError> {
        let io = |e: std::io::Error| RomError::Io(e.to_string());
        let header = Header { segments: self.segments.clone() };
        writeln!(w, "{}", serde_json::to_string(&header).expect("header serializes")).map_err(io)?;
        for f in &self.frames {
            writeln!(w, "{}", serde_json::to_string(f).expect("frame serializes")).map_err(io)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(t: f64) -> SkeletonFrame {
        SkeletonFrame::new(t).with_joint(RIGHT_SHOULDER, Point3::origin())
    }

    #[test]
    fn rejects_non_increasing_time() {
        let err = SkeletonRecording::new(vec![frame(0.0), frame(0.0)], vec![]).unwrap_err();
        assert!(matches!(err, RomError::InvalidRecording(_)));
    }

    #[test]
    fn rejects_overlapping_segments() {
        let frames = (0..4).map(|i| frame(i as f64)).collect();
        let segs = vec![
            Segment { exercise: Exercise::Neutral, from: 0, to: 3 },
            Segment { exercise: Exercise::ShoulderRotation, from: 2, to: 4 },
        ];
        assert!(SkeletonRecording::new(frames, segs).is_err());
    }

    #[test]
    fn rejects_out_of_bounds_segment() {
        let frames = (0..4).map(|i| frame(i as f64)).collect();
        let segs = vec![Segment { exercise: Exercise::Neutral, from: 2, to: 5 }];
        assert!(SkeletonRecording::new(frames, segs).is_err());
    }

    #[test]
    fn jsonl_parses_documented_form() {
        let text = r#"{"segments": [{"exercise": "neutral", "from": 0, "to": 2}]}
{"t": 0.0, "joints": {"right_shoulder": [0, 0, 0], "right_elbow": [0, 0, -0.3]}}

{"t": 0.033, "joints": {"right_shoulder": [0, 0, 0], "right_elbow": [0, 0, -0.3]}}
"#;
        let rec = SkeletonRecording::read_jsonl(text.as_bytes()).unwrap();
        assert_eq!(rec.frames().len(), 2);
        assert_eq!(rec.frame_indices(Exercise::Neutral), vec![0, 1]);
        let mut out = Vec::new();
        rec.write_jsonl(&mut out).unwrap();
        assert_eq!(SkeletonRecording::read_jsonl(out.as_slice()).unwrap(), rec);
    }

    #[test]
    fn bad_line_reports_line_number() {
        let text = "{\"segments\": []}\n{\"t\": 0.0, \"joints\": 5}\n";
        match SkeletonRecording::read_jsonl(text.as_bytes()) {
            Err(RomError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
