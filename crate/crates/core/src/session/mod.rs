//! Balloon-pop session logs, speed statistics and a parametric session
//! simulator.

mod report;
mod simulate;

pub use report::{session_report, SpeedCell, SpeedReport};
pub use simulate::{simulate_session, UserModel, INTER_SPAWN_GAP, MIN_SPEED};

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::Point3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{AnalysisError, Difficulty};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("invalid event: {0}")]
    InvalidEvent(String),
    #[error("unknown condition {0:?} (expected unrestricted, partially_restricted or restricted)")]
    UnknownCondition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Unrestricted,
    PartiallyRestricted,
    Restricted,
}

impl Condition {
    pub const ALL: [Condition; 3] = [Condition::Unrestricted, Condition::PartiallyRestricted, Condition::Restricted];

    pub fn as_str(self) -> &'static str {
        match self {
            Condition::Unrestricted => "unrestricted",
            Condition::PartiallyRestricted => "partially_restricted",
            Condition::Restricted => "restricted",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Condition {
    type Err = SessionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Condition::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| SessionError::UnknownCondition(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopEvent {
    pub position: [f64; 3],
    pub difficulty: Difficulty,
    pub t_spawn: f64,
    pub t_pop: f64,
}

/// One user's session under one condition. Events are kept as recorded;
/// [`SessionLog::invalid_events`] reports the ones that break the timing
/// rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionLog {
    pub user_id: String,
    pub condition: Condition,
    pub home: [f64; 3],
    pub events: Vec<PopEvent>,
}

/// An event excluded from statistics, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvalidEvent {
    pub user_id: String,
    pub condition: Condition,
    pub index: usize,
    pub reason: String,
}

impl SessionLog {
    /// Events that are non-finite, have `t_pop <= t_spawn`, or start before
    /// the previous valid event ended.
    pub fn invalid_events(&self) -> Vec<InvalidEvent> {
        let mut out = Vec::new();
        let mut last_pop = f64::NEG_INFINITY;
        for (index, e) in self.events.iter().enumerate() {
            let reason = if !(e.position.iter().all(|v| v.is_finite()) && e.t_spawn.is_finite() && e.t_pop.is_finite()) {
                Some("non-finite value".to_owned())
            } else if e.t_pop <= e.t_spawn {
                Some(format!("t_pop {} is not after t_spawn {}", e.t_pop, e.t_spawn))
            } else if e.t_spawn < last_pop {
                Some(format!("spawned at {} before the previous balloon popped at {}", e.t_spawn, last_pop))
            } else {
                None
            };
            match reason {
                Some(reason) => out.push(InvalidEvent {
                    user_id: self.user_id.clone(),
                    condition: self.condition,
                    index,
                    reason,
                }),
                None => last_pop = e.t_pop,
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("log serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SessionError> {
        let log: SessionLog = serde_json::from_str(text)?;
        if !log.home.iter().all(|v| v.is_finite()) {
            return Err(SessionError::InvalidArgument("home must be finite".into()));
        }
        Ok(log)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SessionError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Straight-line home-to-balloon distance over pop time, m/s.
pub fn pop_speed(home: &Point3<f64>, balloon: &Point3<f64>, t_spawn: f64, t_pop: f64) -> Result<f64, SessionError> {
    let duration = t_pop - t_spawn;
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(SessionError::InvalidEvent(format!("non-positive duration {duration}")));
    }
    Ok((balloon - home).norm() / duration)
}
