use std::collections::BTreeMap;

use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use super::{pop_speed, Condition, InvalidEvent, SessionLog};
use crate::analysis::Difficulty;

/// Speed statistics of one (user, condition, difficulty) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedCell {
    pub user: String,
    pub condition: Condition,
    pub difficulty: Difficulty,
    pub count: usize,
    /// m/s
    pub mean_speed: f64,
    /// Sample standard deviation (n - 1); 0 for a single event.
    pub sd_speed: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SpeedReport {
    /// Sorted by user, condition, difficulty.
    pub cells: Vec<SpeedCell>,
    pub invalid: Vec<InvalidEvent>,
}

/// Groups valid events of all logs by (user, condition, difficulty).
pub fn session_report(logs: &[SessionLog]) -> SpeedReport {
    let mut groups: BTreeMap<(String, Condition, Difficulty), Vec<f64>> = BTreeMap::new();
    let mut invalid = Vec::new();
    for log in logs {
        let bad = log.invalid_events();
        let home = Point3::from(log.home);
        for (i, e) in log.events.iter().enumerate() {
            if bad.iter().any(|b| b.index == i) {
                continue;
            }
            let speed = pop_speed(&home, &Point3::from(e.position), e.t_spawn, e.t_pop)
                .expect("validated event has positive duration");
            groups.entry((log.user_id.clone(), log.condition, e.difficulty)).or_default().push(speed);
        }
        invalid.extend(bad);
    }
    let cells = groups
        .into_iter()
        .map(|((user, condition, difficulty), speeds)| {
            let n = speeds.len() as f64;
            let mean = speeds.iter().sum::<f64>() / n;
            let sd = if speeds.len() > 1 {
                (speeds.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            SpeedCell { user, condition, difficulty, count: speeds.len(), mean_speed: mean, sd_speed: sd }
        })
        .collect();
    SpeedReport { cells, invalid }
}

impl SpeedReport {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, user: &str, condition: Condition, difficulty: Difficulty) -> Option<&SpeedCell> {
        self.cells.iter().find(|c| c.user == user && c.condition == condition && c.difficulty == difficulty)
    }

    pub fn users(&self) -> Vec<&str> {
        let mut users: Vec<&str> = self.cells.iter().map(|c| c.user.as_str()).collect();
        users.dedup();
        users
    }

    /// `user,condition,difficulty,count,mean_speed,sd_speed`
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in &self.cells {
            w.serialize(c).expect("in-memory CSV write");
        }
        String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
    }

    /// Rows are users; each condition contributes an Easy/Med./Hard column
    /// group of mean speeds to two decimals.
    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| User |");
        for c in Condition::ALL {
            out += &format!(" {c} Easy (m/s) | {c} Med. (m/s) | {c} Hard (m/s) |");
        }
        out += "\n|---|";
        out += &"---:|".repeat(9);
        out.push('\n');
        for user in self.users() {
            out += &format!("| {user} |");
            for c in Condition::ALL {
                for d in Difficulty::ALL {
                    match self.cell(user, c, d) {
                        Some(cell) => out += &format!(" {:.2} |", cell.mean_speed),
                        None => out += " - |",
                    }
                }
            }
            out.push('\n');
        }
        if !self.invalid.is_empty() {
            out += &format!("\n{} invalid event(s) excluded:\n", self.invalid.len());
            for e in &self.invalid {
                out += &format!("- {} {} event {}: {}\n", e.user_id, e.condition, e.index, e.reason);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
