use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::MapComparison;

/// One line of a comparison report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub user: String,
    pub condition: String,
    pub volume_reduction_pct: f64,
    pub dexterity_reduction_pct: f64,
    pub common_voxels: usize,
}

impl ComparisonRow {
    pub fn new(user: &str, condition: &str, c: &MapComparison) -> Self {
        Self {
            user: user.to_owned(),
            condition: condition.to_owned(),
            volume_reduction_pct: c.volume_reduction_pct,
            dexterity_reduction_pct: c.dexterity_reduction_pct,
            common_voxels: c.common_voxel_count,
        }
    }
}

/// CSV with header `user,condition,volume_reduction_pct,dexterity_reduction_pct,common_voxels`.
pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory CSV write");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
}

/// Markdown table with one row per user and a volume/dexterity column pair
/// per condition, values to two decimals.
pub fn comparison_markdown(rows: &[ComparisonRow]) -> String {
    let mut users: Vec<&str> = Vec::new();
    for r in rows {
        if !users.contains(&r.user.as_str()) {
            users.push(&r.user);
        }
    }
    let conditions: BTreeSet<&str> = rows.iter().map(|r| r.condition.as_str()).collect();

    let mut out = String::from("| User |");
    for c in &conditions {
        out += &format!(" {c} volume (%) | {c} dexterity (%) |");
    }
    out += "\n|---|";
    out += &"---:|".repeat(2 * conditions.len());
    out.push('\n');
    for u in users {
        out += &format!("| {u} |");
        for c in &conditions {
            match rows.iter().find(|r| r.user == u && r.condition == *c) {
                Some(r) => out += &format!(" {:.2} | {:.2} |", r.volume_reduction_pct, r.dexterity_reduction_pct),
                None => out += " - | - |",
            }
        }
        out.push('\n');
    }
    out
}
