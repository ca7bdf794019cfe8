//! Estimate limb lengths and ROM limits from a skeleton recording.
//!
//! cargo run --example extract_rom -- crates/core/data/sample_recording.jsonl

use reachmap::arm::RomLimits;
use reachmap::rom::{estimate_limb_lengths, extract_rom, SkeletonRecording};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample_recording.jsonl").into());
    let rec = SkeletonRecording::load(&path)?;
    let geom = estimate_limb_lengths(&rec)?;
    println!(
        "limb lengths: upper arm {:.3} m, forearm {:.3} m, hand {:.3} m",
        geom.upper_arm_length(),
        geom.forearm_length(),
        geom.hand_length()
    );
    let out = extract_rom(&rec, &RomLimits::nominal())?;
    for (j, [lo, hi]) in out.limits.to_degrees().iter().enumerate() {
        let source = if j < 4 { "measured" } else { "nominal" };
        println!("q{}: [{lo:7.2}, {hi:7.2}] deg ({source})", j + 1);
    }
    println!("{} frames skipped", out.skipped.len());
    Ok(())
}
