//! Writes a synthetic skeleton recording: a neutral hold followed by one
//! cosine-eased sweep per measured exercise, posed by the arm model.
//!
//! cargo run --example synthesize_recording -- data/sample_recording.jsonl [noise_m]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use reachmap::arm::ArmGeometry;
use reachmap::rom::synth::sweep_recording;
use reachmap::rom::SkeletonRecording;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "sample_recording.jsonl".into());
    let noise: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.0);

    // programmed extrema (degrees): abduction, flexion, rotation, elbow flexion
    let extrema = [[10.0, 120.0], [-20.0, 110.0], [-50.0, 40.0], [5.0, 130.0]].map(|[a, b]: [f64; 2]| [a.to_radians(), b.to_radians()]);
    let rec = sweep_recording(&ArmGeometry::default(), extrema, 200, 1.0 / 30.0)?;

    let rec = if noise > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = Normal::new(0.0, noise)?;
        let mut frames = rec.frames().to_vec();
        for f in &mut frames {
            for p in f.joints.values_mut() {
                for v in p.iter_mut() {
                    *v += n.sample(&mut rng);
                }
            }
        }
        SkeletonRecording::new(frames, rec.segments().to_vec())?
    } else {
        rec
    };

    let file = std::io::BufWriter::new(std::fs::File::create(&out)?);
    rec.write_jsonl(file)?;
    println!("wrote {} frames to {out}", rec.frames().len());
    Ok(())
}
