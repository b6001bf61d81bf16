//! The one-bit keep/revert random search on a Rayleigh network.
//!
//! `cargo run --release --example onebit_baseline -- [n_transmitters] [slots]`

use std::f64::consts::PI;

use phasealign::network::{sample_rayleigh_channel, BeamformerState, SystemConfig};
use phasealign::onebit::{run_onebit, OneBitConfig};
use phasealign::trace::{ThresholdMode, TraceRecord};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> phasealign::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(500, |s| s.parse().expect("n_transmitters"));
    let slots: usize = args.next().map_or(20_000, |s| s.parse().expect("slots"));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let channel = sample_rayleigh_channel(n, &mut rng)?;
    let cfg = SystemConfig::new(n, 1.0)?;
    let mut state = BeamformerState::zeros(n);
    let config = OneBitConfig::new(PI / 30.0, slots)?;

    let mut trace: Vec<TraceRecord> = Vec::new();
    let run = run_onebit(
        &channel,
        &mut state,
        &cfg,
        &config,
        Some((0.95, ThresholdMode::Normalized)),
        &mut rng,
        &mut trace,
    )?;
    for r in trace.iter().filter(|r| r.slot % 2000 == 0) {
        println!("slot {:>6}  best normalized rss {:.4}", r.slot, r.normalized_rss);
    }
    println!(
        "stopped after {} slots, {} kept perturbations, final {:.4}",
        run.slots,
        run.improvements,
        trace.last().map_or(0.0, |r| r.normalized_rss)
    );
    Ok(())
}
