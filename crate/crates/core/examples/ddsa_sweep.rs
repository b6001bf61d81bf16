//! One DDSA sweep over a 500-transmitter Rayleigh network with 3-bit
//! feedback, printing the normalized RSS every 100 slots.
//!
//! `cargo run --release --example ddsa_sweep -- [n_transmitters] [bits] [seed]`

use phasealign::ddsa::{run_ddsa_sweep, FeedbackMode, QuantizerConfig};
use phasealign::network::{sample_rayleigh_channel, BeamformerState, SystemConfig};
use phasealign::trace::TraceRecord;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> phasealign::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(500, |s| s.parse().expect("n_transmitters"));
    let bits: u32 = args.next().map_or(3, |s| s.parse().expect("bits"));
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed"));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let channel = sample_rayleigh_channel(n, &mut rng)?;
    let cfg = SystemConfig::new(n, 1.0)?;
    let mut state = BeamformerState::zeros(n);
    let mode = FeedbackMode::Quantized(QuantizerConfig::new(bits)?);

    let mut trace: Vec<TraceRecord> = Vec::new();
    let logs = run_ddsa_sweep(&channel, &mut state, &cfg, &mode, &mut trace)?;

    let last = trace.last().filter(|r| r.slot % 100 != 0);
    for r in trace.iter().filter(|r| r.slot % 100 == 0).chain(last) {
        println!("slot {:>5}  normalized rss {:.4}", r.slot, r.normalized_rss);
    }
    let degenerate = logs.iter().filter(|l| l.estimate.is_degenerate()).count();
    let noop = logs.iter().filter(|l| l.correction == 0.0).count();
    println!("{} rounds, {noop} no-op corrections, {degenerate} degenerate", logs.len());
    if let Some(first) = trace.iter().find(|r| r.normalized_rss >= 0.95) {
        println!("reached 0.95 at slot {}", first.slot);
    }
    Ok(())
}
