//! Three probes in, misalignment angle out.
//!
//! Builds a two-transmitter network, probes the second transmitter at
//! offsets 0, 2π/3 and 4π/3, recovers (|r|, |c|, β) and shows which 3-bit
//! correction the receiver would feed back.

use phasealign::ddsa::{apply_feedback, probe_round, select_feedback, solve_differential, QuantizerConfig};
use phasealign::network::{rss, BeamformerState, ChannelRealization, SystemConfig};

fn main() -> phasealign::Result<()> {
    let channel = ChannelRealization::new(vec![2.0, 1.0], vec![0.0, 1.0])?;
    let cfg = SystemConfig::new(2, 1.0)?;
    let mut state = BeamformerState::zeros(2);
    let quantizer = QuantizerConfig::new(3)?;

    let probes = probe_round(&channel, &state, &cfg, 1)?;
    println!("probes M = {:?}", probes.values());

    let differential = solve_differential(&probes)?;
    let est = differential.estimate().expect("two transmitters resolve");
    println!("|r| = {:.6}, |c| = {:.6}, β = {:.6} rad", est.r_mag, est.c_mag, est.beta);

    let feedback = select_feedback(&differential, &quantizer);
    let level = quantizer.level(feedback.level_index);
    println!(
        "feedback index {} (subtract {:.6} rad), predicted rss {:.6}",
        feedback.level_index,
        level,
        differential.predicted_rss(level)
    );

    let before = rss(&channel, &state, &cfg)?;
    apply_feedback(&mut state, 1, &feedback, &quantizer)?;
    println!("rss {:.6} -> {:.6}", before, rss(&channel, &state, &cfg)?);
    Ok(())
}
