//! Evaluates the received signal strength for a few hand-built networks.

use std::f64::consts::{FRAC_PI_2, PI};

use phasealign::network::{normalized_rss, rss, total_phases, BeamformerState, ChannelRealization, SystemConfig};

fn main() -> phasealign::Result<()> {
    let cfg = SystemConfig::new(2, 1.0)?;
    for (label, phases) in [("aligned", [0.0, 0.0]), ("orthogonal", [0.0, FRAC_PI_2]), ("opposed", [0.0, PI])] {
        let channel = ChannelRealization::unit(phases.to_vec())?;
        let state = BeamformerState::zeros(2);
        println!(
            "{label:>10}: rss = {:.6}, normalized = {:.6}",
            rss(&channel, &state, &cfg)?,
            normalized_rss(&channel, &state, &cfg)?
        );
    }

    // Beamforming phases that cancel the channel phases align the network.
    let channel = ChannelRealization::new(vec![0.3, 1.2, 0.8], vec![0.1, -0.4, 2.0])?;
    let state = BeamformerState::from_phases(channel.phases().iter().map(|p| -p).collect());
    let cfg = SystemConfig::new(3, 2.0)?;
    println!(
        "compensated: θ = {:?}, rss = {:.6} (max {:.6})",
        total_phases(&channel, &state)?,
        rss(&channel, &state, &cfg)?,
        cfg.aligned_rss(&channel)
    );
    Ok(())
}
