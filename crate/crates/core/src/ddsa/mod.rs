//! Deterministic differential search.
//!
//! Transmitters are visited one at a time. In its round, transmitter `i`
//! rotates its phase by `0, 2π/3, 4π/3` while the rest of the network keeps
//! transmitting unchanged; the receiver inverts the three RSS readings into
//! the angle `β` between the probed phasor and the rest of the network,
//! quantizes the correction to `K` bits and feeds the index back. The
//! transmitter subtracts the indicated level.
//!
//! Slot accounting: one slot for the initial measurement of a run, then two
//! slots per round. `M_0` of a round is the post-adjustment RSS of the
//! previous round, which the receiver already knows in closed form.

mod quantizer;
mod solver;
mod sweep;

pub use quantizer::{select_feedback, FeedbackMessage, QuantizerConfig, MAX_FEEDBACK_BITS};
pub use solver::{
    solve_differential, Differential, DifferentialEstimate, ProbeTriple, DEGENERACY_TOLERANCE,
    DISCRIMINANT_TOLERANCE, PROBE_STEP,
};
pub use sweep::{run_ddsa, run_ddsa_sweep, DdsaRoundLog, FeedbackMode};

use crate::error::{Error, Result};
use crate::network::{rss_with_offset, BeamformerState, ChannelRealization, SystemConfig};

fn check_index(state: &BeamformerState, i: usize) -> Result<()> {
    if i >= state.len() {
        return Err(Error::invalid(format!(
            "transmitter index {i} out of range for {} transmitters",
            state.len()
        )));
    }
    Ok(())
}

/// Measures the RSS with transmitter `i` rotated by each probe offset.
/// `state` is only read.
pub fn probe_round(
    channel: &ChannelRealization,
    state: &BeamformerState,
    config: &SystemConfig,
    i: usize,
) -> Result<ProbeTriple> {
    check_index(state, i)?;
    // Validates lengths and transmitter count.
    crate::network::rss(channel, state, config)?;
    let mut m = [0.0; 3];
    for (j, slot) in m.iter_mut().enumerate() {
        *slot = rss_with_offset(channel, state, config, i, PROBE_STEP * j as f64);
    }
    ProbeTriple::new(m)
}

/// `ψ_i ← ψ_i − level`. Other transmitters are untouched.
pub fn apply_feedback(
    state: &mut BeamformerState,
    i: usize,
    feedback: &FeedbackMessage,
    quantizer: &QuantizerConfig,
) -> Result<()> {
    check_index(state, i)?;
    if feedback.level_index >= quantizer.level_count() {
        return Err(Error::invalid(format!(
            "feedback level {} out of range for {} levels",
            feedback.level_index,
            quantizer.level_count()
        )));
    }
    state.psi_mut()[i] -= quantizer.level(feedback.level_index);
    Ok(())
}
