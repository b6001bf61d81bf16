use serde::{Deserialize, Serialize};

use super::{
    apply_feedback, select_feedback, solve_differential, Differential, FeedbackMessage,
    ProbeTriple, QuantizerConfig, PROBE_STEP,
};
use crate::error::{Error, Result};
use crate::network::{rss, rss_with_offset, BeamformerState, ChannelRealization, SystemConfig};
use crate::trace::{TraceRecord, TraceSink};

/// What the receiver sends back after each round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FeedbackMode {
    /// K-bit index into the uniform correction codebook.
    Quantized(QuantizerConfig),
    /// `β` itself, unquantized. Used to isolate quantization loss.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DdsaRoundLog {
    pub sweep: usize,
    pub transmitter_index: usize,
    pub probes: ProbeTriple,
    pub estimate: Differential,
    /// `None` in exact-feedback mode.
    pub feedback: Option<FeedbackMessage>,
    /// Phase actually subtracted from `ψ_i`.
    pub correction: f64,
    /// Receiver's closed-form post-adjustment RSS.
    pub predicted_rss: f64,
    /// Oracle RSS of the adjusted state.
    pub rss_after: f64,
    pub slots_consumed: usize,
}

/// One pass over every transmitter in index order, preceded by the
/// baseline measurement.
pub fn run_ddsa_sweep(
    channel: &ChannelRealization,
    state: &mut BeamformerState,
    config: &SystemConfig,
    feedback: &FeedbackMode,
    sink: &mut dyn TraceSink,
) -> Result<Vec<DdsaRoundLog>> {
    run_ddsa(channel, state, config, feedback, 1, sink)
}

/// `sweeps` consecutive passes sharing one baseline slot; the run occupies
/// `1 + 2·N_s·sweeps` slots.
pub fn run_ddsa(
    channel: &ChannelRealization,
    state: &mut BeamformerState,
    config: &SystemConfig,
    feedback: &FeedbackMode,
    sweeps: usize,
    sink: &mut dyn TraceSink,
) -> Result<Vec<DdsaRoundLog>> {
    let mut current = rss(channel, state, config)?;
    let aligned = config.aligned_rss(channel);
    if aligned <= 0.0 {
        return Err(Error::DegenerateChannel);
    }
    let record = |sink: &mut dyn TraceSink, slot: usize, value: f64| {
        sink.record(TraceRecord {
            slot,
            rss: value,
            normalized_rss: value / aligned,
        })
    };

    let mut slot = 0;
    record(sink, slot, current);
    let mut carried = current;

    let n = state.len();
    let mut logs = Vec::with_capacity(n * sweeps);
    for sweep in 0..sweeps {
        for i in 0..n {
            let probes = ProbeTriple::new([
                carried,
                rss_with_offset(channel, state, config, i, PROBE_STEP),
                rss_with_offset(channel, state, config, i, 2.0 * PROBE_STEP),
            ])?;
            let estimate = solve_differential(&probes)?;

            let (message, correction) = match feedback {
                FeedbackMode::Quantized(quantizer) => {
                    let message = select_feedback(&estimate, quantizer);
                    apply_feedback(state, i, &message, quantizer)?;
                    (Some(message), quantizer.level(message.level_index))
                }
                FeedbackMode::Exact => {
                    // Zero correction stays available; a β whose predicted
                    // gain does not register in f64 is rounding noise.
                    let beta = estimate.estimate().map_or(0.0, |e| e.beta);
                    let beta = if estimate.predicted_rss(beta) > estimate.predicted_rss(0.0) {
                        beta
                    } else {
                        0.0
                    };
                    state.psi_mut()[i] -= beta;
                    (None, beta)
                }
            };

            let predicted_rss = estimate.predicted_rss(correction);
            let rss_after = if correction == 0.0 {
                current
            } else {
                rss(channel, state, config)?
            };

            record(sink, slot + 1, current);
            record(sink, slot + 2, rss_after);
            slot += 2;

            let log = DdsaRoundLog {
                sweep,
                transmitter_index: i,
                probes,
                estimate,
                feedback: message,
                correction,
                predicted_rss,
                rss_after,
                slots_consumed: 2,
            };
            sink.round(&log);
            logs.push(log);

            carried = predicted_rss;
            current = rss_after;
        }
    }
    Ok(logs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::normalized_rss;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn lone_transmitter_is_already_aligned() {
        let channel = ChannelRealization::new(vec![0.7], vec![1.9]).unwrap();
        let cfg = SystemConfig::new(1, 1.0).unwrap();
        let mut state = BeamformerState::zeros(1);
        let mut trace = Vec::new();
        let q = FeedbackMode::Quantized(QuantizerConfig::new(3).unwrap());
        let logs = run_ddsa_sweep(&channel, &mut state, &cfg, &q, &mut trace).unwrap();
        assert_eq!(logs.len(), 1);
        assert!(logs[0].estimate.is_degenerate());
        assert_eq!(logs[0].feedback, Some(FeedbackMessage { level_index: 0 }));
        assert_eq!(state.psi(), &[0.0]);
        assert_eq!(trace.len(), 3);
        assert!(trace.iter().all(|r| (r.normalized_rss - 1.0).abs() < 1e-15));
    }

    #[test]
    fn exact_feedback_aligns_two_phasors_in_one_round() {
        let channel = ChannelRealization::unit(vec![0.0, FRAC_PI_2]).unwrap();
        let cfg = SystemConfig::new(2, 1.0).unwrap();
        let mut state = BeamformerState::zeros(2);
        let mut trace = Vec::new();
        let logs = run_ddsa_sweep(&channel, &mut state, &cfg, &FeedbackMode::Exact, &mut trace).unwrap();
        assert!((trace[2].normalized_rss - 1.0).abs() < 1e-12);
        assert!((logs[0].rss_after - 2.0).abs() < 1e-12);
        assert!((normalized_rss(&channel, &state, &cfg).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slot_indices_are_consecutive() {
        let channel = ChannelRealization::new(vec![0.5, 1.0, 0.8], vec![0.3, 2.0, -1.0]).unwrap();
        let cfg = SystemConfig::new(3, 1.0).unwrap();
        let mut state = BeamformerState::zeros(3);
        let mut trace = Vec::new();
        run_ddsa(&channel, &mut state, &cfg, &FeedbackMode::Exact, 2, &mut trace).unwrap();
        assert_eq!(trace.len(), 1 + 2 * 3 * 2);
        assert!(trace.iter().enumerate().all(|(k, r)| r.slot == k));
    }

    #[test]
    fn carried_baseline_matches_oracle() {
        let channel =
            ChannelRealization::new(vec![0.5, 1.0, 0.8, 1.3], vec![0.3, 2.0, -1.0, -2.5]).unwrap();
        let cfg = SystemConfig::new(4, 1.0).unwrap();
        let mut state = BeamformerState::zeros(4);
        let q = FeedbackMode::Quantized(QuantizerConfig::new(2).unwrap());
        let logs = run_ddsa_sweep(&channel, &mut state, &cfg, &q, &mut crate::trace::NullSink).unwrap();
        for pair in logs.windows(2) {
            assert!((pair[1].probes.baseline() - pair[0].rss_after).abs() < 1e-12);
        }
    }
}
