//! One-bit feedback random search.
//!
//! Every slot, each transmitter perturbs its phase by an independent uniform
//! draw from `[−δ₀, δ₀]`. The receiver measures the RSS and answers with a
//! single bit: keep the perturbation if the RSS beats the best seen so far,
//! otherwise every transmitter reverts.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{rss, BeamformerState, ChannelRealization, SystemConfig};
use crate::trace::{reaches, ThresholdMode, TraceRecord, TraceSink};

pub const DEFAULT_DELTA_MAX: f64 = PI / 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneBitConfig {
    /// Perturbation half-width `δ₀` in radians.
    pub delta_max: f64,
    pub max_slots: usize,
}

impl OneBitConfig {
    pub fn new(delta_max: f64, max_slots: usize) -> Result<Self> {
        let config = Self {
            delta_max,
            max_slots,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta_max > 0.0 && self.delta_max < PI) {
            return Err(Error::validation(
                "delta_max",
                format!("must lie in (0, π), got {}", self.delta_max),
            ));
        }
        if self.max_slots == 0 {
            return Err(Error::validation("max_slots", "must be at least 1"));
        }
        Ok(())
    }
}

impl Default for OneBitConfig {
    fn default() -> Self {
        Self {
            delta_max: DEFAULT_DELTA_MAX,
            max_slots: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneBitStep {
    pub best_rss: f64,
    pub measured_rss: f64,
    pub kept: bool,
}

/// One perturb/measure/keep-or-revert slot. `best_rss` must be the RSS of
/// `state` on entry; on return it is again.
pub fn onebit_step<R: Rng + ?Sized>(
    channel: &ChannelRealization,
    state: &mut BeamformerState,
    system: &SystemConfig,
    config: &OneBitConfig,
    best_rss: f64,
    rng: &mut R,
) -> Result<OneBitStep> {
    let dist = Uniform::new_inclusive(-config.delta_max, config.delta_max)
        .map_err(|e| Error::validation("delta_max", e.to_string()))?;
    let saved = state.psi().to_vec();
    for psi in state.psi_mut() {
        *psi += dist.sample(rng);
    }
    let measured_rss = rss(channel, state, system)?;
    if measured_rss > best_rss {
        Ok(OneBitStep {
            best_rss: measured_rss,
            measured_rss,
            kept: true,
        })
    } else {
        state.psi_mut().copy_from_slice(&saved);
        Ok(OneBitStep {
            best_rss,
            measured_rss,
            kept: false,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneBitRun {
    pub best_rss: f64,
    pub slots: usize,
    pub improvements: usize,
}

/// Runs up to `config.max_slots` steps, recording best-so-far RSS per slot.
/// Stops early once `stop_at` is reached, if given.
pub fn run_onebit<R: Rng + ?Sized>(
    channel: &ChannelRealization,
    state: &mut BeamformerState,
    system: &SystemConfig,
    config: &OneBitConfig,
    stop_at: Option<(f64, ThresholdMode)>,
    rng: &mut R,
    sink: &mut dyn TraceSink,
) -> Result<OneBitRun> {
    config.validate()?;
    let aligned = system.aligned_rss(channel);
    if aligned <= 0.0 {
        return Err(Error::DegenerateChannel);
    }
    let mut best_rss = rss(channel, state, system)?;
    let mut improvements = 0;
    let mut slots = 0;
    while slots < config.max_slots {
        let step = onebit_step(channel, state, system, config, best_rss, rng)?;
        best_rss = step.best_rss;
        improvements += usize::from(step.kept);
        let record = TraceRecord {
            slot: slots,
            rss: best_rss,
            normalized_rss: best_rss / aligned,
        };
        sink.record(record);
        slots += 1;
        if let Some((threshold, mode)) = stop_at {
            if reaches(&record, threshold, mode) {
                break;
            }
        }
    }
    Ok(OneBitRun {
        best_rss,
        slots,
        improvements,
    })
}
