//! Physical-layer state shared by every strategy: per-transmitter channels,
//! beamforming phases, and the received-signal-strength (RSS) oracle that the
//! receiver evaluates each slot.
//!
//! Transmitter `i` reaches the receiver with total phase `θ_i = φ_i + ψ_i`,
//! where `φ_i` is the channel phase and `ψ_i` the phase the transmitter applies.
//! With unit beamforming gain the receiver observes
//!
//! ```text
//! rss = √P · | Σ a_i · exp(j θ_i) |
//! ```
//!
//! which is maximised (at `√P · Σ a_i`) exactly when every total phase agrees
//! modulo 2π. Phases are stored unwrapped; nothing here reduces them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Channel coefficients `h_i = a_i · exp(j φ_i)` for one realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    amplitudes: Vec<f64>,
    phases: Vec<f64>,
}

impl ChannelRealization {
    pub fn new(amplitudes: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::invalid("channel must have at least one transmitter"));
        }
        if amplitudes.len() != phases.len() {
            return Err(Error::invalid(format!(
                "amplitude/phase length mismatch: {} vs {}",
                amplitudes.len(),
                phases.len()
            )));
        }
        if let Some(i) = amplitudes.iter().position(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::invalid(format!(
                "amplitude {i} must be finite and nonnegative, got {}",
                amplitudes[i]
            )));
        }
        if let Some(i) = phases.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("phase {i} is not finite")));
        }
        Ok(Self { amplitudes, phases })
    }

    /// Unit-amplitude channel with the given phases.
    pub fn unit(phases: Vec<f64>) -> Result<Self> {
        Self::new(vec![1.0; phases.len()], phases)
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// `Σ a_i`, the coherent-sum magnitude when every phase is aligned.
    pub fn amplitude_sum(&self) -> f64 {
        self.amplitudes.iter().sum()
    }
}

/// Beamforming phases `ψ_i` applied by each transmitter. The gain `b_i` is
/// fixed at 1 and therefore not stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamformerState {
    psi: Vec<f64>,
}

impl BeamformerState {
    pub const GAIN: f64 = 1.0;

    /// Cold start: every transmitter applies zero phase.
    pub fn zeros(n: usize) -> Self {
        Self { psi: vec![0.0; n] }
    }

    pub fn from_phases(psi: Vec<f64>) -> Self {
        Self { psi }
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn psi_mut(&mut self) -> &mut [f64] {
        &mut self.psi
    }

    pub fn gain(&self) -> f64 {
        Self::GAIN
    }
}

/// Link-level constants shared by all transmitters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub n_transmitters: usize,
    /// `√P`, the transmitted symbol amplitude.
    pub symbol_amplitude: f64,
    /// Variance of the additive receiver noise. Carried for completeness; the
    /// RSS oracle assumes perfect estimation and ignores it.
    pub noise_variance: f64,
}

impl SystemConfig {
    pub fn new(n_transmitters: usize, symbol_amplitude: f64) -> Result<Self> {
        let config = Self {
            n_transmitters,
            symbol_amplitude,
            noise_variance: 0.0,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_transmitters == 0 {
            return Err(Error::validation("n_transmitters", "must be at least 1"));
        }
        if !(self.symbol_amplitude.is_finite() && self.symbol_amplitude > 0.0) {
            return Err(Error::validation(
                "symbol_amplitude",
                format!("must be finite and > 0, got {}", self.symbol_amplitude),
            ));
        }
        if !(self.noise_variance.is_finite() && self.noise_variance >= 0.0) {
            return Err(Error::validation(
                "noise_variance",
                format!("must be finite and >= 0, got {}", self.noise_variance),
            ));
        }
        Ok(())
    }

    /// `√P · Σ a_i`, the RSS of a fully aligned network.
    pub fn aligned_rss(&self, channel: &ChannelRealization) -> f64 {
        self.symbol_amplitude * channel.amplitude_sum()
    }
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            n_transmitters: 500,
            symbol_amplitude: 1.0,
            noise_variance: 0.0,
        }
    }
}

/// Draws `n` i.i.d. unit-variance circularly-symmetric complex Gaussian
/// coefficients. For each transmitter the real part is drawn before the
/// imaginary part; this order is part of the reproducibility contract.
pub fn sample_rayleigh_channel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ChannelRealization> {
    if n == 0 {
        return Err(Error::invalid("cannot sample a channel with zero transmitters"));
    }
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid std dev");
    let mut amplitudes = Vec::with_capacity(n);
    let mut phases = Vec::with_capacity(n);
    for _ in 0..n {
        let h = Complex64::new(normal.sample(rng), normal.sample(rng));
        let (a, mut phi) = h.to_polar();
        if phi >= PI {
            phi -= 2.0 * PI;
        }
        amplitudes.push(a);
        phases.push(phi);
    }
    ChannelRealization::new(amplitudes, phases)
}

fn check_lengths(channel: &ChannelRealization, state: &BeamformerState) -> Result<()> {
    if channel.len() != state.len() {
        return Err(Error::invalid(format!(
            "channel has {} transmitters but state has {}",
            channel.len(),
            state.len()
        )));
    }
    Ok(())
}

/// `θ_i = φ_i + ψ_i` elementwise.
pub fn total_phases(channel: &ChannelRealization, state: &BeamformerState) -> Result<Vec<f64>> {
    check_lengths(channel, state)?;
    Ok(channel
        .phases
        .iter()
        .zip(&state.psi)
        .map(|(phi, psi)| phi + psi)
        .collect())
}

/// `Σ a_i exp(j(φ_i + ψ_i))`, with transmitter `offset.0` additionally
/// rotated by `offset.1` radians.
pub(crate) fn coherent_sum(
    channel: &ChannelRealization,
    psi: &[f64],
    offset: Option<(usize, f64)>,
) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, ((a, phi), psi)) in channel
        .amplitudes
        .iter()
        .zip(&channel.phases)
        .zip(psi)
        .enumerate()
    {
        let mut theta = phi + psi;
        if let Some((i, delta)) = offset {
            if i == k {
                theta += delta;
            }
        }
        sum += Complex64::from_polar(*a, theta);
    }
    sum
}

fn check_config(channel: &ChannelRealization, config: &SystemConfig) -> Result<()> {
    if config.n_transmitters != channel.len() {
        return Err(Error::invalid(format!(
            "config declares {} transmitters but channel has {}",
            config.n_transmitters,
            channel.len()
        )));
    }
    Ok(())
}

/// Received signal strength `√P · |Σ a_i exp(j θ_i)|`.
pub fn rss(channel: &ChannelRealization, state: &BeamformerState, config: &SystemConfig) -> Result<f64> {
    check_lengths(channel, state)?;
    check_config(channel, config)?;
    Ok(config.symbol_amplitude * coherent_sum(channel, &state.psi, None).norm())
}

/// RSS with transmitter `i` temporarily rotated by `offset`; `state` is only
/// borrowed, so nothing is written back.
pub(crate) fn rss_with_offset(
    channel: &ChannelRealization,
    state: &BeamformerState,
    config: &SystemConfig,
    i: usize,
    offset: f64,
) -> f64 {
    config.symbol_amplitude * coherent_sum(channel, &state.psi, Some((i, offset))).norm()
}

/// RSS as a fraction of the aligned maximum `√P · Σ a_i`.
pub fn normalized_rss(
    channel: &ChannelRealization,
    state: &BeamformerState,
    config: &SystemConfig,
) -> Result<f64> {
    let value = rss(channel, state, config)?;
    let max = config.aligned_rss(channel);
    if max <= 0.0 {
        return Err(Error::DegenerateChannel);
    }
    Ok(value / max)
}
