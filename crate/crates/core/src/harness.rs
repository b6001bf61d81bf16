//! Seeded Monte-Carlo experiments.
//!
//! Every trial draws a fresh i.i.d. Rayleigh channel, starts from
//! `ψ_i = 0` and runs one strategy. Trials are independent and run on the
//! rayon pool; results are gathered and aggregated in trial-index order, so
//! a report is a pure function of its [`ExperimentSpec`].
//!
//! # Seed derivation
//!
//! The per-trial seed is the `(trial_index + 1)`-th output of a SplitMix64
//! generator started at `master_seed`:
//!
//! ```text
//! z = master_seed + (trial_index + 1) · 0x9E3779B97F4A7C15   (wrapping)
//! z = (z ^ (z >> 30)) · 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) · 0x94D049BB133111EB
//! seed = z ^ (z >> 31)
//! ```
//!
//! The seed keys a ChaCha8 generator. Stream 0 draws the channel and stream 1
//! feeds the strategy, so two strategies run with the same trial index see
//! the same channel.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ddsa::{run_ddsa, FeedbackMode, QuantizerConfig};
use crate::error::{Error, Result};
use crate::network::{sample_rayleigh_channel, BeamformerState, SystemConfig};
use crate::onebit::{run_onebit, OneBitConfig, DEFAULT_DELTA_MAX};
use crate::trace::{slots_to_threshold_with, Algorithm, ConvergenceTrace, ThresholdMode};

const CHANNEL_STREAM: u64 = 0;
const STRATEGY_STREAM: u64 = 1;

/// Grid axes for a parameter sweep. Points are the cartesian product, with
/// `n_transmitters` outermost and `delta_max` innermost.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_transmitters: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feedback_bits: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_max: Option<Vec<f64>>,
}

impl SweepGrid {
    pub fn points(&self, base: &ExperimentSpec) -> Result<Vec<ExperimentSpec>> {
        let ns = self.n_transmitters.clone().unwrap_or_else(|| vec![base.n_transmitters]);
        let ks = self.feedback_bits.clone().unwrap_or_else(|| vec![base.feedback_bits]);
        let ds = self.delta_max.clone().unwrap_or_else(|| vec![base.delta_max]);
        if ns.is_empty() || ks.is_empty() || ds.is_empty() {
            return Err(Error::validation("grid", "axes must not be empty"));
        }
        let mut points = Vec::with_capacity(ns.len() * ks.len() * ds.len());
        for &n in &ns {
            for &k in &ks {
                for &d in &ds {
                    let spec = ExperimentSpec {
                        n_transmitters: n,
                        feedback_bits: k,
                        delta_max: d,
                        grid: None,
                        ..base.clone()
                    };
                    spec.validate()?;
                    points.push(spec);
                }
            }
        }
        Ok(points)
    }
}

fn default_n() -> usize {
    500
}
fn default_amplitude() -> f64 {
    1.0
}
fn default_bits() -> u32 {
    3
}
fn default_sweeps() -> usize {
    1
}
fn default_delta() -> f64 {
    DEFAULT_DELTA_MAX
}
fn default_max_slots() -> usize {
    OneBitConfig::default().max_slots
}
fn default_threshold() -> f64 {
    0.95
}
fn default_true() -> bool {
    true
}
fn default_trials() -> usize {
    100
}
fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default = "default_n")]
    pub n_transmitters: usize,
    #[serde(default = "default_amplitude")]
    pub symbol_amplitude: f64,
    #[serde(default)]
    pub noise_variance: f64,
    #[serde(default = "default_algorithm")]
    pub algorithm: Algorithm,
    #[serde(default = "default_bits")]
    pub feedback_bits: u32,
    #[serde(default)]
    pub exact_feedback: bool,
    #[serde(default = "default_sweeps")]
    pub sweeps: usize,
    #[serde(default = "default_delta")]
    pub delta_max: f64,
    #[serde(default = "default_max_slots")]
    pub max_slots: usize,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default)]
    pub threshold_mode: ThresholdMode,
    /// One-bit runs end at the first slot that reaches `threshold`.
    #[serde(default = "default_true")]
    pub stop_at_threshold: bool,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<SweepGrid>,
}

fn default_algorithm() -> Algorithm {
    Algorithm::Ddsa
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults deserialize")
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.system().validate()?;
        QuantizerConfig::new(self.feedback_bits)?;
        if self.sweeps == 0 {
            return Err(Error::validation("sweeps", "must be at least 1"));
        }
        self.onebit().validate()?;
        match self.threshold_mode {
            ThresholdMode::Normalized if !(self.threshold > 0.0 && self.threshold <= 1.0) => {
                return Err(Error::validation(
                    "threshold",
                    format!("must lie in (0, 1], got {}", self.threshold),
                ));
            }
            ThresholdMode::Absolute if !(self.threshold.is_finite() && self.threshold > 0.0) => {
                return Err(Error::validation(
                    "threshold",
                    format!("must be finite and > 0, got {}", self.threshold),
                ));
            }
            _ => {}
        }
        if self.trials == 0 {
            return Err(Error::validation("trials", "must be at least 1"));
        }
        Ok(())
    }

    pub fn system(&self) -> SystemConfig {
        SystemConfig {
            n_transmitters: self.n_transmitters,
            symbol_amplitude: self.symbol_amplitude,
            noise_variance: self.noise_variance,
        }
    }

    pub fn onebit(&self) -> OneBitConfig {
        OneBitConfig {
            delta_max: self.delta_max,
            max_slots: self.max_slots,
        }
    }

    pub fn feedback(&self) -> Result<FeedbackMode> {
        Ok(if self.exact_feedback {
            FeedbackMode::Exact
        } else {
            FeedbackMode::Quantized(QuantizerConfig::new(self.feedback_bits)?)
        })
    }

    pub fn with_algorithm(&self, algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            ..self.clone()
        }
    }
}

pub fn trial_seed(master_seed: u64, trial_index: usize) -> u64 {
    let mut z = master_seed.wrapping_add((trial_index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial: usize,
    pub seed: u64,
    /// `None` when the threshold was never reached.
    pub slots_to_threshold: Option<usize>,
    pub final_rss: f64,
    pub final_normalized_rss: f64,
    pub total_slots: usize,
}

pub fn run_trial(spec: &ExperimentSpec, trial_index: usize) -> Result<(ConvergenceTrace, TrialSummary)> {
    run_trial_inner(spec, trial_index).map_err(|source| Error::Trial {
        trial: trial_index,
        source: Box::new(source),
    })
}

fn run_trial_inner(spec: &ExperimentSpec, trial_index: usize) -> Result<(ConvergenceTrace, TrialSummary)> {
    spec.validate()?;
    let seed = trial_seed(spec.master_seed, trial_index);
    let system = spec.system();
    let channel = sample_rayleigh_channel(spec.n_transmitters, &mut stream_rng(seed, CHANNEL_STREAM))?;
    let mut state = BeamformerState::zeros(spec.n_transmitters);
    let mut trace = ConvergenceTrace::new(spec.algorithm, trial_index, seed);

    match spec.algorithm {
        Algorithm::Ddsa => {
            run_ddsa(&channel, &mut state, &system, &spec.feedback()?, spec.sweeps, &mut trace)?;
        }
        Algorithm::Onebit => {
            let stop = spec
                .stop_at_threshold
                .then_some((spec.threshold, spec.threshold_mode));
            let mut rng = stream_rng(seed, STRATEGY_STREAM);
            run_onebit(&channel, &mut state, &system, &spec.onebit(), stop, &mut rng, &mut trace)?;
        }
    }

    let last = *trace.last().ok_or_else(|| Error::invalid("strategy produced no slots"))?;
    let summary = TrialSummary {
        trial: trial_index,
        seed,
        slots_to_threshold: slots_to_threshold_with(&trace, spec.threshold, spec.threshold_mode)?,
        final_rss: last.rss,
        final_normalized_rss: last.normalized_rss,
        total_slots: trace.len(),
    };
    Ok((trace, summary))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation; zero for a single value.
    pub std: f64,
}

impl Stats {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len().is_multiple_of(2) {
            (sorted[mid - 1] + sorted[mid]) / 2.0
        } else {
            sorted[mid]
        };
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(Self { mean, median, std })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub trials: usize,
    pub completed: usize,
    pub reached: usize,
    pub fraction_reached: f64,
    /// Over trials that reached the threshold.
    pub slots_to_threshold: Option<Stats>,
    pub final_normalized_rss: Option<Stats>,
}

impl Aggregate {
    pub fn from_summaries(trials: usize, summaries: &[TrialSummary]) -> Self {
        let slots: Vec<f64> = summaries
            .iter()
            .filter_map(|s| s.slots_to_threshold.map(|k| k as f64))
            .collect();
        let finals: Vec<f64> = summaries.iter().map(|s| s.final_normalized_rss).collect();
        Self {
            trials,
            completed: summaries.len(),
            reached: slots.len(),
            fraction_reached: slots.len() as f64 / trials as f64,
            slots_to_threshold: Stats::from_values(&slots),
            final_normalized_rss: Stats::from_values(&finals),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub summaries: Vec<TrialSummary>,
    pub failures: Vec<TrialFailure>,
    pub aggregate: Aggregate,
    #[serde(skip)]
    pub traces: Vec<ConvergenceTrace>,
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    run_experiment_with(spec, true)
}

/// Like [`run_experiment`]; traces are dropped unless `keep_traces`.
pub fn run_experiment_with(spec: &ExperimentSpec, keep_traces: bool) -> Result<ExperimentReport> {
    spec.validate()?;
    let results: Vec<_> = (0..spec.trials)
        .into_par_iter()
        .map(|t| {
            run_trial(spec, t).map(|(trace, summary)| (keep_traces.then_some(trace), summary))
        })
        .collect();

    let mut summaries = Vec::with_capacity(results.len());
    let mut traces = Vec::new();
    let mut failures = Vec::new();
    for (trial, result) in results.into_iter().enumerate() {
        match result {
            Ok((trace, summary)) => {
                traces.extend(trace);
                summaries.push(summary);
            }
            Err(err) => failures.push(TrialFailure {
                trial,
                message: err.to_string(),
                exit_code: err.exit_code(),
            }),
        }
    }
    let aggregate = Aggregate::from_summaries(spec.trials, &summaries);
    Ok(ExperimentReport {
        spec: spec.clone(),
        summaries,
        failures,
        aggregate,
        traces,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedOutcome {
    pub trial: usize,
    pub ddsa_slots: Option<usize>,
    pub onebit_slots: Option<usize>,
    pub ddsa_wins: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub ddsa: ExperimentReport,
    pub onebit: ExperimentReport,
    pub pairs: Vec<PairedOutcome>,
    /// Fraction of pairs where DDSA reached the threshold in strictly fewer
    /// slots (an unreached threshold counts as infinitely many).
    pub ddsa_win_fraction: f64,
}

/// Runs both strategies on the same per-trial channels.
pub fn run_comparison(spec: &ExperimentSpec, keep_traces: bool) -> Result<Comparison> {
    let ddsa = run_experiment_with(&spec.with_algorithm(Algorithm::Ddsa), keep_traces)?;
    let onebit = run_experiment_with(&spec.with_algorithm(Algorithm::Onebit), keep_traces)?;
    let slots_of = |report: &ExperimentReport, t: usize| {
        report
            .summaries
            .iter()
            .find(|s| s.trial == t)
            .and_then(|s| s.slots_to_threshold)
    };
    let pairs: Vec<PairedOutcome> = (0..spec.trials)
        .map(|trial| {
            let ddsa_slots = slots_of(&ddsa, trial);
            let onebit_slots = slots_of(&onebit, trial);
            let ddsa_wins = match (ddsa_slots, onebit_slots) {
                (Some(d), Some(o)) => d < o,
                (Some(_), None) => true,
                (None, _) => false,
            };
            PairedOutcome {
                trial,
                ddsa_slots,
                onebit_slots,
                ddsa_wins,
            }
        })
        .collect();
    let wins = pairs.iter().filter(|p| p.ddsa_wins).count();
    Ok(Comparison {
        ddsa,
        onebit,
        ddsa_win_fraction: wins as f64 / spec.trials as f64,
        pairs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub algorithm: Algorithm,
    pub n_transmitters: usize,
    pub feedback_bits: u32,
    pub delta_max: f64,
    pub aggregate: Aggregate,
}

pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<SweepRow>> {
    let grid = spec
        .grid
        .as_ref()
        .ok_or_else(|| Error::validation("grid", "sweep requires a grid"))?;
    grid.points(spec)?
        .into_iter()
        .map(|point| {
            let report = run_experiment_with(&point, false)?;
            Ok(SweepRow {
                algorithm: point.algorithm,
                n_transmitters: point.n_transmitters,
                feedback_bits: point.feedback_bits,
                delta_max: point.delta_max,
                aggregate: report.aggregate,
            })
        })
        .collect()
}
