//! Per-slot convergence records and the sink interface strategies emit into.

use serde::{Deserialize, Serialize};

use crate::ddsa::DdsaRoundLog;
use crate::error::{Error, Result};

/// Which phase-alignment strategy produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ddsa,
    Onebit,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Ddsa => "ddsa",
            Algorithm::Onebit => "onebit",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub slot: usize,
    pub rss: f64,
    pub normalized_rss: f64,
}

/// Receives slot records (and, for DDSA, round logs) as a strategy runs.
pub trait TraceSink {
    fn record(&mut self, record: TraceRecord);

    fn round(&mut self, _log: &DdsaRoundLog) {}
}

/// Discards everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct NullSink;

impl TraceSink for NullSink {
    fn record(&mut self, _record: TraceRecord) {}
}

impl TraceSink for Vec<TraceRecord> {
    fn record(&mut self, record: TraceRecord) {
        self.push(record);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub algorithm: Algorithm,
    pub trial: usize,
    pub seed: u64,
    pub records: Vec<TraceRecord>,
}

impl ConvergenceTrace {
    pub fn new(algorithm: Algorithm, trial: usize, seed: u64) -> Self {
        Self {
            algorithm,
            trial,
            seed,
            records: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }
}

impl TraceSink for ConvergenceTrace {
    fn record(&mut self, record: TraceRecord) {
        self.records.push(record);
    }
}

/// How a threshold is compared against a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdMode {
    /// Fraction of the aligned maximum, in `(0, 1]`.
    #[default]
    Normalized,
    /// Raw RSS value.
    Absolute,
}

/// First slot whose normalized RSS reaches `threshold`, or `None`.
pub fn slots_to_threshold(trace: &ConvergenceTrace, threshold: f64) -> Result<Option<usize>> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::invalid(format!(
            "normalized threshold must lie in (0, 1], got {threshold}"
        )));
    }
    slots_to_threshold_with(trace, threshold, ThresholdMode::Normalized)
}

pub fn slots_to_threshold_with(
    trace: &ConvergenceTrace,
    threshold: f64,
    mode: ThresholdMode,
) -> Result<Option<usize>> {
    if trace.is_empty() {
        return Err(Error::invalid("cannot search an empty trace"));
    }
    Ok(trace
        .records
        .iter()
        .find(|r| reaches(r, threshold, mode))
        .map(|r| r.slot))
}

pub(crate) fn reaches(record: &TraceRecord, threshold: f64, mode: ThresholdMode) -> bool {
    match mode {
        ThresholdMode::Normalized => record.normalized_rss >= threshold,
        ThresholdMode::Absolute => record.rss >= threshold,
    }
}
