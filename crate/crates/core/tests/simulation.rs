use std::f64::consts::PI;

use phasealign::ddsa::{run_ddsa, run_ddsa_sweep, FeedbackMode, QuantizerConfig};
use phasealign::harness::{run_experiment, run_trial, ExperimentSpec};
use phasealign::network::{normalized_rss, sample_rayleigh_channel, BeamformerState, SystemConfig};
use phasealign::onebit::{run_onebit, OneBitConfig};
use phasealign::trace::{Algorithm, NullSink, TraceRecord};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn large_network_single_sweep_reaches_quantization_floor() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let channel = sample_rayleigh_channel(500, &mut rng).unwrap();
    let cfg = SystemConfig::new(500, 1.0).unwrap();
    let mut state = BeamformerState::zeros(500);
    let q = FeedbackMode::Quantized(QuantizerConfig::new(3).unwrap());
    let logs = run_ddsa_sweep(&channel, &mut state, &cfg, &q, &mut NullSink).unwrap();
    assert_eq!(logs.len(), 500);
    assert!(logs.iter().all(|l| l.slots_consumed == 2));
    let final_rss = normalized_rss(&channel, &state, &cfg).unwrap();
    assert!(final_rss >= 0.95, "{final_rss}");
}

#[test]
fn exact_feedback_converges_over_sweeps() {
    for n in [10, 100] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let channel = sample_rayleigh_channel(n, &mut rng).unwrap();
        let cfg = SystemConfig::new(n, 1.0).unwrap();
        let mut state = BeamformerState::zeros(n);
        run_ddsa(&channel, &mut state, &cfg, &FeedbackMode::Exact, 3, &mut NullSink).unwrap();
        assert!(normalized_rss(&channel, &state, &cfg).unwrap() >= 0.999);
    }
}

#[test]
fn onebit_improves_at_least_once_per_trial() {
    let cfg = SystemConfig::new(10, 1.0).unwrap();
    let config = OneBitConfig::new(PI / 30.0, 1000).unwrap();
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let channel = sample_rayleigh_channel(10, &mut rng).unwrap();
        let mut state = BeamformerState::zeros(10);
        let run = run_onebit(&channel, &mut state, &cfg, &config, None, &mut rng, &mut NullSink).unwrap();
        assert!(run.improvements >= 1, "seed {seed}");
    }
}

#[test]
fn onebit_approaches_alignment() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let channel = sample_rayleigh_channel(100, &mut rng).unwrap();
    let cfg = SystemConfig::new(100, 1.0).unwrap();
    let mut state = BeamformerState::zeros(100);
    let mut trace: Vec<TraceRecord> = Vec::new();
    let config = OneBitConfig::new(PI / 30.0, 5000).unwrap();
    run_onebit(&channel, &mut state, &cfg, &config, None, &mut rng, &mut trace).unwrap();
    assert!(trace.windows(2).all(|w| w[1].rss >= w[0].rss));
    let (first, last) = (trace[0].normalized_rss, trace[4999].normalized_rss);
    assert!(last > first + 0.3, "{first} -> {last}");
    assert!(last > 0.8, "{last}");
}

#[test]
fn onebit_trace_is_seed_deterministic() {
    let spec = ExperimentSpec {
        algorithm: Algorithm::Onebit,
        n_transmitters: 30,
        max_slots: 500,
        trials: 3,
        ..Default::default()
    };
    assert_eq!(run_experiment(&spec).unwrap(), run_experiment(&spec).unwrap());
}

#[test]
fn default_ddsa_trials_mostly_cross_threshold() {
    let spec = ExperimentSpec {
        trials: 20,
        ..Default::default()
    };
    let report = run_experiment(&spec).unwrap();
    assert!(report.failures.is_empty());
    assert!(report.aggregate.reached >= 19);
    for trace in &report.traces {
        assert_eq!(trace.len(), 1001);
        assert!(trace.records.iter().enumerate().all(|(k, r)| r.slot == k));
        assert!(trace.records.iter().all(|r| r.normalized_rss <= 1.0 + 1e-12));
    }
}

#[test]
fn trial_seed_changes_channel() {
    let spec = ExperimentSpec {
        n_transmitters: 8,
        trials: 2,
        ..Default::default()
    };
    let (a, _) = run_trial(&spec, 0).unwrap();
    let (b, _) = run_trial(&spec, 1).unwrap();
    assert_ne!(a.records[0].rss, b.records[0].rss);
    assert_ne!(a.seed, b.seed);
}
