use std::f64::consts::PI;

use phasealign::ddsa::{
    probe_round, run_ddsa, run_ddsa_sweep, solve_differential, Differential, FeedbackMode, ProbeTriple,
    QuantizerConfig,
};
use phasealign::network::{normalized_rss, rss, BeamformerState, ChannelRealization, SystemConfig};
use phasealign::onebit::{run_onebit, OneBitConfig};
use phasealign::trace::{NullSink, TraceRecord};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn forward(r: f64, c: f64, beta: f64) -> [f64; 3] {
    [0.0, 1.0, 2.0].map(|j: f64| (r * r + c * c + 2.0 * r * c * (beta + 2.0 * PI * j / 3.0).cos()).sqrt())
}

fn gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn network(max_n: usize) -> impl Strategy<Value = (ChannelRealization, BeamformerState, SystemConfig)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(0.01f64..3.0, n),
            prop::collection::vec(-PI..PI, n),
            prop::collection::vec(-4.0f64..4.0, n),
            0.1f64..4.0,
        )
            .prop_map(move |(a, phi, psi, sqrt_p)| {
                (
                    ChannelRealization::new(a, phi).unwrap(),
                    BeamformerState::from_phases(psi),
                    SystemConfig::new(n, sqrt_p).unwrap(),
                )
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn solver_round_trip_wide_range(
        r in 1e-3f64..1e3,
        c in 1e-3f64..1e3,
        beta in -PI..PI,
    ) {
        let probes = ProbeTriple::new(forward(r, c, beta)).unwrap();
        let m = probes.values();
        let d = solve_differential(&probes).unwrap();
        let est = d.estimate().copied().expect("resolvable geometry");
        prop_assert!(gap(est.beta, beta) <= 1e-9, "beta {} vs {}", est.beta, beta);
        // Near R = C the unordered pair is only determined to ~√eps.
        let (hi, lo) = (r.max(c), r.min(c));
        if hi - lo >= 1e-6 * hi {
            prop_assert!((est.r_mag - hi).abs() <= 1e-9 * hi);
            prop_assert!((est.c_mag - lo).abs() <= 1e-9 * lo);
        }
        // Substituting back reproduces every probe.
        for (j, mj) in m.iter().enumerate() {
            let sq = est.r_mag.powi(2) + est.c_mag.powi(2)
                + 2.0 * est.r_mag * est.c_mag * (est.beta + 2.0 * PI * j as f64 / 3.0).cos();
            prop_assert!((sq - mj * mj).abs() <= 1e-9 * (mj * mj).max(1.0));
        }
        let sum_sq: f64 = m.iter().map(|x| x * x).sum();
        prop_assert!((sum_sq - 3.0 * (r * r + c * c)).abs() <= 1e-9 * sum_sq.max(1.0));
    }

    #[test]
    fn probing_is_side_effect_free((channel, state, cfg) in network(12), pick in any::<prop::sample::Index>()) {
        let before = state.clone();
        let i = pick.index(state.len());
        let probes = probe_round(&channel, &state, &cfg, i).unwrap();
        prop_assert_eq!(&state, &before);
        prop_assert_eq!(probes.baseline(), rss(&channel, &state, &cfg).unwrap());
    }

    #[test]
    fn probed_geometry_matches_phasors((channel, state, cfg) in network(12), pick in any::<prop::sample::Index>()) {
        let i = pick.index(state.len());
        let probes = probe_round(&channel, &state, &cfg, i).unwrap();
        let sqrt_p = cfg.symbol_amplitude;
        let c_mag = sqrt_p * channel.amplitudes()[i];
        let rest = BeamformerState::from_phases(state.psi().to_vec());
        let mut rest_channel_amps = channel.amplitudes().to_vec();
        rest_channel_amps[i] = 0.0;
        let rest_channel = ChannelRealization::new(rest_channel_amps, channel.phases().to_vec()).unwrap();
        let r_mag = rss(&rest_channel, &rest, &cfg).unwrap();
        if let Differential::Resolved(est) = solve_differential(&probes).unwrap() {
            let (hi, lo) = (r_mag.max(c_mag), r_mag.min(c_mag));
            if hi - lo > 1e-4 * hi && lo > 1e-6 * hi {
                prop_assert!((est.r_mag - hi).abs() <= 1e-8 * hi);
                prop_assert!((est.c_mag - lo).abs() <= 1e-8 * hi);
            }
        }
    }

    #[test]
    fn ddsa_rounds_never_lower_rss((channel, state, cfg) in network(24), bits in 1u32..=5, exact in any::<bool>()) {
        let mut state = state;
        let mode = if exact { FeedbackMode::Exact } else { FeedbackMode::Quantized(QuantizerConfig::new(bits).unwrap()) };
        let mut trace: Vec<TraceRecord> = Vec::new();
        let logs = run_ddsa(&channel, &mut state, &cfg, &mode, 2, &mut trace).unwrap();
        prop_assert_eq!(trace.len(), 1 + 2 * 2 * channel.len());
        for w in trace.windows(2) {
            prop_assert!(w[1].rss >= w[0].rss);
        }
        for log in &logs {
            prop_assert!(log.rss_after >= log.probes.baseline() * (1.0 - 1e-12));
        }
        for r in &trace {
            prop_assert!(r.normalized_rss <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn exact_round_reaches_coordinate_maximum((channel, state, cfg) in network(16)) {
        let mut state = state;
        let logs = run_ddsa_sweep(&channel, &mut state, &cfg, &FeedbackMode::Exact, &mut NullSink).unwrap();
        for log in &logs {
            if let Some(est) = log.estimate.estimate() {
                let bound = est.r_mag + est.c_mag;
                prop_assert!((log.rss_after - bound).abs() <= 1e-9 * bound.max(1.0));
            }
        }
    }

    #[test]
    fn normalized_rss_global_phase_invariant((channel, state, cfg) in network(16), shift in -10.0f64..10.0) {
        let shifted = BeamformerState::from_phases(state.psi().iter().map(|p| p + shift).collect());
        let a = normalized_rss(&channel, &state, &cfg).unwrap();
        let b = normalized_rss(&channel, &shifted, &cfg).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
    }

    #[test]
    fn onebit_best_is_monotone((channel, state, cfg) in network(16), seed in any::<u64>(), delta in 0.01f64..1.0) {
        let mut state = state;
        let mut trace: Vec<TraceRecord> = Vec::new();
        let config = OneBitConfig::new(delta, 200).unwrap();
        let start = rss(&channel, &state, &cfg).unwrap();
        run_onebit(&channel, &mut state, &cfg, &config, None, &mut ChaCha8Rng::seed_from_u64(seed), &mut trace).unwrap();
        prop_assert!(trace[0].rss >= start);
        for w in trace.windows(2) {
            prop_assert!(w[1].rss >= w[0].rss);
        }
        prop_assert_eq!(trace.last().unwrap().rss, rss(&channel, &state, &cfg).unwrap());
    }
}
