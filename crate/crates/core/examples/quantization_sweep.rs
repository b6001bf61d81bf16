//! Final normalized RSS after one sweep as a function of feedback bits,
//! next to the large-network estimate sin(π/2^K) / (π/2^K).

use std::f64::consts::PI;

use phasealign::harness::{run_sweep, ExperimentSpec, SweepGrid};

fn main() -> phasealign::Result<()> {
    let spec = ExperimentSpec {
        n_transmitters: 200,
        trials: 50,
        grid: Some(SweepGrid {
            feedback_bits: Some(vec![1, 2, 3, 4, 5]),
            ..Default::default()
        }),
        ..Default::default()
    };
    println!("{:>2} {:>8} {:>8} {:>9}", "K", "mean", "std", "estimate");
    for row in run_sweep(&spec)? {
        let stats = row.aggregate.final_normalized_rss.expect("trials ran");
        let x = PI / f64::from(1u32 << row.feedback_bits);
        println!("{:>2} {:>8.4} {:>8.4} {:>9.4}", row.feedback_bits, stats.mean, stats.std, x.sin() / x);
    }
    Ok(())
}
