//! DDSA against the one-bit baseline on identical channels: slots needed to
//! reach 95% of the aligned RSS, trial by trial.
//!
//! `cargo run --release --example paired_comparison -- [trials]`

use phasealign::harness::{run_comparison, ExperimentSpec};

fn main() -> phasealign::Result<()> {
    let trials = std::env::args().nth(1).map_or(10, |s| s.parse().expect("trials"));
    let spec = ExperimentSpec {
        trials,
        ..Default::default()
    };
    let cmp = run_comparison(&spec, false)?;
    println!("{:>5} {:>10} {:>10}", "trial", "ddsa", "one-bit");
    for p in &cmp.pairs {
        let show = |s: Option<usize>| s.map_or("-".to_string(), |k| k.to_string());
        println!("{:>5} {:>10} {:>10}", p.trial, show(p.ddsa_slots), show(p.onebit_slots));
    }
    println!("DDSA first in {:.0}% of pairs", 100.0 * cmp.ddsa_win_fraction);
    Ok(())
}
