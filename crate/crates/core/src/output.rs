//! Result serialization: CSV traces and tables, JSON summaries.
//!
//! Floats in CSV are written with 12 significant digits in the style of C's
//! `%.12g`, and every line ends with a bare LF.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::{Comparison, ExperimentReport, SweepRow};
use crate::trace::ConvergenceTrace;

pub const TRACE_HEADER: &str = "trial,algorithm,slot,rss,normalized_rss";

const SIG_DIGITS: usize = 12;

/// `%.12g`-style rendering.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_fraction(mantissa), sign, exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn fmt_opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Writes one row per slot record, ordered by (trial, slot).
pub fn write_trace_csv<W: Write>(traces: &[ConvergenceTrace], mut sink: W) -> Result<()> {
    let mut order: Vec<&ConvergenceTrace> = traces.iter().collect();
    order.sort_by_key(|t| t.trial);
    let mut out = String::with_capacity(64 * traces.iter().map(|t| t.len()).sum::<usize>() + 64);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for trace in order {
        let mut records: Vec<_> = trace.records.iter().collect();
        records.sort_by_key(|r| r.slot);
        for r in records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                trace.trial,
                trace.algorithm,
                r.slot,
                format_sig12(r.rss),
                format_sig12(r.normalized_rss)
            ));
        }
    }
    sink.write_all(out.as_bytes())?;
    sink.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(value: &T, mut sink: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut sink, value).map_err(|e| {
        if e.is_io() {
            Error::Io(e.into())
        } else {
            Error::Config(e.to_string())
        }
    })?;
    sink.write_all(b"\n")?;
    sink.flush()?;
    Ok(())
}

/// Summary JSON for one experiment: spec, per-trial summaries, failures and
/// aggregate statistics.
pub fn write_summary_json<W: Write>(report: &ExperimentReport, sink: W) -> Result<()> {
    write_json(report, sink)
}

pub const COMPARISON_HEADER: &str = "trial,ddsa_slots_to_threshold,onebit_slots_to_threshold,ddsa_wins";

/// Per-pair slots-to-threshold. Unreached thresholds are left empty.
pub fn write_comparison_csv<W: Write>(comparison: &Comparison, mut sink: W) -> Result<()> {
    let mut out = String::from(COMPARISON_HEADER);
    out.push('\n');
    for p in &comparison.pairs {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.trial,
            fmt_opt(p.ddsa_slots),
            fmt_opt(p.onebit_slots),
            p.ddsa_wins
        ));
    }
    sink.write_all(out.as_bytes())?;
    sink.flush()?;
    Ok(())
}

pub const SWEEP_HEADER: &str = "algorithm,n_transmitters,feedback_bits,delta_max,trials,fraction_reached,\
mean_slots_to_threshold,median_slots_to_threshold,std_slots_to_threshold,\
mean_final_normalized_rss,median_final_normalized_rss,std_final_normalized_rss";

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut sink: W) -> Result<()> {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        let agg = &row.aggregate;
        let s = agg.slots_to_threshold;
        let f = agg.final_normalized_rss;
        let cells = [
            row.algorithm.to_string(),
            row.n_transmitters.to_string(),
            row.feedback_bits.to_string(),
            format_sig12(row.delta_max),
            agg.trials.to_string(),
            format_sig12(agg.fraction_reached),
            fmt_opt(s.map(|s| format_sig12(s.mean))),
            fmt_opt(s.map(|s| format_sig12(s.median))),
            fmt_opt(s.map(|s| format_sig12(s.std))),
            fmt_opt(f.map(|s| format_sig12(s.mean))),
            fmt_opt(f.map(|s| format_sig12(s.median))),
            fmt_opt(f.map(|s| format_sig12(s.std))),
        ];
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    sink.write_all(out.as_bytes())?;
    sink.flush()?;
    Ok(())
}
