//! `phasealign` command line.
//!
//! ```text
//! phasealign run     --config <path> [--seed N] --out <path> [--format csv|json] [--quiet]
//! phasealign compare --config <path> [--seed N] --out <dir> [--quiet]
//! phasealign sweep   --config <path> [--seed N] --out <path> [--quiet]
//! ```
//!
//! Exit codes: 0 success, 1 validation error, 2 I/O error, 3 numeric error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::parse_config;
use crate::error::{Error, Result};
use crate::harness::{run_comparison, run_experiment, run_sweep, ExperimentReport, ExperimentSpec};
use crate::output::{write_comparison_csv, write_json, write_summary_json, write_sweep_csv, write_trace_csv};
use crate::trace::Algorithm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides `master_seed` from the configuration.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run one experiment; writes the per-slot trace CSV and the summary JSON.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Which artifact goes at `--out`; the other is written next to it.
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Run DDSA and the one-bit baseline on paired channels into `--out` (a directory).
    Compare {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run every point of the configuration's `grid`; one CSV row per point.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Parser)]
#[command(name = "phasealign", version, about = "Distributed beamforming phase-alignment experiments")]
pub struct CliInvocation {
    #[command(subcommand)]
    pub command: Command,
}

impl CliInvocation {
    fn common(&self) -> &CommonArgs {
        match &self.command {
            Command::Run { common, .. } | Command::Compare { common } | Command::Sweep { common } => common,
        }
    }
}

fn load_spec(common: &CommonArgs) -> Result<ExperimentSpec> {
    let contents = fs::read_to_string(&common.config)?;
    let mut spec = parse_config(&contents)?;
    if let Some(seed) = common.seed {
        spec.master_seed = seed;
    }
    Ok(spec)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn report_line(name: &str, report: &ExperimentReport) -> String {
    let agg = &report.aggregate;
    let mean_final = agg.final_normalized_rss.map_or(f64::NAN, |s| s.mean);
    let mean_slots = agg.slots_to_threshold.map_or(f64::NAN, |s| s.mean);
    format!(
        "{name}: {}/{} trials reached {} (mean slots {mean_slots:.1}), mean final normalized RSS {mean_final:.4}, {} failures",
        agg.reached,
        agg.trials,
        report.spec.threshold,
        report.failures.len()
    )
}

/// Executes a parsed invocation, writing all artifacts.
pub fn run_command(invocation: &CliInvocation) -> Result<()> {
    let common = invocation.common();
    let spec = load_spec(common)?;
    match &invocation.command {
        Command::Run { format, .. } => {
            let report = run_experiment(&spec)?;
            let (trace_path, summary_path) = match format {
                OutputFormat::Csv => (common.out.clone(), sibling(&common.out, ".summary.json")),
                OutputFormat::Json => (sibling(&common.out, ".trace.csv"), common.out.clone()),
            };
            write_trace_csv(&report.traces, create(&trace_path)?)?;
            write_summary_json(&report, create(&summary_path)?)?;
            if !common.quiet {
                eprintln!("{}", report_line(spec.algorithm.as_str(), &report));
            }
            first_failure(&report)
        }
        Command::Compare { .. } => {
            let dir = &common.out;
            fs::create_dir_all(dir)?;
            let cmp = run_comparison(&spec, true)?;
            for (report, alg) in [(&cmp.ddsa, Algorithm::Ddsa), (&cmp.onebit, Algorithm::Onebit)] {
                write_trace_csv(&report.traces, create(&dir.join(format!("{alg}_trace.csv")))?)?;
                write_summary_json(report, create(&dir.join(format!("{alg}_summary.json")))?)?;
            }
            write_comparison_csv(&cmp, create(&dir.join("comparison.csv"))?)?;
            write_json(
                &serde_json::json!({
                    "trials": spec.trials,
                    "threshold": spec.threshold,
                    "ddsa_win_fraction": cmp.ddsa_win_fraction,
                    "ddsa": cmp.ddsa.aggregate,
                    "onebit": cmp.onebit.aggregate,
                }),
                create(&dir.join("comparison.json"))?,
            )?;
            if !common.quiet {
                eprintln!("{}", report_line("ddsa", &cmp.ddsa));
                eprintln!("{}", report_line("onebit", &cmp.onebit));
                eprintln!("ddsa win fraction: {:.3}", cmp.ddsa_win_fraction);
            }
            first_failure(&cmp.ddsa).and(first_failure(&cmp.onebit))
        }
        Command::Sweep { .. } => {
            let rows = run_sweep(&spec)?;
            write_sweep_csv(&rows, create(&common.out)?)?;
            if !common.quiet {
                eprintln!("wrote {} sweep points to {}", rows.len(), common.out.display());
            }
            Ok(())
        }
    }
}

/// Artifacts are written even when trials fail; the status reflects the
/// first failure.
fn first_failure(report: &ExperimentReport) -> Result<()> {
    match report.failures.first() {
        None => Ok(()),
        Some(f) => Err(Error::TrialsFailed {
            failed: report.failures.len(),
            first: format!("trial {}: {}", f.trial, f.message),
            exit_code: f.exit_code,
        }),
    }
}

/// Parses `args`, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let invocation = match CliInvocation::try_parse_from(args) {
        Ok(inv) => inv,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_command(&invocation) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
