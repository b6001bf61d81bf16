//! Simulation of distributed transmit beamforming with limited feedback.
//!
//! A network of single-antenna transmitters shares a common symbol and tries
//! to add coherently at one receiver. The receiver can only measure the
//! received signal strength and talk back over a narrow feedback link. This
//! crate provides:
//!
//! * [`network`]: channels, beamforming phases and the RSS oracle;
//! * [`ddsa`]: deterministic differential search with three-probe rounds and
//!   K-bit quantized feedback;
//! * [`onebit`]: the random-perturbation keep/revert baseline;
//! * [`harness`]: seeded Monte-Carlo trials and aggregate statistics;
//! * [`config`], [`output`] and [`cli`]: JSON configs, CSV/JSON results and
//!   the `phasealign` command line.

pub mod cli;
pub mod config;
pub mod ddsa;
pub mod error;
pub mod harness;
pub mod network;
pub mod onebit;
pub mod output;
pub mod trace;

pub use error::{Error, Result};
