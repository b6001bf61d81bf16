//! K-bit phase-correction codebook carried on the reverse link.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::solver::{Differential, DifferentialEstimate};
use crate::error::{Error, Result};

pub const MAX_FEEDBACK_BITS: u32 = 16;

/// `2^K` corrections `2πm / 2^K`, `m = 0 … 2^K − 1`. Level 0 is the no-op.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantizerConfig {
    bits: u32,
}

impl QuantizerConfig {
    pub fn new(bits: u32) -> Result<Self> {
        if bits == 0 || bits > MAX_FEEDBACK_BITS {
            return Err(Error::validation(
                "feedback_bits",
                format!("must be in 1..={MAX_FEEDBACK_BITS}, got {bits}"),
            ));
        }
        Ok(Self { bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn level_count(&self) -> usize {
        1usize << self.bits
    }

    /// Spacing between adjacent levels.
    pub fn step(&self) -> f64 {
        2.0 * PI / self.level_count() as f64
    }

    pub fn level(&self, index: usize) -> f64 {
        self.step() * index as f64
    }

    pub fn levels(&self) -> Vec<f64> {
        (0..self.level_count()).map(|m| self.level(m)).collect()
    }

    /// Index of the level closest to `angle` on the circle. Equidistant
    /// candidates resolve to the smaller index.
    pub fn nearest_index(&self, angle: f64) -> usize {
        let n = self.level_count() as i64;
        let x = angle / self.step();
        let lo = x.floor();
        let (d_lo, d_hi) = (x - lo, lo + 1.0 - x);
        let wrap = |k: f64| (k as i64).rem_euclid(n) as usize;
        if d_lo < d_hi {
            wrap(lo)
        } else if d_hi < d_lo {
            wrap(lo + 1.0)
        } else {
            wrap(lo).min(wrap(lo + 1.0))
        }
    }
}

/// K-bit index the receiver sends back; the transmitter subtracts that level
/// from its phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackMessage {
    pub level_index: usize,
}

/// Picks the level that maximizes the predicted post-adjustment RSS, which
/// is the level nearest `β`. Degenerate geometry yields the no-op level, as
/// does a level whose predicted RSS does not exceed the no-op's in f64.
pub fn select_feedback(differential: &Differential, quantizer: &QuantizerConfig) -> FeedbackMessage {
    let level_index = match differential {
        Differential::Resolved(e @ DifferentialEstimate { beta, .. }) if beta.is_finite() => {
            let nearest = quantizer.nearest_index(*beta);
            if e.predicted_rss(quantizer.level(nearest)) > e.predicted_rss(0.0) {
                nearest
            } else {
                0
            }
        }
        _ => 0,
    };
    FeedbackMessage { level_index }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_8};

    fn resolved(beta: f64) -> Differential {
        Differential::Resolved(DifferentialEstimate {
            r_mag: 2.0,
            c_mag: 1.0,
            beta,
        })
    }

    #[test]
    fn three_bit_codebook() {
        let q = QuantizerConfig::new(3).unwrap();
        let expected: Vec<f64> = (0..8).map(|m| m as f64 * FRAC_PI_4).collect();
        for (a, b) in q.levels().iter().zip(&expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn nearest_level_examples() {
        let q = QuantizerConfig::new(3).unwrap();
        assert_eq!(select_feedback(&resolved(FRAC_PI_3), &q).level_index, 1);
        assert_eq!(select_feedback(&resolved(0.0), &q).level_index, 0);
        assert_eq!(select_feedback(&resolved(-FRAC_PI_8), &q).level_index, 0);
        assert_eq!(select_feedback(&resolved(-PI), &q).level_index, 4);
        assert_eq!(select_feedback(&resolved(-0.5), &q).level_index, 7);
    }

    #[test]
    fn ties_prefer_smaller_index() {
        let q = QuantizerConfig::new(2).unwrap();
        // π/4 sits halfway between levels 0 and π/2.
        assert_eq!(q.nearest_index(FRAC_PI_4), 0);
        assert_eq!(q.nearest_index(3.0 * FRAC_PI_4), 1);
    }

    #[test]
    fn degenerate_selects_noop() {
        let q = QuantizerConfig::new(3).unwrap();
        let msg = select_feedback(&Differential::Degenerate { power: 1.0 }, &q);
        assert_eq!(msg.level_index, 0);
    }

    #[test]
    fn nearest_matches_argmax_of_predicted_rss() {
        let est = DifferentialEstimate {
            r_mag: 3.0,
            c_mag: 0.7,
            beta: 0.0,
        };
        for bits in 1..=5 {
            let q = QuantizerConfig::new(bits).unwrap();
            for k in 0..500 {
                let beta = -PI + 2.0 * PI * (k as f64 + 0.37) / 500.0;
                let e = DifferentialEstimate { beta, ..est };
                let best = (0..q.level_count())
                    .max_by(|a, b| {
                        e.predicted_rss(q.level(*a))
                            .partial_cmp(&e.predicted_rss(q.level(*b)))
                            .unwrap()
                            .then(b.cmp(a))
                    })
                    .unwrap();
                assert_eq!(q.nearest_index(beta), best, "bits={bits} beta={beta}");
            }
        }
    }

    #[test]
    fn bit_bounds() {
        assert!(QuantizerConfig::new(0).is_err());
        assert!(QuantizerConfig::new(MAX_FEEDBACK_BITS + 1).is_err());
    }
}
