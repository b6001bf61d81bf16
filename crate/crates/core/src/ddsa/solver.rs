//! Closed-form inversion of a three-probe measurement.
//!
//! Rotating transmitter `i` by `j·2π/3` while the rest of the network holds
//! produces
//!
//! ```text
//! M_j² = R² + C² + 2RC·cos(β + 2πj/3),   j = 0, 1, 2
//! ```
//!
//! where `R = |r_i|` is the rest-of-network phasor magnitude, `C = |c_i|` the
//! probed transmitter's magnitude and `β = arg(c_i) − arg(r_i)`. The cosines at
//! 120° spacing sum to zero, which separates the unknowns:
//!
//! ```text
//! S = (M_0² + M_1² + M_2²) / 3       = R² + C²
//! u = (2M_0² − M_1² − M_2²) / 3      = 2RC·cos β
//! v = (M_2² − M_1²) / √3             = 2RC·sin β
//! ```
//!
//! `R` and `C` enter symmetrically, so only the unordered pair is
//! identifiable; the solver reports `r_mag ≥ c_mag`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probe phase offset `α`.
pub const PROBE_STEP: f64 = 2.0 * PI / 3.0;

/// Relative threshold on `2RC` below which `β` is not resolvable.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Relative slack on the discriminant `S² − (2RC)²` before probes are declared
/// inconsistent. Values inside the slack are clamped to zero.
pub const DISCRIMINANT_TOLERANCE: f64 = 1e-9;

/// RSS measurements `(M_0, M_1, M_2)` at offsets `0, α, 2α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeTriple {
    m: [f64; 3],
}

impl ProbeTriple {
    pub fn new(m: [f64; 3]) -> Result<Self> {
        if let Some(j) = m.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::invalid(format!(
                "probe M_{j} must be finite and nonnegative, got {}",
                m[j]
            )));
        }
        Ok(Self { m })
    }

    /// Noise-free probes for a known geometry.
    pub fn synthesize(r_mag: f64, c_mag: f64, beta: f64) -> Result<Self> {
        let mut m = [0.0; 3];
        for (j, slot) in m.iter_mut().enumerate() {
            let sq = r_mag * r_mag
                + c_mag * c_mag
                + 2.0 * r_mag * c_mag * (beta + PROBE_STEP * j as f64).cos();
            *slot = sq.max(0.0).sqrt();
        }
        Self::new(m)
    }

    pub fn values(&self) -> [f64; 3] {
        self.m
    }

    /// `M_0`, the RSS at the unrotated phase.
    pub fn baseline(&self) -> f64 {
        self.m[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifferentialEstimate {
    pub r_mag: f64,
    pub c_mag: f64,
    /// Angle from the rest-of-network phasor to the probed phasor, in `[−π, π)`.
    pub beta: f64,
}

impl DifferentialEstimate {
    /// `√(R² + C² + 2RC·cos(β − correction))`, the RSS after the probed
    /// transmitter subtracts `correction` from its phase.
    pub fn predicted_rss(&self, correction: f64) -> f64 {
        let (r, c) = (self.r_mag, self.c_mag);
        (r * r + c * c + 2.0 * r * c * (self.beta - correction).cos())
            .max(0.0)
            .sqrt()
    }
}

/// Outcome of inverting a probe triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Differential {
    Resolved(DifferentialEstimate),
    /// `2RC` vanished: the probed transmitter cannot be oriented relative to
    /// the rest of the network. `power` is `R² + C²`.
    Degenerate { power: f64 },
}

impl Differential {
    pub fn estimate(&self) -> Option<&DifferentialEstimate> {
        match self {
            Differential::Resolved(e) => Some(e),
            Differential::Degenerate { .. } => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, Differential::Degenerate { .. })
    }

    pub fn predicted_rss(&self, correction: f64) -> f64 {
        match self {
            Differential::Resolved(e) => e.predicted_rss(correction),
            Differential::Degenerate { power } => power.sqrt(),
        }
    }
}

pub(crate) fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y >= PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Recovers `(R, C, β)` from three probes.
pub fn solve_differential(probes: &ProbeTriple) -> Result<Differential> {
    let [m0, m1, m2] = probes.m;
    let (q0, q1, q2) = (m0 * m0, m1 * m1, m2 * m2);

    let power = (q0 + q1 + q2) / 3.0;
    let u = (2.0 * q0 - q1 - q2) / 3.0;
    let v = (q2 - q1) / 3f64.sqrt();
    let two_rc = u.hypot(v);

    if two_rc < DEGENERACY_TOLERANCE * power.max(1.0) {
        return Ok(Differential::Degenerate { power });
    }

    // (R² − C²)² = S² − (2RC)², factored to limit cancellation.
    let discriminant = (power - two_rc) * (power + two_rc);
    let tolerance = DISCRIMINANT_TOLERANCE * power.max(1.0).powi(2);
    if discriminant < -tolerance {
        return Err(Error::NumericInconsistency {
            discriminant,
            tolerance,
        });
    }
    let r_mag = ((power + discriminant.max(0.0).sqrt()) / 2.0).sqrt();
    // C from the product avoids the cancellation in (S − √disc)/2 when C ≪ R.
    let c_mag = two_rc / (2.0 * r_mag);

    Ok(Differential::Resolved(DifferentialEstimate {
        r_mag,
        c_mag,
        beta: wrap_angle(v.atan2(u)),
    }))
}
