//! Upper and lower bounds on Tr(Λ²)/M for the Jakes correlation, obtained
//! from the large-argument form of J₀ and the harmonic series.

use std::f64::consts::PI;

use crate::constants::EULER_GAMMA;
use crate::error::{Error, Result};

fn check(m: usize, varpi: f64) -> Result<()> {
    if m < 4 {
        return Err(Error::DomainViolation(format!("bound needs M >= 4, got {m}")));
    }
    if !(varpi.is_finite() && varpi > 0.0) {
        return Err(Error::DomainViolation(format!("bound needs varpi > 0, got {varpi}")));
    }
    Ok(())
}

/// ζ(M, ϖ): parity-dependent upper bound on Tr(Λ²)/M.
pub fn zeta_bound(m: usize, varpi: f64) -> Result<f64> {
    check(m, varpi)?;
    let mf = m as f64;
    let tail = 1.0 / varpi - 2.0 / PI;
    let lead = 2.0 / (PI * varpi);
    Ok(if m % 2 == 1 {
        1.0 + lead * (EULER_GAMMA + ((m.div_ceil(2) - 1) as f64).ln()) + tail
    } else {
        1.0 + lead * (EULER_GAMMA + (mf / 2.0 - 1.0).ln()) + tail + 4.0 / (PI * varpi) * (1.0 + (varpi * mf).sin()) / mf
    })
}

/// Lower bound r₀² + (1/πϖ)[ε + ln(M−1)] + (1/2ϖ − 1/π) with r₀ = 1.
pub fn lb_bound(m: usize, varpi: f64) -> Result<f64> {
    check(m, varpi)?;
    Ok(1.0 + (EULER_GAMMA + (m as f64 - 1.0).ln()) / (PI * varpi) + (0.5 / varpi - 1.0 / PI))
}
