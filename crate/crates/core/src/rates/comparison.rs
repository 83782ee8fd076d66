//! Classical antenna-array baseline and the quantum-vs-classical
//! comparison factors (rate gain, power saving, range extension).

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::constants::{BOLTZMANN, EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::error::{invalid, Result};
use crate::transduction::{probe_output, ReceiverPhysics, SensingRegime};
use crate::units::db_to_linear;

/// Parameters of one conventional RF chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadioBaselineConfig {
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub noise_figure_db: f64,
    pub temperature_k: f64,
    /// Antenna efficiency η₀.
    pub eta0: f64,
    pub g_ant_dbi: f64,
    pub g_lna_db: f64,
}

impl Default for RadioBaselineConfig {
    fn default() -> Self {
        Self {
            carrier_hz: 6.9458e9,
            bandwidth_hz: 1e5,
            noise_figure_db: 6.0,
            temperature_k: crate::constants::ROOM_TEMPERATURE,
            eta0: 1.0,
            g_ant_dbi: 0.0,
            g_lna_db: 0.0,
        }
    }
}

impl RadioBaselineConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("carrier_hz", self.carrier_hz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("temperature_k", self.temperature_k),
            ("eta0", self.eta0),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("noise_figure_db", self.noise_figure_db), ("g_ant_dbi", self.g_ant_dbi), ("g_lna_db", self.g_lna_db)] {
            if !v.is_finite() {
                return Err(invalid(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Effective aperture of an isotropic antenna, λ²/4π.
    pub fn a_iso(&self) -> f64 {
        let lambda = SPEED_OF_LIGHT / self.carrier_hz;
        lambda * lambda / (4.0 * PI)
    }
}

/// Gain, aperture and noise of the classical chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioBaseline {
    /// η₀ G_Ant G_LNA.
    pub varrho0: f64,
    pub a_iso: f64,
    /// k_B T₀ B F G_LNA, W.
    pub sigma0_sq: f64,
}

impl RadioBaseline {
    pub fn from_config(cfg: &RadioBaselineConfig) -> Result<Self> {
        cfg.validate()?;
        let g_lna = db_to_linear(cfg.g_lna_db);
        Ok(Self {
            varrho0: cfg.eta0 * db_to_linear(cfg.g_ant_dbi) * g_lna,
            a_iso: cfg.a_iso(),
            sigma0_sq: BOLTZMANN * cfg.temperature_k * cfg.bandwidth_hz * db_to_linear(cfg.noise_figure_db) * g_lna,
        })
    }

    /// Per-antenna SNR ϱ₀A_iso𝒫_sβ/σ₀².
    pub fn snr0(&self, p_s: f64, beta: f64) -> f64 {
        self.varrho0 * self.a_iso * p_s * beta / self.sigma0_sq
    }

    /// Noise power, referred to a unit-gain sensor, of a classical array.
    pub fn classical_noise(&self) -> f64 {
        self.sigma0_sq / (self.varrho0 * self.a_iso)
    }

    /// Noise power, referred to a unit-gain sensor, of a quantum array whose
    /// per-sensor SNR exceeds the classical one by the linear factor `ratio`.
    pub fn quantum_noise(&self, ratio: f64) -> f64 {
        self.classical_noise() / ratio
    }
}

/// SNR₁/SNR₀ per sensor from first principles.
pub fn snr_ratio_per_sensor(regime: SensingRegime, physics: &ReceiverPhysics, baseline: &RadioBaselineConfig) -> Result<f64> {
    physics.validate()?;
    baseline.validate()?;
    let thermal = BOLTZMANN * baseline.temperature_k * db_to_linear(baseline.noise_figure_db)
        / (baseline.eta0 * db_to_linear(baseline.g_ant_dbi));
    let area_ratio = physics.optics.a_p() / baseline.a_iso();
    Ok(match regime {
        SensingRegime::Sql => {
            let mu = physics.atoms.mu34;
            let n_eff = physics.participation * physics.atoms.n0;
            2.0 * mu * mu / (SPEED_OF_LIGHT * EPSILON_0 * HBAR * HBAR)
                * (n_eff / physics.dephasing)
                * (area_ratio * physics.optics.cell_length)
                * thermal
        }
        SensingRegime::Psl => {
            let op = physics.operating_point()?;
            let o = &physics.optics;
            let u_p_sq = {
                let amp = probe_output(o, op.susceptibility.chi).amplitude;
                amp * amp
            };
            o.eta_q * u_p_sq * op.readout.kappa * op.readout.kappa / (HBAR * 2.0 * PI * o.f_p)
                * area_ratio
                * thermal
        }
    })
}

/// Quantum-over-classical advantage for an SNR ratio Π (dB) and path-loss
/// exponent ν.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonFactors {
    /// Rate gain log₂Π, bits/s/Hz.
    pub delta_rate: f64,
    /// Transmit-power reduction Π.
    pub power_factor: f64,
    /// Range extension Π^{1/ν}.
    pub distance_factor: f64,
}

pub fn comparison_suite(pi_ratio_db: f64, nu_exponent: f64) -> Result<ComparisonFactors> {
    if !pi_ratio_db.is_finite() {
        return Err(invalid("SNR ratio must be finite"));
    }
    if !(nu_exponent >= 2.0) {
        return Err(invalid(format!("path-loss exponent must be at least 2, got {nu_exponent}")));
    }
    let pi = db_to_linear(pi_ratio_db);
    Ok(ComparisonFactors { delta_rate: pi.log2(), power_factor: pi, distance_factor: pi.powf(1.0 / nu_exponent) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transduction::snr1_per_sensor;
    use proptest::prelude::*;

    #[test]
    fn ratio_equals_snr_quotient() {
        let phys = ReceiverPhysics::default();
        let cfg = RadioBaselineConfig { g_lna_db: 17.0, ..RadioBaselineConfig::default() };
        let base = RadioBaseline::from_config(&cfg).unwrap();
        for regime in [SensingRegime::Sql, SensingRegime::Psl] {
            let (p_s, beta) = (0.2, 4e-10);
            let quotient = snr1_per_sensor(regime, &phys, p_s, cfg.bandwidth_hz, beta).unwrap() / base.snr0(p_s, beta);
            let ratio = snr_ratio_per_sensor(regime, &phys, &cfg).unwrap();
            assert!((ratio - quotient).abs() < 1e-10 * ratio, "{regime:?}: {ratio} vs {quotient}");
        }
    }

    #[test]
    fn ratio_halves_with_double_antenna_gain() {
        let phys = ReceiverPhysics::default();
        let cfg = RadioBaselineConfig::default();
        let doubled = RadioBaselineConfig { g_ant_dbi: cfg.g_ant_dbi + 10.0 * 2f64.log10(), ..cfg };
        for regime in [SensingRegime::Sql, SensingRegime::Psl] {
            let a = snr_ratio_per_sensor(regime, &phys, &cfg).unwrap();
            let b = snr_ratio_per_sensor(regime, &phys, &doubled).unwrap();
            assert!((b - 0.5 * a).abs() < 1e-12 * a);
        }
    }

    #[test]
    fn default_ratios_are_in_the_expected_range() {
        let phys = ReceiverPhysics::default();
        let cfg = RadioBaselineConfig::default();
        let sql = 10.0 * snr_ratio_per_sensor(SensingRegime::Sql, &phys, &cfg).unwrap().log10();
        let psl = 10.0 * snr_ratio_per_sensor(SensingRegime::Psl, &phys, &cfg).unwrap().log10();
        assert!((30.0..50.0).contains(&sql), "SQL ratio {sql} dB");
        assert!((15.0..40.0).contains(&psl), "PSL ratio {psl} dB");
    }

    #[test]
    fn comparison_reference_values() {
        let sql = comparison_suite(40.0, 2.0).unwrap();
        assert!((sql.power_factor - 1e4).abs() < 1e-8);
        assert!((sql.distance_factor - 100.0).abs() < 1e-10);
        assert!((comparison_suite(40.0, 6.0).unwrap().distance_factor - 10f64.powf(4.0 / 6.0)).abs() < 1e-12);
        assert!(comparison_suite(40.0, 1.5).is_err());
    }

    proptest! {
        #[test]
        fn ratio_independent_of_power_and_fading(p_s in 1e-3f64..10.0, beta in 1e-14f64..1e-3) {
            let phys = ReceiverPhysics::default();
            let cfg = RadioBaselineConfig::default();
            let base = RadioBaseline::from_config(&cfg).unwrap();
            let q = snr1_per_sensor(SensingRegime::Sql, &phys, p_s, cfg.bandwidth_hz, beta).unwrap() / base.snr0(p_s, beta);
            let r = snr_ratio_per_sensor(SensingRegime::Sql, &phys, &cfg).unwrap();
            prop_assert!((q - r).abs() <= 1e-10 * r);
        }
    }
}
