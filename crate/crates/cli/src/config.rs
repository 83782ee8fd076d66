//! Scenario files: TOML with `[physics]`, `[channel]`, `[run]` and an
//! optional `[feasible]` section. Unknown keys are rejected.

use serde::{Deserialize, Serialize};

use raqmimo_core::rates::{RadioBaselineConfig, RateCase, UserDrop};
use raqmimo_core::transduction::{ReceiverPhysics, SensingRegime};

use crate::error::{CliError, CliResult};

/// SNR ratio used when neither an explicit value nor a derivation is asked for.
pub fn nominal_snr_ratio_db(regime: SensingRegime) -> f64 {
    match regime {
        SensingRegime::Sql => 40.0,
        SensingRegime::Psl => 26.5,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub physics: PhysicsSection,
    pub channel: ChannelSection,
    pub run: RunSection,
    pub feasible: FeasibleSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicsSection {
    pub regime: SensingRegime,
    /// Per-sensor SNR ratio Π in dB; overrides the nominal value.
    pub snr_ratio_db: Option<f64>,
    /// Derive Π from `receiver` instead of using a fixed value.
    pub derive_snr_ratio: bool,
    pub receiver: ReceiverPhysics,
    pub baseline: RadioBaselineConfig,
}

impl Default for PhysicsSection {
    fn default() -> Self {
        Self {
            regime: SensingRegime::Psl,
            snr_ratio_db: None,
            derive_snr_ratio: false,
            receiver: ReceiverPhysics::default(),
            baseline: RadioBaselineConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelSection {
    pub m_sensors: usize,
    pub k_users: usize,
    pub varpi: f64,
    /// Fixed large-scale coefficients. One value is broadcast to all users;
    /// when absent users are dropped at random every trial.
    pub betas: Option<Vec<f64>>,
    pub center_m: f64,
    pub radius_m: f64,
    pub beta_ref_db: f64,
    pub nu: f64,
    pub shadow_sigma_db: f64,
}

impl Default for ChannelSection {
    fn default() -> Self {
        let d = UserDrop::default();
        Self {
            m_sensors: 128,
            k_users: 20,
            varpi: 1.0,
            betas: None,
            center_m: d.center_m,
            radius_m: d.radius_m,
            beta_ref_db: d.beta_ref_db,
            nu: d.nu,
            shadow_sigma_db: d.shadow_sigma_db,
        }
    }
}

impl ChannelSection {
    pub fn user_drop(&self) -> UserDrop {
        UserDrop {
            center_m: self.center_m,
            radius_m: self.radius_m,
            beta_ref_db: self.beta_ref_db,
            nu: self.nu,
            shadow_sigma_db: self.shadow_sigma_db,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Receiver {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    /// Transmit power per user, dBm.
    Power,
    Sensors,
    Users,
    /// Common user distance, m, with shadowing off.
    Distance,
}

impl SweepAxis {
    pub fn label(self) -> &'static str {
        match self {
            SweepAxis::Power => "power",
            SweepAxis::Sensors => "sensors",
            SweepAxis::Users => "users",
            SweepAxis::Distance => "distance",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub cases: Vec<String>,
    pub receiver: Receiver,
    pub p_s_dbm: f64,
    /// When set, each user transmits this total divided by M.
    pub total_power_dbm: Option<f64>,
    pub trials: usize,
    pub master_seed: u64,
    /// Relative standard deviation of a fixed per-sensor gain error.
    pub gain_jitter: f64,
    /// Marks a run whose numbers back an acceptance claim.
    pub acceptance: bool,
    pub sweep: Option<Sweep>,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            cases: RateCase::ALL.iter().map(|c| c.to_string()).collect(),
            receiver: Receiver::Quantum,
            p_s_dbm: 23.0,
            total_power_dbm: None,
            trials: 5000,
            master_seed: 1,
            gain_jitter: 0.0,
            acceptance: false,
            sweep: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeasibleSection {
    pub threshold: f64,
    pub k_grid: Vec<usize>,
    pub nu_grid: Vec<f64>,
}

impl Default for FeasibleSection {
    fn default() -> Self {
        Self { threshold: 0.01, k_grid: vec![1, 5, 10, 15, 20], nu_grid: vec![2.0, 3.8, 6.0] }
    }
}

fn field_err(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

fn strictly_increasing(field: &str, xs: &[f64]) -> CliResult<()> {
    if xs.is_empty() {
        return Err(field_err(field, "must not be empty"));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(field_err(field, "values must be finite"));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(field_err(field, "must be strictly increasing"));
    }
    Ok(())
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn cases(&self) -> CliResult<Vec<RateCase>> {
        if self.run.cases.is_empty() {
            return Err(field_err("run.cases", "must not be empty"));
        }
        self.run.cases.iter().map(|c| c.parse().map_err(|e| field_err("run.cases", e))).collect()
    }

    /// Π in dB for a regime under this configuration.
    pub fn snr_ratio_db(&self, regime: SensingRegime) -> CliResult<f64> {
        let p = &self.physics;
        if p.derive_snr_ratio {
            let ratio = raqmimo_core::rates::snr_ratio_per_sensor(regime, &p.receiver, &p.baseline)?;
            return Ok(raqmimo_core::units::linear_to_db(ratio));
        }
        Ok(match p.snr_ratio_db {
            Some(db) if regime == p.regime => db,
            _ => nominal_snr_ratio_db(regime),
        })
    }

    pub fn validate(&self) -> CliResult<()> {
        let p = &self.physics;
        if p.derive_snr_ratio && p.snr_ratio_db.is_some() {
            return Err(field_err("physics.snr_ratio_db", "cannot be combined with derive_snr_ratio = true"));
        }
        if let Some(db) = p.snr_ratio_db {
            if !db.is_finite() {
                return Err(field_err("physics.snr_ratio_db", "must be finite"));
            }
        }
        p.receiver.validate().map_err(|e| field_err("physics.receiver", e))?;
        p.baseline.validate().map_err(|e| field_err("physics.baseline", e))?;

        let c = &self.channel;
        if c.m_sensors == 0 || c.k_users == 0 {
            return Err(field_err("channel", "m_sensors and k_users must be at least 1"));
        }
        if !(c.varpi.is_finite() && c.varpi > 0.0) {
            return Err(field_err("channel.varpi", "must be positive"));
        }
        if let Some(b) = &c.betas {
            if b.len() != 1 && b.len() != c.k_users {
                return Err(field_err("channel.betas", format!("expected 1 or {} values, got {}", c.k_users, b.len())));
            }
            if b.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                return Err(field_err("channel.betas", "values must be positive"));
            }
        }
        if !(c.center_m > c.radius_m && c.radius_m > 0.0) {
            return Err(field_err("channel", "need center_m > radius_m > 0"));
        }
        if !(c.nu.is_finite() && c.nu > 0.0) || !(c.shadow_sigma_db >= 0.0) || !c.beta_ref_db.is_finite() {
            return Err(field_err("channel", "need nu > 0, shadow_sigma_db >= 0 and finite beta_ref_db"));
        }

        let r = &self.run;
        self.cases()?;
        if !r.p_s_dbm.is_finite() || r.total_power_dbm.is_some_and(|e| !e.is_finite()) {
            return Err(field_err("run.p_s_dbm", "powers must be finite"));
        }
        if !(r.gain_jitter.is_finite() && r.gain_jitter >= 0.0) {
            return Err(field_err("run.gain_jitter", "must be non-negative"));
        }
        if r.trials == 0 {
            return Err(field_err("run.trials", "must be at least 1"));
        }
        if r.acceptance && r.trials < 100 {
            return Err(field_err("run.trials", "acceptance runs need at least 100 trials"));
        }
        if let Some(s) = &r.sweep {
            strictly_increasing("run.sweep.grid", &s.grid)?;
            match s.axis {
                SweepAxis::Sensors | SweepAxis::Users => {
                    if s.grid.iter().any(|x| x.fract() != 0.0 || *x < 1.0) {
                        return Err(field_err("run.sweep.grid", "sensor and user counts must be positive integers"));
                    }
                    if s.axis == SweepAxis::Users && c.betas.as_ref().is_some_and(|b| b.len() != 1) {
                        return Err(field_err("channel.betas", "a user sweep needs a single broadcast beta"));
                    }
                }
                SweepAxis::Distance => {
                    if s.grid[0] < 1.0 {
                        return Err(field_err("run.sweep.grid", "distances must be at least 1 m"));
                    }
                }
                SweepAxis::Power => {}
            }
        }

        let f = &self.feasible;
        if !(f.threshold > 0.0 && f.threshold < 0.5) {
            return Err(field_err("feasible.threshold", "must lie in (0, 0.5)"));
        }
        if f.k_grid.is_empty() || f.k_grid.contains(&0) {
            return Err(field_err("feasible.k_grid", "must be non-empty with positive entries"));
        }
        strictly_increasing("feasible.nu_grid", &f.nu_grid)?;
        if f.nu_grid[0] <= 0.0 {
            return Err(field_err("feasible.nu_grid", "exponents must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_default_scenario() {
        assert_eq!(ScenarioConfig::parse("").unwrap(), ScenarioConfig::default());
    }

    #[test]
    fn unknown_key_is_an_error_with_location() {
        let err = ScenarioConfig::parse("[run]\ntrials = 200\ntrails = 3\n").unwrap_err().to_string();
        assert!(err.contains("trails"), "{err}");
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn nested_physics_tables_parse() {
        let cfg = ScenarioConfig::parse(
            "[physics]\nregime = \"SQL\"\n[physics.receiver.atoms]\ngamma3 = 1e4\n[physics.baseline]\nnoise_figure_db = 3\n",
        )
        .unwrap();
        assert_eq!(cfg.physics.regime, SensingRegime::Sql);
        assert_eq!(cfg.physics.receiver.atoms.gamma3, 1e4);
        assert_eq!(cfg.physics.baseline.noise_figure_db, 3.0);
    }

    #[test]
    fn grid_must_increase() {
        let err = ScenarioConfig::parse("[run.sweep]\naxis = \"power\"\ngrid = [1.0, 1.0]\n").unwrap_err();
        assert!(err.to_string().contains("run.sweep.grid"));
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn acceptance_runs_need_trials() {
        assert!(ScenarioConfig::parse("[run]\nacceptance = true\ntrials = 99\n").is_err());
        assert!(ScenarioConfig::parse("[run]\nacceptance = true\ntrials = 100\n").is_ok());
    }

    #[test]
    fn snr_ratio_resolution() {
        let cfg = ScenarioConfig::parse("[physics]\nregime = \"SQL\"\nsnr_ratio_db = 33.0\n").unwrap();
        assert_eq!(cfg.snr_ratio_db(SensingRegime::Sql).unwrap(), 33.0);
        assert_eq!(cfg.snr_ratio_db(SensingRegime::Psl).unwrap(), 26.5);
        assert!(ScenarioConfig::parse("[physics]\nsnr_ratio_db = 3.0\nderive_snr_ratio = true\n").is_err());
    }

    #[test]
    fn bad_case_name() {
        let err = ScenarioConfig::parse("[run]\ncases = [\"MMSE_UFC\"]\n").unwrap_err();
        assert!(err.to_string().contains("run.cases"));
    }
}
