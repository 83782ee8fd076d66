//! Turns a scenario into Monte Carlo runs and a rates CSV.

use std::collections::HashMap;

use raqmimo_core::channel::{eig_correlation, jakes_correlation, CorrelationEigs, FadingModel};
use raqmimo_core::rates::monte_carlo::jittered_theta;
use raqmimo_core::rates::{ergodic_rate_mc, LargeScale, McScenario, RadioBaseline, RateCase, RateEstimate};
use raqmimo_core::transduction::SensingRegime;
use raqmimo_core::units::{db_to_linear, dbm_to_watts};
use raqmimo_core::Complex64;

use crate::config::{Receiver, ScenarioConfig, SweepAxis};
use crate::error::{CliError, CliResult};
use crate::output::{num, CsvArtifact, RATES_HEADER, RATES_SCHEMA};

/// Noise power referred to a unit-gain sensor and the common phase factor
/// Φ applied to every sensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub sigma_sq: f64,
    pub phi: Complex64,
    /// Π in dB, quantum receivers only.
    pub snr_ratio_db: Option<f64>,
}

pub fn link_budget(cfg: &ScenarioConfig, receiver: Receiver, regime: SensingRegime) -> CliResult<LinkBudget> {
    let baseline = RadioBaseline::from_config(&cfg.physics.baseline)?;
    match receiver {
        Receiver::Classical => Ok(LinkBudget { sigma_sq: baseline.classical_noise(), phi: Complex64::new(1.0, 0.0), snr_ratio_db: None }),
        Receiver::Quantum => {
            let pi_db = cfg.snr_ratio_db(regime)?;
            let op = cfg.physics.receiver.operating_point()?;
            Ok(LinkBudget {
                sigma_sq: baseline.quantum_noise(db_to_linear(pi_db)),
                phi: op.readout.phi_factor,
                snr_ratio_db: Some(pi_db),
            })
        }
    }
}

/// One curve: a rate case seen through one receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub case: RateCase,
    pub receiver: Receiver,
    pub regime: SensingRegime,
}

impl Series {
    pub fn plain(case: RateCase, receiver: Receiver, regime: SensingRegime) -> Self {
        Self { label: case.to_string(), case, receiver, regime }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint {
    pub sweep_value: f64,
    pub label: String,
    pub estimate: RateEstimate,
    pub seed: u64,
}

/// Array size, user count, per-user power (W) and large-scale model at a
/// sweep coordinate.
fn point_geometry(cfg: &ScenarioConfig, axis: SweepAxis, x: f64) -> (usize, usize, f64, LargeScale) {
    let ch = &cfg.channel;
    let (mut m, mut k) = (ch.m_sensors, ch.k_users);
    match axis {
        SweepAxis::Sensors => m = x as usize,
        SweepAxis::Users => k = x as usize,
        _ => {}
    }
    let p_s = match (axis, cfg.run.total_power_dbm) {
        (SweepAxis::Power, _) => dbm_to_watts(x),
        (_, Some(total)) => dbm_to_watts(total) / m as f64,
        (_, None) => dbm_to_watts(cfg.run.p_s_dbm),
    };
    let large_scale = if axis == SweepAxis::Distance {
        LargeScale::Fixed(vec![db_to_linear(ch.beta_ref_db) * x.powf(-ch.nu); k])
    } else if let Some(b) = &ch.betas {
        LargeScale::Fixed(if b.len() == 1 { vec![b[0]; k] } else { b.clone() })
    } else {
        LargeScale::Dropped(ch.user_drop())
    };
    (m, k, p_s, large_scale)
}

/// Runs every series at every grid value. All points share the master
/// seed, so curves use common random numbers.
pub fn evaluate(cfg: &ScenarioConfig, series: &[Series], axis: SweepAxis, grid: &[f64]) -> CliResult<Vec<RatePoint>> {
    let mut budgets = HashMap::new();
    let mut eigs: HashMap<usize, CorrelationEigs> = HashMap::new();
    let mut out = Vec::with_capacity(series.len() * grid.len());
    for &x in grid {
        let (m, k, p_s, large_scale) = point_geometry(cfg, axis, x);
        for s in series {
            let key = (s.receiver, s.regime);
            let budget = match budgets.get(&key) {
                Some(b) => *b,
                None => {
                    let b = link_budget(cfg, s.receiver, s.regime)?;
                    budgets.insert(key, b);
                    b
                }
            };
            let sc = McScenario {
                case: s.case,
                m_sensors: m,
                k_users: k,
                varpi: cfg.channel.varpi,
                large_scale: large_scale.clone(),
                p_s,
                sigma_sq: budget.sigma_sq,
                theta: jittered_theta(m, budget.phi, cfg.run.gain_jitter, cfg.run.master_seed)?,
                trials: cfg.run.trials,
                master_seed: cfg.run.master_seed,
            };
            let e = if s.case.model == FadingModel::Cfc {
                if !eigs.contains_key(&m) {
                    if m < 2 {
                        return Err(CliError::Config("correlated fading needs at least 2 sensors".into()));
                    }
                    eigs.insert(m, eig_correlation(&jakes_correlation(m, cfg.channel.varpi))?);
                }
                eigs.get(&m)
            } else {
                None
            };
            let estimate = ergodic_rate_mc(&sc, e)?;
            out.push(RatePoint { sweep_value: x, label: s.label.clone(), estimate, seed: cfg.run.master_seed });
        }
    }
    Ok(out)
}

pub fn rates_artifact(points: &[RatePoint], config_bytes: &[u8], seed: u64) -> CsvArtifact {
    let mut a = CsvArtifact::new(RATES_SCHEMA, &RATES_HEADER, config_bytes);
    a.seed = Some(seed);
    for p in points {
        let e = &p.estimate;
        a.push(vec![
            num(p.sweep_value),
            p.label.clone(),
            num(e.aggregate_rate),
            num(e.aggregate_stderr),
            num(e.aggregate_jensen),
            num(e.aggregate_closed_form.unwrap_or(f64::NAN)),
            e.trials.to_string(),
            p.seed.to_string(),
        ]);
    }
    a
}

/// The `run` subcommand.
pub fn run_scenario(cfg: &ScenarioConfig, config_bytes: &[u8]) -> CliResult<CsvArtifact> {
    let series: Vec<Series> =
        cfg.cases()?.into_iter().map(|c| Series::plain(c, cfg.run.receiver, cfg.physics.regime)).collect();
    let (axis, grid) = match &cfg.run.sweep {
        Some(s) => (s.axis, s.grid.clone()),
        None => (SweepAxis::Power, vec![cfg.run.p_s_dbm]),
    };
    let points = evaluate(cfg, &series, axis, &grid)?;
    let mut a = rates_artifact(&points, config_bytes, cfg.run.master_seed);
    a.note("sweep_axis", axis.label());
    a.note("receiver", format!("{:?}", cfg.run.receiver).to_lowercase());
    if cfg.run.receiver == Receiver::Quantum {
        a.note("regime", cfg.physics.regime.label());
        a.note("snr_ratio_db", num(cfg.snr_ratio_db(cfg.physics.regime)?));
    }
    Ok(a)
}
