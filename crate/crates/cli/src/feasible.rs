//! Minimum user distance at which the linear superposition model holds.

use raqmimo_core::transduction::{superposition_error, user_field};
use raqmimo_core::units::{db_to_linear, dbm_to_watts};
use raqmimo_core::Error;

use crate::config::ScenarioConfig;
use crate::error::CliResult;
use crate::output::{num, CsvArtifact};

pub const FEASIBLE_SCHEMA: &str = "raqmimo-feasible/1";
pub const MAX_BISECTION: usize = 60;
/// Search interval for the boundary distance, m.
pub const DISTANCE_RANGE: (f64, f64) = (1e-3, 1e9);

/// Linearisation error when `k` users at distance `d` all arrive in phase,
/// the worst alignment for the first-order amplitude model.
pub fn aligned_error(u_y: f64, p_s: f64, beta_ref_db: f64, nu: f64, k: usize, d: f64) -> raqmimo_core::Result<f64> {
    let u = user_field(p_s, db_to_linear(beta_ref_db) * d.powf(-nu));
    superposition_error(u_y, &vec![u; k], &vec![0.0; k])
}

/// Bisects on log-distance for the point where the error falls to
/// `threshold`. Returns the lower end of the range if the model already
/// holds there.
pub fn min_linear_distance(
    u_y: f64,
    p_s: f64,
    beta_ref_db: f64,
    nu: f64,
    k: usize,
    threshold: f64,
) -> raqmimo_core::Result<f64> {
    let err = |d: f64| aligned_error(u_y, p_s, beta_ref_db, nu, k, d);
    let (mut lo, mut hi) = (DISTANCE_RANGE.0.ln(), DISTANCE_RANGE.1.ln());
    if err(DISTANCE_RANGE.0)? < threshold {
        return Ok(DISTANCE_RANGE.0);
    }
    if err(DISTANCE_RANGE.1)? >= threshold {
        return Err(Error::DomainViolation(format!("linear model fails even at {} m", DISTANCE_RANGE.1)));
    }
    for _ in 0..MAX_BISECTION {
        if hi - lo < 1e-10 {
            return Ok(hi.exp());
        }
        let mid = 0.5 * (lo + hi);
        if err(mid.exp())? < threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NoConvergence(MAX_BISECTION))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boundary {
    pub k_users: usize,
    pub nu: f64,
    pub min_distance_m: f64,
}

pub fn feasible_region(cfg: &ScenarioConfig) -> CliResult<Vec<Boundary>> {
    let u_y = cfg.physics.receiver.lo_field();
    let p_s = dbm_to_watts(cfg.run.p_s_dbm);
    let f = &cfg.feasible;
    let mut out = Vec::new();
    for &nu in &f.nu_grid {
        for &k in &f.k_grid {
            let d = min_linear_distance(u_y, p_s, cfg.channel.beta_ref_db, nu, k, f.threshold)?;
            out.push(Boundary { k_users: k, nu, min_distance_m: d });
        }
    }
    Ok(out)
}

pub fn feasible_artifact(cfg: &ScenarioConfig, config_bytes: &[u8]) -> CliResult<CsvArtifact> {
    let mut a = CsvArtifact::new(FEASIBLE_SCHEMA, &["k_users", "min_distance_m", "nu"], config_bytes);
    for b in feasible_region(cfg)? {
        a.push(vec![b.k_users.to_string(), num(b.min_distance_m), num(b.nu)]);
    }
    a.note("threshold", num(cfg.feasible.threshold));
    a.note("p_s_dbm", num(cfg.run.p_s_dbm));
    a.note("lo_field_dbvm", num(cfg.physics.receiver.lo_field_dbvm));
    a.note("interpretation", "all users at a common distance, shadowing off, phases aligned");
    Ok(a)
}
