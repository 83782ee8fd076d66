//! Monte Carlo ergodic rates.
//!
//! Each trial draws its own channel (and, optionally, its own user drop)
//! from a stream keyed by (master seed, trial index). Trials may run in any
//! order on any number of threads; results are gathered in trial order and
//! reduced with order-fixed pairwise sums, so the estimate is bit-identical
//! for every thread count.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use super::bounds::zeta_bound;
use super::closed_form::{check_domain, closed_form_rate};
use super::sinr::sinr_all;
use super::{CombinerKind, RateCase};
use crate::channel::{large_scale_fading, place_users, sample_channel, ChannelSpec, CorrelationEigs, FadingModel};
use crate::error::{invalid, Error, Result};
use crate::rng::{trial_rng, SimRng};
use crate::stats::{mean, mean_stderr};

/// A trial whose Gram matrix is singular is redrawn at most this often.
pub const MAX_RESAMPLES: usize = 3;

/// Random user placement over a disk with log-distance path loss and
/// log-normal shadowing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UserDrop {
    pub center_m: f64,
    pub radius_m: f64,
    pub beta_ref_db: f64,
    pub nu: f64,
    pub shadow_sigma_db: f64,
}

impl Default for UserDrop {
    fn default() -> Self {
        Self { center_m: 400.0, radius_m: 300.0, beta_ref_db: -30.0, nu: 3.8, shadow_sigma_db: 10.0 }
    }
}

impl UserDrop {
    fn draw(&self, k_users: usize, rng: &mut SimRng) -> Result<Vec<f64>> {
        place_users(k_users, self.center_m, self.radius_m, rng)?
            .into_iter()
            .map(|d| large_scale_fading(d, self.nu, self.beta_ref_db, self.shadow_sigma_db, rng))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LargeScale {
    /// The same coefficients in every trial.
    Fixed(Vec<f64>),
    /// A fresh drop per trial.
    Dropped(UserDrop),
}

#[derive(Debug, Clone, PartialEq)]
pub struct McScenario {
    pub case: RateCase,
    pub m_sensors: usize,
    pub k_users: usize,
    pub varpi: f64,
    pub large_scale: LargeScale,
    /// Transmit power per user, W.
    pub p_s: f64,
    /// Noise power referred to a unit-gain sensor.
    pub sigma_sq: f64,
    /// Diagonal of the sensor gain/phase matrix Θ.
    pub theta: Vec<Complex64>,
    pub trials: usize,
    pub master_seed: u64,
}

impl McScenario {
    pub fn validate(&self, eigs: Option<&CorrelationEigs>) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("need at least one trial"));
        }
        if self.theta.len() != self.m_sensors {
            return Err(Error::DimensionMismatch(format!(
                "{} sensor gains for {} sensors",
                self.theta.len(),
                self.m_sensors
            )));
        }
        if let LargeScale::Fixed(b) = &self.large_scale {
            if b.len() != self.k_users {
                return Err(Error::DimensionMismatch(format!("{} betas for {} users", b.len(), self.k_users)));
            }
        }
        if self.case.combiner == CombinerKind::Zf && self.m_sensors <= self.k_users {
            return Err(invalid(format!("ZF needs M > K (M={}, K={})", self.m_sensors, self.k_users)));
        }
        if self.case.model == FadingModel::Cfc {
            match eigs {
                Some(e) if e.dim() == self.m_sensors => {}
                _ => return Err(Error::DimensionMismatch("CFC needs eigenpairs matching M".into())),
            }
        }
        Ok(())
    }

    /// Average |θ_m|², i.e. ϱcos²φ for a homogeneous array.
    fn mean_gain(&self) -> f64 {
        self.theta.iter().map(|t| t.norm_sqr()).sum::<f64>() / self.m_sensors as f64
    }
}

/// Unit-gain sensors with a common phase factor: θ_m = Φ for all m.
pub fn homogeneous_theta(m_sensors: usize, phi_factor: Complex64) -> Vec<Complex64> {
    vec![phi_factor; m_sensors]
}

/// θ_m = Φ(1 + σ ε_m) with standard normal ε_m drawn from a dedicated
/// stream of `seed`; σ = 0 reproduces [`homogeneous_theta`].
pub fn jittered_theta(m_sensors: usize, phi_factor: Complex64, sigma: f64, seed: u64) -> Result<Vec<Complex64>> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(invalid(format!("gain jitter must be non-negative, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(homogeneous_theta(m_sensors, phi_factor));
    }
    let mut rng = trial_rng(seed, u64::MAX);
    Ok((0..m_sensors)
        .map(|_| {
            let e: f64 = rng.sample(rand_distr::StandardNormal);
            phi_factor * (1.0 + sigma * e)
        })
        .collect())
}

/// Monte Carlo summary. Per-user vectors are indexed by user; the scalar
/// `aggregate_*` fields average over users.
#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimate {
    /// E{log₂(1+γ_k)}.
    pub per_user_rate: Vec<f64>,
    pub stderr: Vec<f64>,
    /// log₂(1+E{γ_k}).
    pub jensen: Vec<f64>,
    /// Delta-method standard error of `jensen`.
    pub jensen_stderr: Vec<f64>,
    pub mean_sinr: Vec<f64>,
    /// Trial-averaged closed form; `None` outside the closed form's domain.
    pub closed_form: Option<Vec<f64>>,
    pub aggregate_rate: f64,
    pub aggregate_stderr: f64,
    pub aggregate_jensen: f64,
    pub aggregate_jensen_stderr: f64,
    pub aggregate_closed_form: Option<f64>,
    pub trials: usize,
    /// Number of singular-Gram redraws across all trials.
    pub resampled: usize,
}

struct TrialOut {
    rates: Vec<f64>,
    sinrs: Vec<f64>,
    closed: Option<Vec<f64>>,
    resampled: usize,
}

fn run_trial(sc: &McScenario, eigs: Option<&CorrelationEigs>, zeta: Option<f64>, closed_ok: bool, t: usize) -> Result<TrialOut> {
    let mut rng = trial_rng(sc.master_seed, t as u64);
    let betas = match &sc.large_scale {
        LargeScale::Fixed(b) => b.clone(),
        LargeScale::Dropped(d) => d.draw(sc.k_users, &mut rng)?,
    };
    let spec = ChannelSpec {
        m_sensors: sc.m_sensors,
        k_users: sc.k_users,
        model: sc.case.model,
        varpi: sc.varpi,
        betas: betas.clone(),
    };
    let mut resampled = 0;
    let sinrs = loop {
        let h = sample_channel(&spec, eigs, &mut rng)?;
        match sinr_all(sc.case.combiner, &sc.theta, &h, sc.p_s, sc.sigma_sq) {
            Ok(s) => break s,
            Err(Error::SingularGram(_)) if resampled < MAX_RESAMPLES => resampled += 1,
            Err(e) => return Err(e),
        }
    };
    let closed = if closed_ok {
        let g = sc.mean_gain();
        let snr: Vec<f64> = betas.iter().map(|b| g * sc.p_s * b / sc.sigma_sq).collect();
        Some(closed_form_rate(sc.case, sc.m_sensors, sc.k_users, &snr, &betas, 1.0, zeta)?)
    } else {
        None
    };
    Ok(TrialOut { rates: sinrs.iter().map(|g| (1.0 + g).log2()).collect(), sinrs, closed, resampled })
}

#[cfg(feature = "parallel")]
fn run_all(sc: &McScenario, eigs: Option<&CorrelationEigs>, zeta: Option<f64>, closed_ok: bool) -> Result<Vec<TrialOut>> {
    use rayon::prelude::*;
    (0..sc.trials).into_par_iter().map(|t| run_trial(sc, eigs, zeta, closed_ok, t)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_all(sc: &McScenario, eigs: Option<&CorrelationEigs>, zeta: Option<f64>, closed_ok: bool) -> Result<Vec<TrialOut>> {
    (0..sc.trials).map(|t| run_trial(sc, eigs, zeta, closed_ok, t)).collect()
}

/// Ergodic rate of every user over `sc.trials` independent channel draws.
/// `eigs` must be supplied for correlated fading.
pub fn ergodic_rate_mc(sc: &McScenario, eigs: Option<&CorrelationEigs>) -> Result<RateEstimate> {
    sc.validate(eigs)?;
    if !(sc.sigma_sq > 0.0) || !(sc.p_s >= 0.0) {
        return Err(invalid("need p_s >= 0 and sigma_sq > 0"));
    }
    let zeta = if sc.case == RateCase::MRC_CFC { zeta_bound(sc.m_sensors, sc.varpi).ok() } else { None };
    let closed_ok = check_domain(sc.case, sc.m_sensors, sc.k_users).is_ok()
        && (sc.case != RateCase::MRC_CFC || zeta.is_some());
    let outs = run_all(sc, eigs, zeta, closed_ok)?;

    let k = sc.k_users;
    let n = outs.len();
    let column = |f: &dyn Fn(&TrialOut) -> f64| -> Vec<f64> { outs.iter().map(f).collect() };

    let mut per_user_rate = Vec::with_capacity(k);
    let mut stderr = Vec::with_capacity(k);
    let mut jensen = Vec::with_capacity(k);
    let mut jensen_stderr = Vec::with_capacity(k);
    let mut mean_sinr = Vec::with_capacity(k);
    for u in 0..k {
        let (r, se) = mean_stderr(&column(&|o| o.rates[u]));
        let (g, gse) = mean_stderr(&column(&|o| o.sinrs[u]));
        per_user_rate.push(r);
        stderr.push(se);
        mean_sinr.push(g);
        jensen.push((1.0 + g).log2());
        jensen_stderr.push(gse / ((1.0 + g) * LN_2));
    }

    let (aggregate_rate, aggregate_stderr) = mean_stderr(&column(&|o| mean(&o.rates)));
    // Delta method for the user-averaged surrogate, keeping cross-user
    // correlation by linearising each trial before taking the spread.
    let weights: Vec<f64> = mean_sinr.iter().map(|g| 1.0 / (k as f64 * (1.0 + g) * LN_2)).collect();
    let linearised = column(&|o| o.sinrs.iter().zip(&weights).map(|(g, w)| g * w).sum());
    let aggregate_jensen = mean(&jensen);
    let aggregate_jensen_stderr = mean_stderr(&linearised).1;

    let closed_form = if closed_ok {
        Some((0..k).map(|u| mean(&column(&|o| o.closed.as_ref().map_or(f64::NAN, |c| c[u])))).collect::<Vec<_>>())
    } else {
        None
    };
    let aggregate_closed_form = closed_form.as_ref().map(|c| mean(c));

    Ok(RateEstimate {
        per_user_rate,
        stderr,
        jensen,
        jensen_stderr,
        mean_sinr,
        closed_form,
        aggregate_rate,
        aggregate_stderr,
        aggregate_jensen,
        aggregate_jensen_stderr,
        aggregate_closed_form,
        trials: n,
        resampled: outs.iter().map(|o| o.resampled).sum(),
    })
}
