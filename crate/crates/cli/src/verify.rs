//! Property suites behind `raqmimo verify` and the acceptance target. Each
//! check reports a measured value, the bound it is held to and a verdict.

use rand::Rng;

use raqmimo_core::channel::{eig_correlation, jakes_correlation, sample_channel, ChannelSpec, FadingModel};
use raqmimo_core::quantum::{lindblad_residual, propagate_to_steady_state, steady_state, AtomicConfig};
use raqmimo_core::rates::monte_carlo::homogeneous_theta;
use raqmimo_core::rates::{
    comparison_suite, ergodic_rate_mc, lb_bound, power_scaling_limit, sinr_all, zeta_bound, CombinerKind, LargeScale,
    McScenario, RadioBaseline, RadioBaselineConfig, RateCase, RateEstimate, UserDrop,
};
use raqmimo_core::rng::trial_rng;
use raqmimo_core::stats::mean;
use raqmimo_core::transduction::ReceiverPhysics;
use raqmimo_core::units::{db_to_linear, dbm_to_watts};
use raqmimo_core::{Complex64, Result};

use crate::config::{nominal_snr_ratio_db, ScenarioConfig};
use crate::feasible::min_linear_distance;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: String,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, measured: f64, bound: impl Into<String>, pass: bool) -> Self {
        Self { name: name.into(), measured, bound: bound.into(), pass }
    }

    /// `|measured − target| ≤ tol`.
    fn near(name: impl Into<String>, measured: f64, target: f64, tol: f64) -> Self {
        let pass = (measured - target).abs() <= tol;
        Self::new(name, measured, format!("{target}±{tol:.3e}"), pass)
    }

    fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(name, measured, format!("<={bound:e}"), measured <= bound)
    }

    fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(name, measured, format!(">={bound:e}"), measured >= bound)
    }

    pub fn verdict(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }

    pub fn line(&self) -> String {
        format!("{},{},{},{}", self.name, self.measured, self.bound, self.verdict())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Physics,
    Bounds,
    Wishart,
    Theorems,
    Comparisons,
}

pub fn run_suite(suite: Suite) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Physics => {
            let mut v = physics_invariants(7, 100, 10)?;
            v.extend(linearization_breakdown()?);
            v
        }
        Suite::Bounds => bound_sandwich()?,
        Suite::Wishart => wishart_identities(10_000, 11)?,
        Suite::Theorems => {
            let mut v = theorem_agreement(2000)?;
            v.extend(large_array_gaps()?);
            v.extend(reference_anchors()?);
            v.extend(power_scaling()?);
            v.extend(saturation()?);
            v
        }
        Suite::Comparisons => {
            let mut v = comparison_factors()?;
            v.extend(feasible_region_shape()?);
            v
        }
    })
}

/// Draws a well-conditioned ladder configuration and RF Rabi frequency.
pub fn random_atomic_config<R: Rng + ?Sized>(rng: &mut R) -> (AtomicConfig, f64) {
    let cfg = AtomicConfig {
        omega_p: rng.random_range(1e5..2e7),
        omega_c: rng.random_range(1e6..2e7),
        gamma2: rng.random_range(1e6..4e7),
        gamma3: rng.random_range(0.0..1e5),
        gamma4: rng.random_range(0.0..1e5),
        delta_p: rng.random_range(-2e6..2e6),
        delta_c: rng.random_range(-2e6..2e6),
        ..AtomicConfig::default()
    };
    (cfg, rng.random_range(1e5..3e7))
}

/// Steady-state invariants over `n_random` configurations and agreement
/// with RK4 time propagation on the first `n_oracle` of them.
pub fn physics_invariants(seed: u64, n_random: usize, n_oracle: usize) -> Result<Vec<Check>> {
    let mut rng = trial_rng(seed, 0);
    let (mut herm, mut trace, mut min_eig, mut resid, mut oracle): (f64, f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..n_random {
        let (cfg, w) = random_atomic_config(&mut rng);
        let rho = steady_state(&cfg, w)?;
        herm = herm.max(rho.hermiticity_error());
        trace = trace.max((rho.trace() - Complex64::new(1.0, 0.0)).norm());
        min_eig = min_eig.min(rho.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min));
        resid = resid.max(lindblad_residual(&cfg, w, &rho.rho));
        if i < n_oracle {
            let p = propagate_to_steady_state(&cfg, w)?;
            oracle = oracle.max((p.rho - rho.rho).iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    Ok(vec![
        Check::at_most("physics.hermiticity_error", herm, 1e-10),
        Check::at_most("physics.trace_error", trace, 1e-10),
        Check::at_least("physics.min_eigenvalue", min_eig, -1e-8),
        Check::at_most("physics.lindblad_residual", resid, 1e-10),
        Check::at_most("physics.time_propagation_max_dev", oracle, 1e-8),
    ])
}

/// BCOD output against its linear model for aligned users whose summed
/// amplitude is a multiple of the LO amplitude.
pub fn linearization_breakdown() -> Result<Vec<Check>> {
    let phys = ReceiverPhysics::default();
    let u_y = phys.lo_field();
    let k = 4;
    let mut out = Vec::new();
    for ratio in [1e-3, 1e-2] {
        let e = phys.bcod_linearization_error(&vec![ratio * u_y / k as f64; k], &vec![0.0; k])?;
        out.push(Check::new(format!("linearization.sum_over_lo={ratio}"), e, "<0.01", e < 0.01));
    }
    for ratio in [1.0, 2.0] {
        let e = phys.bcod_linearization_error(&vec![ratio * u_y / k as f64; k], &vec![0.0; k])?;
        out.push(Check::new(format!("linearization.sum_over_lo={ratio}"), e, ">0.1", e > 0.1));
    }
    Ok(out)
}

pub fn bound_sandwich() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for m in [8, 16, 32, 64, 128, 256, 512] {
        for varpi in [0.5, 1.0, 2.0] {
            let t = eig_correlation(&jakes_correlation(m, varpi))?.trace_sq_over_m();
            let (lb, z) = (lb_bound(m, varpi)?, zeta_bound(m, varpi)?);
            out.push(Check::new(format!("sandwich.M={m}.varpi={varpi}"), t, format!("[{lb},{z}]"), lb <= t && t <= z));
        }
    }
    Ok(out)
}

/// E{[(G*G)⁻¹]_kk} and E{1/‖g‖²} through the production ZF and MRC paths:
/// with unit noise and power, γ_k is the reciprocal of each quantity.
pub fn wishart_identities(samples: usize, seed: u64) -> Result<Vec<Check>> {
    let draw = |m: usize, k: usize, kind: CombinerKind, stream_offset: u64| -> Result<f64> {
        let spec = ChannelSpec { m_sensors: m, k_users: k, model: FadingModel::Ufc, varpi: 1.0, betas: vec![1.0; k] };
        let theta = homogeneous_theta(m, Complex64::new(1.0, 0.0));
        let mut acc = Vec::with_capacity(samples);
        for t in 0..samples as u64 {
            let mut rng = trial_rng(seed, stream_offset + t);
            let h = sample_channel(&spec, None, &mut rng)?;
            let g = sinr_all(kind, &theta, &h, 1.0, 1.0)?;
            acc.push(g.iter().map(|x| 1.0 / x).sum::<f64>() / k as f64);
        }
        Ok(mean(&acc))
    };
    let (m, k) = (64, 8);
    let inv_gram = draw(m, k, CombinerKind::Zf, 0)?;
    let inv_norm = draw(m, 1, CombinerKind::Mrc, 1 << 40)?;
    let t1 = 1.0 / (m - k) as f64;
    let t2 = 1.0 / (m - 1) as f64;
    Ok(vec![
        Check::near("wishart.inverse_gram_diagonal", inv_gram, t1, 0.02 * t1),
        Check::near("wishart.inverse_norm", inv_norm, t2, 0.02 * t2),
    ])
}

fn unit_scenario(case: RateCase, m: usize, k: usize, snr: f64, varpi: f64, trials: usize, seed: u64) -> McScenario {
    McScenario {
        case,
        m_sensors: m,
        k_users: k,
        varpi,
        large_scale: LargeScale::Fixed(vec![1.0; k]),
        p_s: snr,
        sigma_sq: 1.0,
        theta: homogeneous_theta(m, Complex64::new(1.0, 0.0)),
        trials,
        master_seed: seed,
    }
}

fn run_mc(sc: &McScenario) -> Result<RateEstimate> {
    if sc.case.model == FadingModel::Cfc {
        let eigs = eig_correlation(&jakes_correlation(sc.m_sensors, sc.varpi))?;
        ergodic_rate_mc(sc, Some(&eigs))
    } else {
        ergodic_rate_mc(sc, None)
    }
}

/// Per-sensor SNR at which the closed forms are compared with Monte Carlo.
pub const THEOREM_SNR: f64 = 0.01;

/// Jensen surrogate against each closed form, tolerance max(5 %, 3 se).
/// The correlated MRC form is a lower bound and is also checked as one.
pub fn theorem_agreement(trials: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (m, k) in [(128, 4), (512, 20)] {
        for case in RateCase::ALL {
            let r = run_mc(&unit_scenario(case, m, k, THEOREM_SNR, 1.0, trials, 5))?;
            let cf = r.aggregate_closed_form.unwrap_or(f64::NAN);
            let (j, se) = (r.aggregate_jensen, r.aggregate_jensen_stderr);
            let tol = (0.05 * cf).max(3.0 * se);
            out.push(Check::near(format!("theorem.{case}.M={m}.K={k}"), j, cf, tol));
            if case == RateCase::MRC_CFC {
                out.push(Check::new(
                    format!("theorem.{case}.M={m}.K={k}.lower_bound"),
                    cf,
                    format!("<={}", j + 3.0 * se),
                    cf <= j + 3.0 * se,
                ));
            }
        }
    }
    Ok(out)
}

struct Pair {
    diff: f64,
    se: f64,
}

fn gap(a: &RateEstimate, b: &RateEstimate) -> Pair {
    Pair {
        diff: a.aggregate_rate - b.aggregate_rate,
        se: (a.aggregate_stderr.powi(2) + b.aggregate_stderr.powi(2)).sqrt(),
    }
}

/// Large-array gaps at M=1000, K=20, ϖ=1 and 20 dB per-sensor SNR.
pub fn large_array_gaps() -> Result<Vec<Check>> {
    let (m, k, snr, trials) = (1000, 20, 100.0, 400);
    let est: Vec<RateEstimate> =
        RateCase::ALL.iter().map(|&c| run_mc(&unit_scenario(c, m, k, snr, 1.0, trials, 9))).collect::<Result<_>>()?;
    let [mrc_u, mrc_c, zf_u, zf_c] = [&est[0], &est[1], &est[2], &est[3]];
    let gaps = raqmimo_core::rates::rate_gaps(m, k, &vec![snr; k], &vec![1.0; k], 1.0, true)?;
    let g1 = gap(mrc_u, mrc_c);
    let g2 = gap(zf_u, zf_c);
    let g3 = gap(zf_u, mrc_u);
    Ok(vec![
        Check::near("gap.mrc_ufc_minus_cfc", g1.diff, gaps.mrc_ufc_minus_cfc, 0.3f64.max(3.0 * g1.se)),
        Check::at_most("gap.zf_ufc_minus_cfc", g2.diff.abs(), 0.2),
        Check::near("gap.zf_minus_mrc_ufc", g3.diff, gaps.zf_minus_mrc_ufc[0], 0.3f64.max(3.0 * g3.se)),
    ])
}

fn dropped_scenario(case: RateCase, m: usize, pi_db: f64, varpi: f64, trials: usize) -> Result<McScenario> {
    let base = RadioBaseline::from_config(&RadioBaselineConfig::default())?;
    let phi = ReceiverPhysics::default().operating_point()?.readout.phi_factor;
    Ok(McScenario {
        case,
        m_sensors: m,
        k_users: 20,
        varpi,
        large_scale: LargeScale::Dropped(UserDrop::default()),
        p_s: dbm_to_watts(23.0),
        sigma_sq: base.quantum_noise(db_to_linear(pi_db)),
        theta: homogeneous_theta(m, phi),
        trials,
        master_seed: 1,
    })
}

/// Published rate gaps reproduced with random user drops at 23 dBm and
/// Π = 26.5 dB, ϖ = 1; tolerance max(15 %, 3 se).
pub fn reference_anchors() -> Result<Vec<Check>> {
    let pi = nominal_snr_ratio_db(raqmimo_core::transduction::SensingRegime::Psl);
    let u = run_mc(&dropped_scenario(RateCase::MRC_UFC, 1000, pi, 1.0, 1000)?)?;
    let c = run_mc(&dropped_scenario(RateCase::MRC_CFC, 1000, pi, 1.0, 1000)?)?;
    let a = gap(&u, &c);
    let mrc = run_mc(&dropped_scenario(RateCase::MRC_UFC, 500, pi, 1.0, 1000)?)?;
    let zf = run_mc(&dropped_scenario(RateCase::ZF_UFC, 500, pi, 1.0, 1000)?)?;
    let b = gap(&zf, &mrc);
    Ok(vec![
        Check::near("anchor.mrc_ufc_minus_cfc.M=1000", a.diff, 1.1, (0.15 * 1.1f64).max(3.0 * a.se)),
        Check::near("anchor.zf_minus_mrc_ufc.M=500", b.diff, 6.76, (0.15 * 6.76f64).max(3.0 * b.se)),
    ])
}

/// ZF over uncorrelated fading with 𝒫_s = ℰ/M at M = 2048.
pub fn power_scaling() -> Result<Vec<Check>> {
    let (m, k, e_total) = (2048, 4, 10.0);
    let r = run_mc(&unit_scenario(RateCase::ZF_UFC, m, k, e_total / m as f64, 1.0, 200, 13))?;
    let limit = power_scaling_limit(e_total, 1.0, 1.0, 1.0, 1.0);
    Ok(vec![Check::near("power_scaling.zf_ufc.M=2048", r.aggregate_rate, limit, 0.03 * limit)])
}

/// MRC flattens and ZF gains log₂100 per 100× power at high SINR.
pub fn saturation() -> Result<Vec<Check>> {
    let (m, k, trials) = (128, 4, 500);
    let mut out = Vec::new();
    for case in RateCase::ALL {
        let (lo, hi) = if case.combiner == CombinerKind::Mrc { (1e3, 1e5) } else { (10.0, 1e3) };
        let a = run_mc(&unit_scenario(case, m, k, lo, 1.0, trials, 17))?;
        let b = run_mc(&unit_scenario(case, m, k, hi, 1.0, trials, 17))?;
        if case.combiner == CombinerKind::Mrc {
            let worst = a.per_user_rate.iter().zip(&b.per_user_rate).map(|(x, y)| (y - x).abs()).fold(0.0, f64::max);
            out.push(Check::new(format!("saturation.{case}"), worst, "<0.05", worst < 0.05));
        } else {
            let target = 100f64.log2();
            out.push(Check::near(format!("unbounded.{case}"), b.aggregate_rate - a.aggregate_rate, target, 0.33));
        }
    }
    Ok(out)
}

pub fn comparison_factors() -> Result<Vec<Check>> {
    let sql = nominal_snr_ratio_db(raqmimo_core::transduction::SensingRegime::Sql);
    let psl = nominal_snr_ratio_db(raqmimo_core::transduction::SensingRegime::Psl);
    let rel = |name: &str, x: f64, target: f64| Check::near(name, x, target, 0.01 * target);
    Ok(vec![
        rel("comparison.sql.power_factor", comparison_suite(sql, 2.0)?.power_factor, 10_000.0),
        rel("comparison.psl.power_factor", comparison_suite(psl, 2.0)?.power_factor, 446.0),
        rel("comparison.sql.distance_factor.nu=2", comparison_suite(sql, 2.0)?.distance_factor, 100.0),
        rel("comparison.psl.distance_factor.nu=2", comparison_suite(psl, 2.0)?.distance_factor, 21.1),
        rel("comparison.sql.distance_factor.nu=6", comparison_suite(sql, 6.0)?.distance_factor, 4.64),
        rel("comparison.psl.distance_factor.nu=6", comparison_suite(psl, 6.0)?.distance_factor, 2.84),
    ])
}

/// Minimum linear-model distance for K = 20 against the published 3, 6 and
/// 30 m (±50 %), plus ordering in ν and monotonicity in K.
pub fn feasible_region_shape() -> Result<Vec<Check>> {
    let cfg = ScenarioConfig::default();
    let u_y = cfg.physics.receiver.lo_field();
    let p_s = dbm_to_watts(cfg.run.p_s_dbm);
    let thr = cfg.feasible.threshold;
    let beta_ref = cfg.channel.beta_ref_db;
    let mut out = Vec::new();
    let mut d20 = Vec::new();
    for (nu, target) in [(2.0, 3.0), (3.8, 6.0), (6.0, 30.0)] {
        let d = min_linear_distance(u_y, p_s, beta_ref, nu, 20, thr)?;
        d20.push(d);
        out.push(Check::near(format!("feasible.K=20.nu={nu}"), d, target, 0.5 * target));
        let ds: Vec<f64> =
            [1, 5, 10, 15, 20].iter().map(|&k| min_linear_distance(u_y, p_s, beta_ref, nu, k, thr)).collect::<Result<_>>()?;
        let monotone = ds.windows(2).all(|w| w[1] > w[0]);
        out.push(Check::new(format!("feasible.monotone_in_K.nu={nu}"), ds[4] / ds[0], ">1 and increasing", monotone));
    }
    let increasing = d20.windows(2).all(|w| w[1] > w[0]);
    out.push(Check::new("feasible.K=20.increasing_in_nu", d20[2] / d20[0], ">1 and increasing", increasing));
    Ok(out)
}
