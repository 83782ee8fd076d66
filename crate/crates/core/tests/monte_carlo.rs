use raqmimo_core::channel::{eig_correlation, jakes_correlation};
use raqmimo_core::rates::closed_form::{power_scaling_limit, saturation_cap};
use raqmimo_core::rates::monte_carlo::{ergodic_rate_mc, homogeneous_theta, LargeScale, McScenario, RateEstimate};
use raqmimo_core::rates::RateCase;
use raqmimo_core::channel::FadingModel;
use raqmimo_core::Complex64;

fn scenario(case: RateCase, m: usize, k: usize, p_s: f64, trials: usize) -> McScenario {
    McScenario {
        case,
        m_sensors: m,
        k_users: k,
        varpi: 1.0,
        large_scale: LargeScale::Fixed(vec![1.0; k]),
        p_s,
        sigma_sq: 1.0,
        theta: homogeneous_theta(m, Complex64::new(1.0, 0.0)),
        trials,
        master_seed: 2024,
    }
}

fn run(sc: &McScenario) -> RateEstimate {
    let eigs = (sc.case.model == FadingModel::Cfc).then(|| eig_correlation(&jakes_correlation(sc.m_sensors, sc.varpi)).unwrap());
    ergodic_rate_mc(sc, eigs.as_ref()).unwrap()
}

fn mean_sinr_matches(r: &RateEstimate, trials: usize, target: f64) {
    for &g in &r.mean_sinr {
        // Relative spread of the sample mean is at most ~1/sqrt(trials·dof).
        let tol = (0.03f64).max(4.0 / (trials as f64).sqrt());
        assert!((g - target).abs() < tol * target, "{g} vs {target}");
    }
}

#[test]
fn zf_mean_sinr_is_exact_gamma_mean() {
    // 1/[(G*G)⁻¹]_kk is Gamma(M−K+1, 1) for i.i.d. CN(0,1) entries.
    let (m, k, s) = (64, 4, 0.5);
    let r = run(&scenario(RateCase::ZF_UFC, m, k, s, 2000));
    mean_sinr_matches(&r, 2000, s * (m - k + 1) as f64);
}

#[test]
fn single_user_mrc_mean_sinr() {
    let (m, s) = (64, 0.3);
    let r = run(&scenario(RateCase::MRC_UFC, m, 1, s, 2000));
    mean_sinr_matches(&r, 2000, s * m as f64);
}

#[test]
fn mrc_ufc_tracks_closed_form() {
    let r = run(&scenario(RateCase::MRC_UFC, 64, 4, 0.05, 4000));
    let cf = r.aggregate_closed_form.unwrap();
    assert!((r.aggregate_jensen - cf).abs() < 0.03 * cf, "{} vs {cf}", r.aggregate_jensen);
}

#[test]
fn mrc_saturates() {
    for case in [RateCase::MRC_UFC, RateCase::MRC_CFC] {
        let lo = run(&scenario(case, 64, 4, 1e3, 400));
        let hi = run(&scenario(case, 64, 4, 1e5, 400));
        for u in 0..4 {
            assert!((hi.per_user_rate[u] - lo.per_user_rate[u]).abs() < 0.05, "{case} user {u}");
        }
    }
}

#[test]
fn saturated_mrc_sinr_mean_and_cap() {
    // Without noise γ_k = ‖h_k‖² / Σ_{i≠k}|u*h_i|² with u = h_k/‖h_k‖: a
    // Gamma(M) over an independent Gamma(K−1), so E{γ_k} = M/(K−2).
    let (m, k) = (64, 6);
    let r = run(&scenario(RateCase::MRC_UFC, m, k, 1e6, 4000));
    let exact = m as f64 / (k - 2) as f64;
    for &g in &r.mean_sinr {
        assert!((g - exact).abs() < 0.05 * exact, "{g} vs {exact}");
    }
    // The closed-form cap replaces the ratio of expectations by
    // (M−1)/(K−1) and therefore sits slightly below the saturated surrogate.
    let cap = saturation_cap(FadingModel::Ufc, m, &[1.0; 6], None).unwrap()[0];
    let gap = r.aggregate_jensen - cap;
    let predicted = ((1.0 + exact) / (1.0 + (m - 1) as f64 / (k - 1) as f64)).log2();
    assert!((gap - predicted).abs() < 0.05, "{gap} vs {predicted}");
}

#[test]
fn zf_gains_log2_100_per_hundredfold_power() {
    for case in [RateCase::ZF_UFC, RateCase::ZF_CFC] {
        let lo = run(&scenario(case, 64, 4, 10.0, 400));
        let hi = run(&scenario(case, 64, 4, 1000.0, 400));
        let gain = hi.aggregate_rate - lo.aggregate_rate;
        assert!((gain - 100f64.log2()).abs() < 0.05 * 100f64.log2(), "{case}: {gain}");
    }
}

#[test]
fn zf_beats_mrc_at_high_sinr() {
    for (zf, mrc) in [(RateCase::ZF_UFC, RateCase::MRC_UFC), (RateCase::ZF_CFC, RateCase::MRC_CFC)] {
        let a = run(&scenario(zf, 64, 8, 100.0, 300));
        let b = run(&scenario(mrc, 64, 8, 100.0, 300));
        for u in 0..8 {
            assert!(a.per_user_rate[u] >= b.per_user_rate[u]);
        }
    }
}

#[test]
fn power_scaling_approaches_limit() {
    let e_total = 10.0;
    let limit = power_scaling_limit(e_total, 1.0, 1.0, 1.0, 1.0);
    let mut last_err = f64::INFINITY;
    for m in [64, 256, 1024] {
        let r = run(&scenario(RateCase::ZF_UFC, m, 4, e_total / m as f64, 200));
        let err = (r.aggregate_rate - limit).abs() / limit;
        assert!(err < last_err, "M={m}: {err}");
        last_err = err;
    }
    assert!(last_err < 0.03, "{last_err}");
}

#[test]
fn result_is_independent_of_thread_count() {
    let sc = scenario(RateCase::ZF_CFC, 48, 6, 2.0, 257);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| run(&sc));
    let many = rayon::ThreadPoolBuilder::new().num_threads(5).build().unwrap().install(|| run(&sc));
    assert_eq!(one, many);
}
