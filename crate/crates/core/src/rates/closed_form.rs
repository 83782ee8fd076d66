//! Large-array closed forms of the per-user rate and the limits derived
//! from them.

use std::f64::consts::PI;

use super::{CombinerKind, RateCase};
use crate::channel::FadingModel;
use crate::error::{invalid, Error, Result};

fn check_inputs(m: usize, k_users: usize, snr: &[f64], betas: &[f64]) -> Result<()> {
    if snr.len() != k_users || betas.len() != k_users {
        return Err(Error::DimensionMismatch(format!(
            "{} SNR values and {} betas for {k_users} users",
            snr.len(),
            betas.len()
        )));
    }
    if k_users == 0 || m == 0 {
        return Err(invalid("need at least one user and one sensor"));
    }
    if betas.iter().any(|b| !(*b > 0.0)) || snr.iter().any(|s| !(*s >= 0.0)) {
        return Err(invalid("betas must be positive and SNR values non-negative"));
    }
    Ok(())
}

/// Checks the array-size precondition of a case.
pub fn check_domain(case: RateCase, m: usize, k_users: usize) -> Result<()> {
    let ok = match case {
        RateCase::MRC_UFC => m >= 2,
        RateCase::MRC_CFC => m >= 3,
        RateCase::ZF_UFC => m > k_users,
        _ => m > 2 * k_users + 2,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::DomainViolation(format!("{case} closed form undefined for M={m}, K={k_users}")))
    }
}

/// Per-user rate of `case`; `snr1[k]` is the per-sensor SNR of user k and
/// `zeta` the correlation bound, required for MRC over correlated fading.
pub fn closed_form_rate(
    case: RateCase,
    m: usize,
    k_users: usize,
    snr1: &[f64],
    betas: &[f64],
    cos2_varphi: f64,
    zeta: Option<f64>,
) -> Result<Vec<f64>> {
    check_inputs(m, k_users, snr1, betas)?;
    check_domain(case, m, k_users)?;
    if !(0.0..=1.0).contains(&cos2_varphi) {
        return Err(invalid(format!("cos²φ must lie in [0, 1], got {cos2_varphi}")));
    }
    let mf = m as f64;
    let total_beta: f64 = betas.iter().sum();
    let zeta = match (case, zeta) {
        (RateCase::MRC_CFC, None) => {
            return Err(Error::DomainViolation("MRC over correlated fading needs ζ".into()));
        }
        (_, z) => z.unwrap_or(1.0),
    };
    Ok((0..k_users)
        .map(|k| {
            let s = snr1[k] * cos2_varphi;
            let others = total_beta - betas[k];
            let sinr = match case.combiner {
                CombinerKind::Mrc => {
                    let (gain, z) = match case.model {
                        FadingModel::Ufc => (mf - 1.0, 1.0),
                        FadingModel::Cfc => (mf - 2.0, zeta),
                    };
                    gain * s / (1.0 + z * s / betas[k] * others)
                }
                CombinerKind::Zf => match case.model {
                    FadingModel::Ufc => (mf - k_users as f64) * s,
                    FadingModel::Cfc => (mf - 2.0 * k_users as f64 - 2.0) * s,
                },
            };
            (1.0 + sinr).log2()
        })
        .collect())
}

/// Same formulas for a conventional array, with SNR₀ in place of SNR₁cos²φ.
pub fn mmimo_baseline_rate(
    case: RateCase,
    m: usize,
    k_users: usize,
    snr0: &[f64],
    betas: &[f64],
    zeta: Option<f64>,
) -> Result<Vec<f64>> {
    closed_form_rate(case, m, k_users, snr0, betas, 1.0, zeta)
}

/// MRC rate as transmit power grows without bound.
pub fn saturation_cap(model: FadingModel, m: usize, betas: &[f64], zeta: Option<f64>) -> Result<Vec<f64>> {
    let k_users = betas.len();
    let case = RateCase { combiner: CombinerKind::Mrc, model };
    check_domain(case, m, k_users)?;
    if k_users < 2 {
        return Err(Error::DomainViolation("saturation needs at least two users".into()));
    }
    let (gain, z) = match model {
        FadingModel::Ufc => (m as f64 - 1.0, 1.0),
        FadingModel::Cfc => (m as f64 - 2.0, zeta.ok_or_else(|| Error::DomainViolation("CFC cap needs ζ".into()))?),
    };
    let total: f64 = betas.iter().sum();
    Ok(betas.iter().map(|b| (1.0 + gain * b / (z * (total - b))).log2()).collect())
}

/// Rate limit log₂(1 + ℰϱcos²φβ_k/σ²) when 𝒫_s = ℰ/M and M → ∞.
pub fn power_scaling_limit(e_total: f64, varrho: f64, cos2_varphi: f64, sigma_sq: f64, beta_k: f64) -> f64 {
    (1.0 + e_total * varrho * cos2_varphi * beta_k / sigma_sq).log2()
}

/// Rate differences between combiners and fading models at high SINR.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    /// MRC over uncorrelated minus MRC over correlated fading.
    pub mrc_ufc_minus_cfc: f64,
    /// ZF over uncorrelated minus ZF over correlated fading (vanishes).
    pub zf_ufc_minus_cfc: f64,
    /// ZF minus MRC per user, uncorrelated fading.
    pub zf_minus_mrc_ufc: Vec<f64>,
    /// ZF minus MRC per user, correlated fading.
    pub zf_minus_mrc_cfc: Vec<f64>,
}

/// Gap formulas. They only hold at high SINR, which the caller asserts
/// (min_k SINR ≥ 20 dB is the intended threshold).
pub fn rate_gaps(
    m: usize,
    k_users: usize,
    snr1: &[f64],
    betas: &[f64],
    varpi: f64,
    high_sinr: bool,
) -> Result<GapReport> {
    if !high_sinr {
        return Err(Error::DomainViolation("gap formulas require the high-SINR regime".into()));
    }
    check_inputs(m, k_users, snr1, betas)?;
    if m < 2 || !(varpi > 0.0) {
        return Err(Error::DomainViolation(format!("gap formulas need M >= 2 and varpi > 0 (M={m}, ϖ={varpi})")));
    }
    let mrc = (2.0 * (m as f64).ln() / (PI * varpi)).log2();
    let total: f64 = betas.iter().sum();
    let ufc: Vec<f64> = (0..k_users).map(|k| (1.0 + snr1[k] / betas[k] * (total - betas[k])).log2()).collect();
    let cfc = ufc.iter().map(|g| g + mrc).collect();
    Ok(GapReport { mrc_ufc_minus_cfc: mrc, zf_ufc_minus_cfc: 0.0, zf_minus_mrc_ufc: ufc, zf_minus_mrc_cfc: cfc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::bounds::zeta_bound;
    use proptest::prelude::*;

    #[test]
    fn zf_ufc_single_excess_sensor_is_one_bit() {
        let r = closed_form_rate(RateCase::ZF_UFC, 5, 4, &[1.0; 4], &[1.0; 4], 1.0, None).unwrap();
        assert!(r.iter().all(|&x| x == 1.0));
        let b = mmimo_baseline_rate(RateCase::ZF_UFC, 5, 4, &[1.0; 4], &[0.3; 4], None).unwrap();
        assert!(b.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn mrc_ufc_single_user() {
        let r = closed_form_rate(RateCase::MRC_UFC, 64, 1, &[0.2], &[1e-9], 0.5, None).unwrap();
        assert!((r[0] - (1.0 + 63.0 * 0.2 * 0.5f64).log2()).abs() < 1e-15);
    }

    #[test]
    fn domain_violations() {
        assert!(matches!(
            closed_form_rate(RateCase::ZF_CFC, 10, 4, &[1.0; 4], &[1.0; 4], 1.0, None),
            Err(Error::DomainViolation(_))
        ));
        assert!(closed_form_rate(RateCase::ZF_CFC, 11, 4, &[1.0; 4], &[1.0; 4], 1.0, None).is_ok());
        assert!(closed_form_rate(RateCase::ZF_UFC, 4, 4, &[1.0; 4], &[1.0; 4], 1.0, None).is_err());
        assert!(closed_form_rate(RateCase::MRC_CFC, 2, 1, &[1.0], &[1.0], 1.0, Some(1.0)).is_err());
        assert!(closed_form_rate(RateCase::MRC_CFC, 8, 1, &[1.0], &[1.0], 1.0, None).is_err());
    }

    #[test]
    fn baseline_equals_closed_form_under_matched_snr() {
        let betas = [1e-9, 3e-10, 2e-9];
        let snr1 = [3.0, 0.5, 12.0];
        let cos2 = 0.7;
        let snr0: Vec<f64> = snr1.iter().map(|s| s * cos2).collect();
        let z = Some(zeta_bound(64, 1.0).unwrap());
        for case in RateCase::ALL {
            let a = closed_form_rate(case, 64, 3, &snr1, &betas, cos2, z).unwrap();
            let b = mmimo_baseline_rate(case, 64, 3, &snr0, &betas, z).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn zf_gap_equals_log_snr_ratio_at_high_snr() {
        let betas = [1.0; 4];
        for case in [RateCase::ZF_UFC, RateCase::ZF_CFC] {
            let hi = closed_form_rate(case, 256, 4, &[1e6; 4], &betas, 1.0, None).unwrap();
            let lo = mmimo_baseline_rate(case, 256, 4, &[1e2; 4], &betas, None).unwrap();
            assert!((hi[0] - lo[0] - 1e4f64.log2()).abs() < 1e-3);
        }
    }

    #[test]
    fn gap_structure() {
        let g = rate_gaps(64, 1, &[100.0], &[1.0], 1.0, true).unwrap();
        assert_eq!(g.zf_minus_mrc_ufc, vec![0.0]);
        assert!(rate_gaps(64, 1, &[100.0], &[1.0], 1.0, false).is_err());
        let a = rate_gaps(200, 2, &[1e3; 2], &[1.0; 2], 1.0, true).unwrap();
        let b = rate_gaps(1000, 2, &[1e3; 2], &[1.0; 2], 1.0, true).unwrap();
        let expected = (1000f64.ln() / 200f64.ln()).log2();
        assert!((b.mrc_ufc_minus_cfc - a.mrc_ufc_minus_cfc - expected).abs() < 1e-12);
        assert!((b.zf_minus_mrc_cfc[0] - b.zf_minus_mrc_ufc[0] - b.mrc_ufc_minus_cfc).abs() < 1e-12);
    }

    #[test]
    fn mrc_gap_matches_theorem_difference() {
        let (m, k) = (1000, 20);
        let betas = vec![1.0; k];
        let zeta = zeta_bound(m, 1.0).unwrap();
        let g = rate_gaps(m, k, &[1e3; 20], &betas, 1.0, true).unwrap();
        let diff = |snr: f64| {
            let s = vec![snr; k];
            let u = closed_form_rate(RateCase::MRC_UFC, m, k, &s, &betas, 1.0, None).unwrap();
            let c = closed_form_rate(RateCase::MRC_CFC, m, k, &s, &betas, 1.0, Some(zeta)).unwrap();
            u[0] - c[0]
        };
        // At SNR₁ = 10³ the theorem difference sits 0.25 bits above the
        // asymptotic gap; ζ itself exceeds 2 ln M/(πϖ) by ~30 % at M = 1000.
        assert!((diff(1e3) - g.mrc_ufc_minus_cfc).abs() < 0.3, "{} vs {}", diff(1e3), g.mrc_ufc_minus_cfc);
    }

    #[test]
    fn power_scaling_reference() {
        assert_eq!(power_scaling_limit(2.0, 0.5, 1.0, 1.0, 1.0), 1.0);
    }

    #[test]
    fn saturation_cap_is_high_power_limit() {
        let betas = [1.0, 0.5, 2.0, 0.25];
        let z = zeta_bound(128, 1.0).unwrap();
        for (model, zeta) in [(FadingModel::Ufc, None), (FadingModel::Cfc, Some(z))] {
            let case = RateCase { combiner: CombinerKind::Mrc, model };
            let cap = saturation_cap(model, 128, &betas, zeta).unwrap();
            let r = closed_form_rate(case, 128, 4, &[1e12; 4], &betas, 1.0, zeta).unwrap();
            for k in 0..4 {
                assert!(r[k] < cap[k] && cap[k] - r[k] < 1e-6);
            }
        }
    }

    proptest! {
        #[test]
        fn best_user_is_scale_invariant(
            betas in proptest::collection::vec(1e-3f64..1.0, 2..12),
            scale in 1e-3f64..1e3,
            snr_per_beta in 1e-2f64..1e3,
        ) {
            let k = betas.len();
            let m = 4 * k + 8;
            let z = Some(zeta_bound(m, 1.0).unwrap());
            let argmax = |v: &[f64]| v.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
            for case in RateCase::ALL {
                let snr: Vec<f64> = betas.iter().map(|b| b * snr_per_beta).collect();
                let scaled: Vec<f64> = betas.iter().map(|b| b * scale).collect();
                let snr_scaled: Vec<f64> = scaled.iter().map(|b| b * snr_per_beta).collect();
                let r1 = closed_form_rate(case, m, k, &snr, &betas, 1.0, z).unwrap();
                let r2 = closed_form_rate(case, m, k, &snr_scaled, &scaled, 1.0, z).unwrap();
                prop_assert_eq!(argmax(&r1), argmax(&r2));
            }
        }
    }
}
