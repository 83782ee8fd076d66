//! WebAssembly bindings for the browser demo in `www/`. Each export returns
//! a flat `Float64Array` of interleaved columns so the page can plot it
//! without a serialization layer.

use std::f64::consts::PI;

use raqmimo_core::channel::FadingModel;
use raqmimo_core::quantum::{susceptibility, AtomicConfig};
use raqmimo_core::rates::{closed_form_rate, zeta_bound, CombinerKind, RateCase};
use raqmimo_core::transduction::{superposition_error, ReceiverPhysics};
use wasm_bindgen::prelude::*;

fn js(e: raqmimo_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Rows of `[Ω_RF/2π (MHz), Re χ, Im χ]` at `points` evenly spaced RF
/// Rabi frequencies in (0, max_mhz], with the probe and coupling Rabi
/// frequencies given in MHz and everything else at its default.
#[wasm_bindgen]
pub fn susceptibility_sweep(probe_mhz: f64, coupling_mhz: f64, max_mhz: f64, points: usize) -> Result<Vec<f64>, JsError> {
    susceptibility_rows(probe_mhz, coupling_mhz, max_mhz, points).map_err(js)
}

fn susceptibility_rows(probe_mhz: f64, coupling_mhz: f64, max_mhz: f64, points: usize) -> raqmimo_core::Result<Vec<f64>> {
    let cfg = AtomicConfig { omega_p: 2.0 * PI * probe_mhz * 1e6, omega_c: 2.0 * PI * coupling_mhz * 1e6, ..AtomicConfig::default() };
    cfg.validate()?;
    let points = points.clamp(1, 2000);
    let mut out = Vec::with_capacity(3 * points);
    for i in 1..=points {
        let f = max_mhz * i as f64 / points as f64;
        let chi = susceptibility(&cfg, 2.0 * PI * f * 1e6)?;
        out.extend([f, chi.re, chi.im]);
    }
    Ok(out)
}

/// Rows of `[M, MRC_UFC, MRC_CFC, ZF_UFC, ZF_CFC]` closed-form per-user
/// rates for equal users, NaN where a case is undefined at that M.
#[wasm_bindgen]
pub fn closed_form_vs_sensors(k_users: usize, snr_db: f64, varpi: f64, m_max: usize) -> Result<Vec<f64>, JsError> {
    closed_form_rows(k_users, snr_db, varpi, m_max).map_err(js)
}

fn closed_form_rows(k_users: usize, snr_db: f64, varpi: f64, m_max: usize) -> raqmimo_core::Result<Vec<f64>> {
    let snr = 10f64.powf(snr_db / 10.0);
    let k = k_users.max(1);
    let m_max = m_max.clamp(4, 4096);
    let step = (m_max / 100).max(1);
    let mut out = Vec::new();
    for m in (2..=m_max).step_by(step) {
        out.push(m as f64);
        for (combiner, model) in [
            (CombinerKind::Mrc, FadingModel::Ufc),
            (CombinerKind::Mrc, FadingModel::Cfc),
            (CombinerKind::Zf, FadingModel::Ufc),
            (CombinerKind::Zf, FadingModel::Cfc),
        ] {
            let case = RateCase { combiner, model };
            let zeta = if model == FadingModel::Cfc && m >= 4 { Some(zeta_bound(m, varpi)?) } else { None };
            let r = closed_form_rate(case, m, k, &vec![snr; k], &vec![1.0; k], 1.0, zeta);
            out.push(r.map(|v| v[0]).unwrap_or(f64::NAN));
        }
    }
    Ok(out)
}

/// Rows of `[ΣU_x (dB V/m), BCOD error, superposition error]` for `k_users`
/// equal in-phase users, sweeping the summed amplitude from −70 to 0 dB V/m.
#[wasm_bindgen]
pub fn linearization_sweep(k_users: usize) -> Result<Vec<f64>, JsError> {
    linearization_rows(k_users).map_err(js)
}

fn linearization_rows(k_users: usize) -> raqmimo_core::Result<Vec<f64>> {
    let phys = ReceiverPhysics::default();
    let u_y = phys.lo_field();
    let k = k_users.clamp(1, 64);
    let th = vec![0.0; k];
    let mut out = Vec::new();
    for i in 0..=35 {
        let db = -70.0 + 2.0 * i as f64;
        let u = vec![10f64.powf(db / 20.0) / k as f64; k];
        out.push(db);
        out.push(phys.bcod_linearization_error(&u, &th)?);
        out.push(superposition_error(u_y, &u, &th)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweeps_have_expected_shape() {
        assert_eq!(susceptibility_rows(5.7, 0.97, 10.0, 5).unwrap().len(), 15);
        let r = closed_form_rows(4, 0.0, 1.0, 64).unwrap();
        assert_eq!(r.len() % 5, 0);
        assert!(r[3].is_nan());
        assert_eq!(linearization_rows(4).unwrap().len(), 108);
    }

    #[test]
    fn zf_ufc_matches_formula() {
        let r = closed_form_rows(4, 0.0, 1.0, 64).unwrap();
        let row = r.chunks(5).find(|c| c[0] == 64.0).unwrap();
        assert!((row[3] - 61f64.log2()).abs() < 1e-12);
    }
}
