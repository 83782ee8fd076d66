//! Post-combining SINR of each user for MRC and ZF receivers.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::CombinerKind;
use crate::error::{invalid, Error, Result};

/// Gram matrices with a larger condition number are treated as singular.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

fn effective_channel(theta_diag: &[Complex64], h: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    if theta_diag.len() != h.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "{} sensor gains for a channel with {} rows",
            theta_diag.len(),
            h.nrows()
        )));
    }
    let mut a = h.clone();
    for (mut row, t) in a.row_iter_mut().zip(theta_diag) {
        row *= *t;
    }
    Ok(a)
}

/// Combining matrix C: ΘH for MRC, ΘH(H*Θ*ΘH)⁻¹ for ZF.
///
/// ZF is formed from a thin QR factorisation ΘH = QR as C = Q R^{-*}, which
/// avoids squaring the condition number.
pub fn combiner_matrix(
    kind: CombinerKind,
    theta_diag: &[Complex64],
    h: &DMatrix<Complex64>,
) -> Result<DMatrix<Complex64>> {
    let a = effective_channel(theta_diag, h)?;
    match kind {
        CombinerKind::Mrc => Ok(a),
        CombinerKind::Zf => {
            let (m, k) = a.shape();
            if m <= k {
                return Err(invalid(format!("ZF needs more sensors than users (M={m}, K={k})")));
            }
            let qr = a.qr();
            let r = qr.r();
            let sv = r.singular_values();
            let (smax, smin) = (sv.max(), sv.min());
            let cond = if smin > 0.0 { (smax / smin).powi(2) } else { f64::INFINITY };
            if !(cond <= MAX_GRAM_CONDITION) {
                return Err(Error::SingularGram(cond));
            }
            let r_inv_adj = r
                .adjoint()
                .solve_lower_triangular(&DMatrix::identity(k, k))
                .ok_or(Error::SingularGram(cond))?;
            Ok(qr.q() * r_inv_adj)
        }
    }
}

fn sinr_from(c: &DMatrix<Complex64>, a: &DMatrix<Complex64>, p_s: f64, sigma_sq: f64) -> Vec<f64> {
    // Entry (k, i) of C*ΘH is c_k* Θ h_i.
    let cross = c.adjoint() * a;
    (0..a.ncols())
        .map(|k| {
            let signal = p_s * cross[(k, k)].norm_sqr();
            let interference: f64 = (0..a.ncols()).filter(|&i| i != k).map(|i| cross[(k, i)].norm_sqr()).sum();
            let noise = sigma_sq * c.column(k).norm_squared();
            signal / (p_s * interference + noise)
        })
        .collect()
}

fn check_powers(p_s: f64, sigma_sq: f64) -> Result<()> {
    if !(p_s.is_finite() && p_s >= 0.0) {
        return Err(invalid(format!("transmit power must be non-negative, got {p_s}")));
    }
    if !(sigma_sq > 0.0) {
        return Err(invalid(format!("noise power must be positive, got {sigma_sq}")));
    }
    Ok(())
}

/// SINR of every user.
pub fn sinr_all(
    kind: CombinerKind,
    theta_diag: &[Complex64],
    h: &DMatrix<Complex64>,
    p_s: f64,
    sigma_sq: f64,
) -> Result<Vec<f64>> {
    check_powers(p_s, sigma_sq)?;
    let c = combiner_matrix(kind, theta_diag, h)?;
    let a = effective_channel(theta_diag, h)?;
    Ok(sinr_from(&c, &a, p_s, sigma_sq))
}

/// SINR of user `k` (0-based).
pub fn sinr(
    kind: CombinerKind,
    theta_diag: &[Complex64],
    h: &DMatrix<Complex64>,
    p_s: f64,
    sigma_sq: f64,
    k: usize,
) -> Result<f64> {
    if k >= h.ncols() {
        return Err(Error::DimensionMismatch(format!("user {k} out of {}", h.ncols())));
    }
    Ok(sinr_all(kind, theta_diag, h, p_s, sigma_sq)?[k])
}
