//! Multi-user channels: uncorrelated (UFC) and receiver-correlated (CFC)
//! fading with a Jakes correlation profile, plus user geometry and
//! large-scale fading.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::bessel::j0;
use crate::error::{invalid, Error, Result};
use crate::rng::complex_normal;
use crate::units::db_to_linear;

/// Eigenvalues in [−tol, 0) are treated as round-off and clamped to zero.
pub const EIGEN_CLAMP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FadingModel {
    Ufc,
    Cfc,
}

impl FadingModel {
    pub fn label(self) -> &'static str {
        match self {
            FadingModel::Ufc => "UFC",
            FadingModel::Cfc => "CFC",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    pub m_sensors: usize,
    pub k_users: usize,
    pub model: FadingModel,
    /// Jakes argument ϖ; ignored for UFC.
    pub varpi: f64,
    /// Large-scale fading β_k, linear.
    pub betas: Vec<f64>,
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m_sensors < 2 {
            return Err(invalid(format!("need at least 2 sensors, got {}", self.m_sensors)));
        }
        if self.k_users < 1 {
            return Err(invalid("need at least one user"));
        }
        if self.betas.len() != self.k_users {
            return Err(Error::DimensionMismatch(format!(
                "{} large-scale coefficients for {} users",
                self.betas.len(),
                self.k_users
            )));
        }
        if self.betas.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return Err(invalid("large-scale coefficients must be positive"));
        }
        if self.model == FadingModel::Cfc && !(self.varpi.is_finite() && self.varpi > 0.0) {
            return Err(invalid(format!("CFC needs varpi > 0, got {}", self.varpi)));
        }
        Ok(())
    }
}

/// Toeplitz correlation [R]_{ij} = J₀(ϖ|i−j|).
pub fn jakes_correlation(m_sensors: usize, varpi: f64) -> DMatrix<f64> {
    let lags: Vec<f64> = (0..m_sensors).map(|d| j0(varpi * d as f64)).collect();
    DMatrix::from_fn(m_sensors, m_sensors, |i, k| lags[i.abs_diff(k)])
}

/// R = U diag(λ) Uᵀ with eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationEigs {
    pub lambdas: Vec<f64>,
    pub u: DMatrix<f64>,
}

impl CorrelationEigs {
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    /// Tr(Λ²)/M.
    pub fn trace_sq_over_m(&self) -> f64 {
        self.lambdas.iter().map(|l| l * l).sum::<f64>() / self.dim() as f64
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut scaled = self.u.clone();
        for (j, l) in self.lambdas.iter().enumerate() {
            scaled.column_mut(j).scale_mut(*l);
        }
        scaled * self.u.transpose()
    }
}

pub fn eig_correlation(r: &DMatrix<f64>) -> Result<CorrelationEigs> {
    if !r.is_square() {
        return Err(Error::DimensionMismatch(format!("correlation is {}×{}", r.nrows(), r.ncols())));
    }
    let eig = SymmetricEigen::new(r.clone());
    let m = r.nrows();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut lambdas = Vec::with_capacity(m);
    let mut u = DMatrix::zeros(m, m);
    for (dst, &src) in order.iter().enumerate() {
        let l = eig.eigenvalues[src];
        if l < -EIGEN_CLAMP {
            return Err(Error::IndefiniteCorrelation(l));
        }
        lambdas.push(l.max(0.0));
        u.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(CorrelationEigs { lambdas, u })
}

/// Draws H = G D^{1/2} (UFC) or U(Σ⊙G)D^{1/2} with Σ = λ^{1/2}1ᵀ (CFC).
pub fn sample_channel<R: Rng + ?Sized>(
    spec: &ChannelSpec,
    eigs: Option<&CorrelationEigs>,
    rng: &mut R,
) -> Result<DMatrix<Complex64>> {
    let (m, k) = (spec.m_sensors, spec.k_users);
    if spec.betas.len() != k {
        return Err(Error::DimensionMismatch(format!("{} betas for {k} users", spec.betas.len())));
    }
    let mut g = DMatrix::from_fn(m, k, |_, _| Complex64::new(0.0, 0.0));
    for z in g.iter_mut() {
        *z = complex_normal(rng);
    }
    let mut h = match spec.model {
        FadingModel::Ufc => g,
        FadingModel::Cfc => {
            let eigs = eigs.ok_or_else(|| Error::DimensionMismatch("CFC channel needs correlation eigenpairs".into()))?;
            if eigs.dim() != m {
                return Err(Error::DimensionMismatch(format!("eigenpairs of size {} for {m} sensors", eigs.dim())));
            }
            let (mut re, mut im) = (DMatrix::<f64>::zeros(m, k), DMatrix::<f64>::zeros(m, k));
            for c in 0..k {
                for r in 0..m {
                    let s = eigs.lambdas[r].sqrt();
                    re[(r, c)] = s * g[(r, c)].re;
                    im[(r, c)] = s * g[(r, c)].im;
                }
            }
            let (re, im) = (&eigs.u * re, &eigs.u * im);
            DMatrix::from_fn(m, k, |r, c| Complex64::new(re[(r, c)], im[(r, c)]))
        }
    };
    for (c, beta) in spec.betas.iter().enumerate() {
        h.column_mut(c).scale_mut(beta.sqrt());
    }
    Ok(h)
}

/// β = 10^{(β_ref + 10ν log₁₀(1/D) + F)/10} with F ~ N(0, σ²) in dB.
pub fn large_scale_fading<R: Rng + ?Sized>(
    d: f64,
    nu: f64,
    beta_ref_db: f64,
    shadow_sigma_db: f64,
    rng: &mut R,
) -> Result<f64> {
    if !(d >= 1.0) {
        return Err(invalid(format!("distance must be at least the 1 m reference, got {d}")));
    }
    if !(shadow_sigma_db >= 0.0) {
        return Err(invalid(format!("shadowing spread must be non-negative, got {shadow_sigma_db}")));
    }
    let shadow = if shadow_sigma_db > 0.0 {
        Normal::new(0.0, shadow_sigma_db).map_err(|e| invalid(e.to_string()))?.sample(rng)
    } else {
        0.0
    };
    Ok(db_to_linear(beta_ref_db - 10.0 * nu * d.log10() + shadow))
}

/// Distances to users dropped uniformly over a disk of `radius` whose centre
/// is `center_dist` from the receiver.
pub fn place_users<R: Rng + ?Sized>(k_users: usize, center_dist: f64, radius: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(radius >= 0.0 && center_dist > radius) {
        return Err(invalid(format!("need center_dist > radius >= 0, got {center_dist} and {radius}")));
    }
    Ok((0..k_users)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let t = 2.0 * PI * rng.random::<f64>();
            (center_dist * center_dist + r * r + 2.0 * center_dist * r * t.cos()).sqrt()
        })
        .collect())
}
