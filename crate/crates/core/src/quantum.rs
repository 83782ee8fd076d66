//! Four-level ladder atom: Lindblad steady state and vapour susceptibility.
//!
//! Levels are indexed 1..4 in the physics notation and 0..3 in code. The
//! probe couples 1↔2, the coupling laser 2↔3 and the RF field 3↔4.

use nalgebra::{Matrix4, SMatrix, SVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::constants::{BOHR_RADIUS, ELEMENTARY_CHARGE, EPSILON_0, HBAR};
use crate::error::{invalid, Error, Result};

pub type CMatrix4 = Matrix4<Complex64>;

/// Pivot ratio below which the steady-state system is declared singular.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-12;
/// Most negative population accepted before reporting a non-physical state.
pub const POPULATION_FLOOR: f64 = -1e-8;

const J: Complex64 = Complex64::new(0.0, 1.0);

/// Rabi frequencies, detunings and decay rates (all rad/s) together with
/// the vapour density and dipole moments.
///
/// The default is a caesium-like room-temperature cell with every decay
/// channel except γ₂ switched off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtomicConfig {
    pub omega_p: f64,
    pub omega_c: f64,
    pub delta_p: f64,
    pub delta_c: f64,
    pub delta_l: f64,
    pub gamma2: f64,
    pub gamma: f64,
    pub gamma_c: f64,
    pub gamma3: f64,
    pub gamma4: f64,
    /// Atomic density, m⁻³.
    pub n0: f64,
    /// Probe transition dipole, C·m.
    pub mu12: f64,
    /// RF transition dipole, C·m.
    pub mu34: f64,
}

impl Default for AtomicConfig {
    fn default() -> Self {
        let two_pi = 2.0 * PI;
        Self {
            omega_p: two_pi * 5.7e6,
            omega_c: two_pi * 0.97e6,
            delta_p: 0.0,
            delta_c: 0.0,
            delta_l: 0.0,
            gamma2: two_pi * 5.2e6,
            gamma: 0.0,
            gamma_c: 0.0,
            gamma3: 0.0,
            gamma4: 0.0,
            n0: 4.89e16,
            mu12: 2.5 * ELEMENTARY_CHARGE * BOHR_RADIUS,
            mu34: 1000.0 * ELEMENTARY_CHARGE * BOHR_RADIUS,
        }
    }
}

impl AtomicConfig {
    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("omega_p", self.omega_p),
            ("omega_c", self.omega_c),
            ("gamma2", self.gamma2),
            ("gamma", self.gamma),
            ("gamma_c", self.gamma_c),
            ("gamma3", self.gamma3),
            ("gamma4", self.gamma4),
        ];
        for (name, v) in nonneg {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        for (name, v) in [("delta_p", self.delta_p), ("delta_c", self.delta_c), ("delta_l", self.delta_l)] {
            if !v.is_finite() {
                return Err(invalid(format!("{name} must be finite, got {v}")));
            }
        }
        for (name, v) in [("n0", self.n0), ("mu12", self.mu12), ("mu34", self.mu34)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be finite and positive, got {v}")));
            }
        }
        let s = self.varsigma();
        if !(s.is_finite() && s > 0.0) {
            return Err(invalid(format!("susceptibility prefactor is not finite and positive: {s}")));
        }
        Ok(())
    }

    /// ς = 2 N₀ μ₁₂² / (ε₀ ħ), the prefactor in χ = −ς ρ₂₁ / Ω_p.
    pub fn varsigma(&self) -> f64 {
        2.0 * self.n0 * self.mu12 * self.mu12 / (EPSILON_0 * HBAR)
    }

    /// Converts an RF field amplitude (V/m) into the Rabi frequency Ω = μ₃₄U/ħ.
    pub fn rf_rabi(&self, field: f64) -> f64 {
        self.mu34 * field / HBAR
    }

    fn rate_scale(&self, omega_rf: f64) -> f64 {
        [
            self.omega_p,
            self.omega_c,
            omega_rf,
            self.delta_p.abs(),
            self.delta_c.abs(),
            self.delta_l.abs(),
            self.gamma2,
            self.gamma,
            self.gamma_c,
            self.gamma3,
            self.gamma4,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    fn scaled(&self, f: f64) -> Self {
        Self {
            omega_p: self.omega_p * f,
            omega_c: self.omega_c * f,
            delta_p: self.delta_p * f,
            delta_c: self.delta_c * f,
            delta_l: self.delta_l * f,
            gamma2: self.gamma2 * f,
            gamma: self.gamma * f,
            gamma_c: self.gamma_c * f,
            gamma3: self.gamma3 * f,
            gamma4: self.gamma4 * f,
            ..*self
        }
    }

    /// Diagonal of the relaxation matrix Γ.
    fn relaxation(&self) -> [f64; 4] {
        [
            self.gamma,
            self.gamma + self.gamma2,
            self.gamma + self.gamma3 + self.gamma_c,
            self.gamma + self.gamma4,
        ]
    }
}

/// Real symmetric ladder Hamiltonian in the rotating frame (units of ħ).
pub fn build_hamiltonian(cfg: &AtomicConfig, omega_rf: f64) -> CMatrix4 {
    let mut h = CMatrix4::zeros();
    let couplings = [cfg.omega_p, cfg.omega_c, omega_rf];
    for (i, w) in couplings.into_iter().enumerate() {
        h[(i, i + 1)] = Complex64::new(0.5 * w, 0.0);
        h[(i + 1, i)] = Complex64::new(0.5 * w, 0.0);
    }
    h[(1, 1)] = cfg.delta_p.into();
    h[(2, 2)] = (cfg.delta_p + cfg.delta_c).into();
    h[(3, 3)] = (cfg.delta_p + cfg.delta_c + cfg.delta_l).into();
    h
}

/// −j[H,ρ] − ½{Γ,ρ} + Λ(ρ), with the constant ground repopulation term given
/// explicitly so the same routine serves both the affine right-hand side and
/// its trace-homogenised linear form.
fn lindblad_terms(cfg: &AtomicConfig, omega_rf: f64, rho: &CMatrix4, ground_feed: Complex64) -> CMatrix4 {
    let h = build_hamiltonian(cfg, omega_rf);
    let mut out = (h * rho - rho * h) * (-J);
    let g = cfg.relaxation();
    for i in 0..4 {
        for k in 0..4 {
            out[(i, k)] -= 0.5 * (g[i] + g[k]) * rho[(i, k)];
        }
    }
    // γ_c is routed back to the ground state so that population is conserved.
    out[(0, 0)] += ground_feed + cfg.gamma2 * rho[(1, 1)] + cfg.gamma4 * rho[(3, 3)] + cfg.gamma_c * rho[(2, 2)];
    out[(1, 1)] += cfg.gamma3 * rho[(2, 2)];
    out
}

/// Right-hand side dρ/dt of the master equation (rad/s units).
pub fn lindblad_rhs(cfg: &AtomicConfig, omega_rf: f64, rho: &CMatrix4) -> CMatrix4 {
    lindblad_terms(cfg, omega_rf, rho, cfg.gamma.into())
}

/// Max-norm of dρ/dt at `rho`, divided by the largest rate in the problem.
pub fn lindblad_residual(cfg: &AtomicConfig, omega_rf: f64, rho: &CMatrix4) -> f64 {
    let s = cfg.rate_scale(omega_rf).max(f64::MIN_POSITIVE);
    lindblad_rhs(cfg, omega_rf, rho).iter().map(|z| z.norm()).fold(0.0, f64::max) / s
}

/// Steady-state density operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    pub rho: CMatrix4,
}

impl DensityMatrix {
    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (self.rho - self.rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let ev = self.rho.symmetric_eigenvalues();
        [ev[0], ev[1], ev[2], ev[3]]
    }

    pub fn populations(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.rho[(i, i)].re)
    }

    /// Probe coherence ρ₂₁.
    pub fn rho21(&self) -> Complex64 {
        self.rho[(1, 0)]
    }
}

/// Solves dρ/dt = 0 with Tr ρ = 1.
///
/// All rates are scaled by the largest one, the superoperator is assembled
/// column by column on the matrix-unit basis, the ρ₁₁ balance row is
/// replaced by the trace constraint and the 16×16 system is solved by LU.
pub fn steady_state(cfg: &AtomicConfig, omega_rf: f64) -> Result<DensityMatrix> {
    cfg.validate()?;
    if !(omega_rf.is_finite() && omega_rf >= 0.0) {
        return Err(invalid(format!("omega_rf must be finite and non-negative, got {omega_rf}")));
    }
    let s = cfg.rate_scale(omega_rf);
    if s == 0.0 {
        return Err(Error::SingularSystem { pivot_ratio: 0.0 });
    }
    let scaled = cfg.scaled(1.0 / s);
    let w = omega_rf / s;

    let mut a = SMatrix::<Complex64, 16, 16>::zeros();
    for col in 0..16 {
        let mut e = CMatrix4::zeros();
        e[(col / 4, col % 4)] = Complex64::new(1.0, 0.0);
        let feed = scaled.gamma * e.trace();
        let l = lindblad_terms(&scaled, w, &e, feed);
        for row in 0..16 {
            a[(row, col)] = l[(row / 4, row % 4)];
        }
    }
    for col in 0..16 {
        a[(0, col)] = if col % 5 == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
    }
    let mut b = SVector::<Complex64, 16>::zeros();
    b[0] = Complex64::new(1.0, 0.0);

    let lu = a.lu();
    let u = lu.u();
    let pivots = (0..16).map(|i| u[(i, i)].norm());
    let (pmin, pmax) = pivots.fold((f64::INFINITY, 0.0f64), |(lo, hi), p| (lo.min(p), hi.max(p)));
    let pivot_ratio = if pmax > 0.0 { pmin / pmax } else { 0.0 };
    if !(pivot_ratio >= SINGULAR_PIVOT_RATIO) {
        return Err(Error::SingularSystem { pivot_ratio });
    }
    let x = lu.solve(&b).ok_or(Error::SingularSystem { pivot_ratio })?;

    let raw = CMatrix4::from_fn(|i, k| x[i * 4 + k]);
    let rho = (raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
    for i in 0..4 {
        let p = rho[(i, i)].re;
        if p < POPULATION_FLOOR {
            return Err(Error::NonPhysical { level: i + 1, value: p });
        }
    }
    Ok(DensityMatrix { rho })
}

/// χ(Ω_RF) = −ς ρ₂₁ / Ω_p.
pub fn susceptibility(cfg: &AtomicConfig, omega_rf: f64) -> Result<Complex64> {
    if !(cfg.omega_p > 0.0) {
        return Err(Error::ZeroProbe);
    }
    let rho = steady_state(cfg, omega_rf)?;
    Ok(-cfg.varsigma() * rho.rho21() / cfg.omega_p)
}

/// dχ/dΩ_RF at `omega_l` by central differences with Richardson
/// extrapolation, halving the step until two extrapolants agree.
pub fn susceptibility_derivative(cfg: &AtomicConfig, omega_l: f64) -> Result<Complex64> {
    if !(cfg.omega_p > 0.0) {
        return Err(Error::ZeroProbe);
    }
    if !(omega_l.is_finite() && omega_l > 0.0) {
        return Err(invalid(format!("omega_l must be positive, got {omega_l}")));
    }
    let central = |h: f64| -> Result<Complex64> {
        Ok((susceptibility(cfg, omega_l + h)? - susceptibility(cfg, omega_l - h)?) / (2.0 * h))
    };
    let floor = 1e-12 * susceptibility(cfg, omega_l)?.norm() / omega_l;
    let mut h = 1e-4 * omega_l;
    let mut d_h = central(h)?;
    let mut d_half = central(0.5 * h)?;
    let mut best = (4.0 * d_half - d_h) / 3.0;
    let mut last_change = f64::INFINITY;
    for _ in 0..8 {
        h *= 0.5;
        d_h = d_half;
        d_half = central(0.5 * h)?;
        let next = (4.0 * d_half - d_h) / 3.0;
        let change = (next - best).norm();
        // A growing change means round-off now dominates truncation.
        if change > last_change {
            break;
        }
        best = next;
        if change <= 1e-9 * next.norm().max(floor) {
            break;
        }
        last_change = change;
    }
    Ok(best)
}

/// χ and χ′ at the LO operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibility {
    pub chi: Complex64,
    pub chi_prime: Complex64,
}

impl Susceptibility {
    pub fn at(cfg: &AtomicConfig, omega_l: f64) -> Result<Self> {
        Ok(Self { chi: susceptibility(cfg, omega_l)?, chi_prime: susceptibility_derivative(cfg, omega_l)? })
    }
}

/// Steady state by RK4 integration of the master equation from the ground
/// state, independent of the linear solve in [`steady_state`]. The one-step
/// propagator is squared repeatedly so that long times are reached cheaply.
pub fn propagate_to_steady_state(cfg: &AtomicConfig, omega_rf: f64) -> Result<DensityMatrix> {
    cfg.validate()?;
    let s = cfg.rate_scale(omega_rf);
    let sc = cfg.scaled(1.0 / s);
    let w = omega_rf / s;
    let f = |r: &CMatrix4| lindblad_terms(&sc, w, r, sc.gamma * r.trace());
    let dt = 0.02;
    let step = |r: &CMatrix4| {
        let k1 = f(r);
        let k2 = f(&(r + k1 * Complex64::from(dt / 2.0)));
        let k3 = f(&(r + k2 * Complex64::from(dt / 2.0)));
        let k4 = f(&(r + k3 * Complex64::from(dt)));
        r + (k1 + k2 * Complex64::from(2.0) + k3 * Complex64::from(2.0) + k4) * Complex64::from(dt / 6.0)
    };
    let mut p = SMatrix::<Complex64, 16, 16>::zeros();
    for col in 0..16 {
        let mut e = CMatrix4::zeros();
        e[(col / 4, col % 4)] = Complex64::from(1.0);
        let out = step(&e);
        for row in 0..16 {
            p[(row, col)] = out[(row / 4, row % 4)];
        }
    }
    let mut v = SVector::<Complex64, 16>::zeros();
    v[0] = Complex64::from(1.0);
    for _ in 0..60 {
        v = p * v;
        let tr = v[0] + v[5] + v[10] + v[15];
        v /= tr;
        let rho = CMatrix4::from_fn(|i, k| v[i * 4 + k]);
        if f(&rho).iter().all(|z| z.norm() < 1e-12) {
            return Ok(DensityMatrix { rho });
        }
        p = p * p;
    }
    Err(Error::NoConvergence(60))
}
