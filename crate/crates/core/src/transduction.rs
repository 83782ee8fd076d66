//! Vapour-cell probe transfer, balanced coherent optical detection (BCOD)
//! and the per-sensor gain, phase factor and SNR that feed the rate layer.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::constants::{BOLTZMANN, ELEMENTARY_CHARGE, EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::error::{invalid, Result};
use crate::quantum::{susceptibility, AtomicConfig, Susceptibility};
use crate::units::dbvm_to_vpm;

/// Below this |χ′| the slope direction is undefined and the sensor is dead.
pub const DEGENERATE_SLOPE: f64 = 1e-30;
/// Samples per beat period used by the linearisation error metrics.
pub const BEAT_SAMPLES: usize = 1024;

/// Probe and detection-chain parameters of one sensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OpticalConfig {
    /// Input probe amplitude U₀, V/m.
    pub u0: f64,
    /// Probe optical frequency, Hz.
    pub f_p: f64,
    /// Vapour-cell length L, m.
    pub cell_length: f64,
    /// Probe beam FWHM F_p, m.
    pub fwhm: f64,
    /// Local optical beam power 𝒫_l, W.
    pub p_lob: f64,
    /// Local optical beam phase φ_l, rad. `None` selects the phase that
    /// maximises the readout (cos²φ = 1).
    pub phi_lob: Option<f64>,
    /// LNA power gain after the photodetectors (linear).
    pub g_lna: f64,
    /// Photodetector quantum efficiency η.
    pub eta_q: f64,
    /// Input probe phase φ₀, rad.
    pub phi0: f64,
}

impl Default for OpticalConfig {
    fn default() -> Self {
        Self {
            u0: 68.0,
            f_p: 351.725e12,
            cell_length: 0.02,
            fwhm: 1e-3,
            p_lob: 1e-3,
            phi_lob: None,
            g_lna: 1.0,
            eta_q: 0.8,
            phi0: 0.0,
        }
    }
}

impl OpticalConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("u0", self.u0),
            ("f_p", self.f_p),
            ("cell_length", self.cell_length),
            ("fwhm", self.fwhm),
            ("p_lob", self.p_lob),
            ("g_lna", self.g_lna),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be finite and positive, got {v}")));
            }
        }
        if !(self.eta_q > 0.0 && self.eta_q <= 1.0) {
            return Err(invalid(format!("eta_q must lie in (0, 1], got {}", self.eta_q)));
        }
        if let Some(p) = self.phi_lob {
            if !p.is_finite() {
                return Err(invalid("phi_lob must be finite"));
            }
        }
        Ok(())
    }

    /// Probe wavenumber k_p = 2π f_p / c.
    pub fn k_p(&self) -> f64 {
        2.0 * PI * self.f_p / SPEED_OF_LIGHT
    }

    /// Probe cross-section A_p = π F_p² / (2 ln 2).
    pub fn a_p(&self) -> f64 {
        PI * self.fwhm * self.fwhm / (2.0 * LN_2)
    }

    /// Photodetector responsivity α = ηq / (ħω_p), A/W.
    pub fn alpha(&self) -> f64 {
        self.eta_q * ELEMENTARY_CHARGE / (HBAR * 2.0 * PI * self.f_p)
    }

    /// Optical power carried by a probe of amplitude `u`.
    pub fn power_of(&self, u: f64) -> f64 {
        PI * SPEED_OF_LIGHT * EPSILON_0 / (8.0 * LN_2) * self.fwhm * self.fwhm * u * u
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOutput {
    pub amplitude: f64,
    pub phase: f64,
    pub power: f64,
}

/// Probe leaving the cell: Beer–Lambert attenuation by Im χ and a phase
/// shift by Re χ over the cell length.
pub fn probe_output(opt: &OpticalConfig, chi: Complex64) -> ProbeOutput {
    let half_kl = 0.5 * opt.k_p() * opt.cell_length;
    let amplitude = opt.u0 * (-half_kl * chi.im).exp();
    ProbeOutput { amplitude, phase: opt.phi0 + half_kl * chi.re, power: opt.power_of(amplitude) }
}

/// Linearised response of one sensor around the LO operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumReadout {
    /// Slope κ of the quantum response, m/V.
    pub kappa: f64,
    /// Extra phase ψ from the direction of χ′.
    pub psi: f64,
    /// Total readout phase φ(Ω_l) = φ_l − φ_p(Ω_l) + ψ.
    pub varphi: f64,
    /// Power gain ϱ.
    pub varrho: f64,
    /// Phase factor Φ of the reference sensor.
    pub phi_factor: Complex64,
    pub cos2_varphi: f64,
    /// Probe power 𝒫(Ω_l) after the cell.
    pub probe_power: f64,
    /// Set when |χ′| is too small to define a slope direction; κ = ψ = 0.
    pub degenerate_slope: bool,
}

/// κ, ψ, φ, ϱ and Φ from the susceptibility and its slope at Ω_l.
///
/// ψ is taken as atan2(Re χ′, Im χ′); it coincides with
/// arccos(Im χ′/|χ′|) whenever Re χ′ ≥ 0 and keeps the sign otherwise.
pub fn readout(opt: &OpticalConfig, mu34: f64, sus: &Susceptibility, theta_y1: f64) -> QuantumReadout {
    let probe = probe_output(opt, sus.chi);
    let slope = sus.chi_prime.norm();
    let degenerate_slope = !(slope >= DEGENERATE_SLOPE);
    let (kappa, psi) = if degenerate_slope {
        (0.0, 0.0)
    } else {
        (0.5 * opt.k_p() * opt.cell_length * mu34 / HBAR * slope, sus.chi_prime.re.atan2(sus.chi_prime.im))
    };
    let phi_l = opt.phi_lob.unwrap_or(probe.phase - psi);
    let varphi = phi_l - probe.phase + psi;
    let alpha = opt.alpha();
    let varrho = 4.0 * alpha * alpha / (SPEED_OF_LIGHT * EPSILON_0) * opt.g_lna * opt.p_lob * probe.power * kappa * kappa;
    QuantumReadout {
        kappa,
        psi,
        varphi,
        varrho,
        phi_factor: phase_factor(theta_y1, varphi),
        cos2_varphi: varphi.cos().powi(2),
        probe_power: probe.power,
        degenerate_slope,
    }
}

/// Φ = ½e^{−j(θ−φ)} + ½e^{−j(θ+φ)} = e^{−jθ} cos φ.
pub fn phase_factor(theta_y1: f64, varphi: f64) -> Complex64 {
    0.5 * Complex64::from_polar(1.0, -(theta_y1 - varphi)) + 0.5 * Complex64::from_polar(1.0, -(theta_y1 + varphi))
}

/// m-th diagonal entry of the LO steering matrix (sensors indexed from 1).
pub fn lo_phase_ramp(m: usize, d_over_lambda: f64, theta: f64) -> Result<Complex64> {
    if m == 0 {
        return Err(invalid("sensor index starts at 1"));
    }
    if !(d_over_lambda > 0.0 && d_over_lambda <= 0.5) {
        return Err(invalid(format!("d/λ must lie in (0, 0.5], got {d_over_lambda}")));
    }
    Ok(Complex64::from_polar(1.0, -2.0 * PI * (m - 1) as f64 * d_over_lambda * theta.sin()))
}

/// Sensitivity regime that sets the receiver noise floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SensingRegime {
    /// Standard quantum limit (atom projection noise).
    Sql,
    /// Photon shot limit.
    Psl,
}

impl SensingRegime {
    pub fn label(self) -> &'static str {
        match self {
            SensingRegime::Sql => "SQL",
            SensingRegime::Psl => "PSL",
        }
    }
}

/// Everything needed to evaluate one sensor from first principles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReceiverPhysics {
    pub atoms: AtomicConfig,
    pub optics: OpticalConfig,
    /// LO field amplitude at the sensors, dB V/m.
    pub lo_field_dbvm: f64,
    /// Fraction Υ of atoms that take part in the Rydberg transition.
    pub participation: f64,
    /// Total dephasing rate Γ₂ entering the SQL, rad/s.
    pub dephasing: f64,
}

impl Default for ReceiverPhysics {
    fn default() -> Self {
        Self {
            atoms: AtomicConfig::default(),
            optics: OpticalConfig::default(),
            lo_field_dbvm: -23.6,
            participation: 0.054,
            dephasing: 2.0 * PI * 1.0e6,
        }
    }
}

/// Susceptibility and readout at the LO operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub omega_l: f64,
    pub susceptibility: Susceptibility,
    pub readout: QuantumReadout,
    /// Local optical beam phase actually used.
    pub phi_lob: f64,
}

impl ReceiverPhysics {
    pub fn validate(&self) -> Result<()> {
        self.atoms.validate()?;
        self.optics.validate()?;
        if !self.lo_field_dbvm.is_finite() {
            return Err(invalid("lo_field_dbvm must be finite"));
        }
        if !(self.participation > 0.0 && self.participation <= 1.0) {
            return Err(invalid(format!("participation must lie in (0, 1], got {}", self.participation)));
        }
        if !(self.dephasing.is_finite() && self.dephasing > 0.0) {
            return Err(invalid(format!("dephasing must be positive, got {}", self.dephasing)));
        }
        Ok(())
    }

    pub fn lo_field(&self) -> f64 {
        dbvm_to_vpm(self.lo_field_dbvm)
    }

    /// LO Rabi frequency Ω_l.
    pub fn omega_l(&self) -> f64 {
        self.atoms.rf_rabi(self.lo_field())
    }

    pub fn operating_point(&self) -> Result<OperatingPoint> {
        self.validate()?;
        let omega_l = self.omega_l();
        let sus = Susceptibility::at(&self.atoms, omega_l)?;
        let readout = readout(&self.optics, self.atoms.mu34, &sus, 0.0);
        let phi_lob = readout.varphi + probe_output(&self.optics, sus.chi).phase - readout.psi;
        Ok(OperatingPoint { omega_l, susceptibility: sus, readout, phi_lob })
    }

    /// Balanced-detector output 2α√(G𝒫_l𝒫(Ω_RF)) cos(φ_l − φ_p(Ω_RF)) at an
    /// instantaneous RF Rabi frequency, with the LOB phase fixed by `op`.
    pub fn bcod_output(&self, op: &OperatingPoint, omega_rf: f64) -> Result<f64> {
        let chi = susceptibility(&self.atoms, omega_rf)?;
        let probe = probe_output(&self.optics, chi);
        let o = &self.optics;
        Ok(2.0 * o.alpha() * (o.g_lna * o.p_lob * probe.power).sqrt() * (op.phi_lob - probe.phase).cos())
    }

    /// Worst relative deviation, over one beat period, between the exact
    /// BCOD output swing and its linear model for the given user amplitudes
    /// and phases. Normalised by the peak exact swing.
    pub fn bcod_linearization_error(&self, u_x: &[f64], thetas: &[f64]) -> Result<f64> {
        check_users(u_x, thetas)?;
        let op = self.operating_point()?;
        let u_y = self.lo_field();
        let v0 = self.bcod_output(&op, op.omega_l)?;
        let o = &self.optics;
        let r = &op.readout;
        let lin_gain = -2.0 * o.alpha() * (o.g_lna * o.p_lob * r.probe_power).sqrt() * r.kappa * r.varphi.cos();
        // As Ω_RF → 0 the Rydberg level decouples and the steady state stops
        // being unique; χ is already quadratic and negligible at this floor.
        let omega_floor = 1e-2 * op.omega_l;
        let mut worst_dev: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for n in 0..BEAT_SAMPLES {
            let phase = 2.0 * PI * n as f64 / BEAT_SAMPLES as f64;
            let (exact_amp, approx_amp) = amplitudes_at_phase(u_y, u_x, thetas, phase);
            let omega = self.atoms.rf_rabi(exact_amp).max(omega_floor);
            let swing = self.bcod_output(&op, omega)? - v0;
            let linear = lin_gain * (approx_amp - u_y);
            worst_dev = worst_dev.max((swing - linear).abs());
            peak = peak.max(swing.abs());
        }
        Ok(if peak > 0.0 { worst_dev / peak } else { 0.0 })
    }
}

/// Per-sensor SNR of the quantum receiver.
pub fn snr1_per_sensor(
    regime: SensingRegime,
    physics: &ReceiverPhysics,
    p_s: f64,
    bandwidth: f64,
    beta_k: f64,
) -> Result<f64> {
    for (name, v) in [("p_s", p_s), ("bandwidth", bandwidth), ("beta_k", beta_k)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid(format!("{name} must be positive, got {v}")));
        }
    }
    physics.validate()?;
    let drive = p_s / bandwidth * beta_k;
    Ok(match regime {
        SensingRegime::Sql => {
            let mu = physics.atoms.mu34;
            let n_eff = physics.participation * physics.atoms.n0;
            2.0 * mu * mu / (SPEED_OF_LIGHT * EPSILON_0 * HBAR * HBAR)
                * (n_eff * physics.optics.a_p() * physics.optics.cell_length / physics.dephasing)
                * drive
        }
        SensingRegime::Psl => {
            let r = physics.operating_point()?.readout;
            4.0 * physics.optics.alpha() / (SPEED_OF_LIGHT * EPSILON_0 * ELEMENTARY_CHARGE)
                * r.probe_power
                * r.kappa
                * r.kappa
                * drive
        }
    })
}

fn check_users(u_x: &[f64], thetas: &[f64]) -> Result<()> {
    if u_x.len() != thetas.len() {
        return Err(crate::error::Error::DimensionMismatch(format!(
            "{} user amplitudes but {} phases",
            u_x.len(),
            thetas.len()
        )));
    }
    if u_x.iter().any(|u| !(u.is_finite() && *u >= 0.0)) {
        return Err(invalid("user amplitudes must be finite and non-negative"));
    }
    Ok(())
}

fn amplitudes_at_phase(u_y: f64, u_x: &[f64], thetas: &[f64], phase: f64) -> (f64, f64) {
    let mut sq = u_y * u_y;
    let mut cross = 0.0;
    for (&u, &th) in u_x.iter().zip(thetas) {
        let c = (phase + th).cos();
        sq += u * u;
        cross += u * c;
    }
    let exact = (sq + 2.0 * u_y * cross).max(0.0).sqrt();
    (exact, u_y + cross)
}

/// Exact and first-order amplitude of the LO plus user fields at time `t`.
pub fn superposition_amplitude(u_y: f64, u_x: &[f64], f_delta: f64, thetas: &[f64], t: f64) -> Result<(f64, f64)> {
    if !(u_y.is_finite() && u_y > 0.0) {
        return Err(invalid(format!("u_y must be positive, got {u_y}")));
    }
    check_users(u_x, thetas)?;
    Ok(amplitudes_at_phase(u_y, u_x, thetas, 2.0 * PI * f_delta * t))
}

/// Worst pointwise relative error |exact − approx| / exact of the
/// superposition amplitude over one beat period.
pub fn superposition_error(u_y: f64, u_x: &[f64], thetas: &[f64]) -> Result<f64> {
    if !(u_y.is_finite() && u_y > 0.0) {
        return Err(invalid(format!("u_y must be positive, got {u_y}")));
    }
    check_users(u_x, thetas)?;
    let mut worst: f64 = 0.0;
    for n in 0..BEAT_SAMPLES {
        let phase = 2.0 * PI * n as f64 / BEAT_SAMPLES as f64;
        let (exact, approx) = amplitudes_at_phase(u_y, u_x, thetas, phase);
        let dev = (exact - approx).abs();
        let rel = if exact > 0.0 {
            dev / exact
        } else if dev > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        worst = worst.max(rel);
    }
    Ok(worst)
}

/// Field amplitude of a user whose received power density is 𝒫_s β.
pub fn user_field(p_s: f64, beta: f64) -> f64 {
    (2.0 * p_s * beta / (SPEED_OF_LIGHT * EPSILON_0)).sqrt()
}

/// Thermal noise spectral density k_B T, W/Hz.
pub fn thermal_density(temperature: f64) -> f64 {
    BOLTZMANN * temperature
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::BOHR_RADIUS;
    use proptest::prelude::*;

    fn sus(chi: Complex64, chi_prime: Complex64) -> Susceptibility {
        Susceptibility { chi, chi_prime }
    }

    #[test]
    fn transparent_medium() {
        let opt = OpticalConfig { phi0: 0.3, ..OpticalConfig::default() };
        let p = probe_output(&opt, Complex64::new(0.0, 0.0));
        assert_eq!(p.amplitude, opt.u0);
        assert_eq!(p.phase, 0.3);
        assert!(probe_output(&opt, Complex64::new(0.0, 1e-6)).amplitude < opt.u0);
    }

    #[test]
    fn doubling_length_doubles_exponent_and_phase() {
        let opt = OpticalConfig::default();
        let long = OpticalConfig { cell_length: 2.0 * opt.cell_length, ..opt };
        let chi = Complex64::new(3e-6, 2e-6);
        let (a, b) = (probe_output(&opt, chi), probe_output(&long, chi));
        let att = |p: &ProbeOutput| (opt.u0 / p.amplitude).ln();
        assert!((att(&b) - 2.0 * att(&a)).abs() < 1e-12 * att(&b));
        assert!((b.phase - 2.0 * a.phase).abs() < 1e-12 * b.phase.abs());
    }

    #[test]
    fn power_matches_cross_section_form() {
        let opt = OpticalConfig::default();
        let p = probe_output(&opt, Complex64::new(0.0, 1e-5));
        let alt = 0.25 * SPEED_OF_LIGHT * EPSILON_0 * opt.a_p() * p.amplitude * p.amplitude;
        assert!((p.power - alt).abs() < 1e-12 * alt);
    }

    #[test]
    fn imaginary_slope_gives_zero_psi() {
        let opt = OpticalConfig::default();
        let r = readout(&opt, 1e-26, &sus(Complex64::new(0.0, 1e-5), Complex64::new(0.0, 3e-12)), 0.0);
        assert_eq!(r.psi, 0.0);
        assert!(!r.degenerate_slope);
    }

    #[test]
    fn optimal_lob_aligns_readout() {
        let opt = OpticalConfig { phi_lob: None, ..OpticalConfig::default() };
        let r = readout(&opt, 1e-26, &sus(Complex64::new(2e-6, 1e-5), Complex64::new(-1e-12, 3e-12)), 0.0);
        assert!(r.varphi.abs() < 1e-15);
        assert!((r.cos2_varphi - 1.0).abs() < 1e-15);
        assert!((r.phi_factor - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn degenerate_slope_is_a_dead_sensor() {
        let r = readout(&OpticalConfig::default(), 1e-26, &sus(Complex64::new(0.0, 1e-5), Complex64::new(0.0, 0.0)), 0.0);
        assert!(r.degenerate_slope);
        assert_eq!((r.kappa, r.psi, r.varrho), (0.0, 0.0, 0.0));
    }

    #[test]
    fn psi_matches_arccos_for_non_negative_real_slope() {
        for (re, im) in [(1.0, 2.0), (0.5, -3.0), (2.0, 0.0)] {
            let opt = OpticalConfig::default();
            let r = readout(&opt, 1e-26, &sus(Complex64::new(0.0, 0.0), Complex64::new(re, im) * 1e-12), 0.0);
            let expected = (im / (re * re + im * im).sqrt()).acos();
            assert!((r.psi - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn lo_ramp_reference_cases() {
        assert_eq!(lo_phase_ramp(1, 0.5, 1.0).unwrap(), Complex64::new(1.0, 0.0));
        for m in 1..10 {
            assert_eq!(lo_phase_ramp(m, 0.3, 0.0).unwrap(), Complex64::new(1.0, 0.0));
        }
        let z = lo_phase_ramp(2, 0.5, PI / 2.0).unwrap();
        assert!((z - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!(lo_phase_ramp(0, 0.5, 0.0).is_err());
        assert!(lo_phase_ramp(1, 0.6, 0.0).is_err());
    }

    #[test]
    fn sql_snr_from_independent_product() {
        let phys = ReceiverPhysics::default();
        let (p_s, b, beta) = (0.2, 1e5, 3.7e-9);
        let got = snr1_per_sensor(SensingRegime::Sql, &phys, p_s, b, beta).unwrap();
        // Re-assembled term by term with literal constants.
        let mu34 = 1000.0 * 1.602_176_634e-19 * 5.291_772_109_03e-11;
        let hbar = 1.054_571_817e-34;
        let c_eps = 299_792_458.0 * 8.854_187_812_8e-12;
        let area = std::f64::consts::PI * 1e-6 / (2.0 * std::f64::consts::LN_2);
        let n_bar = 0.054 * 4.89e16;
        let gamma2 = 2.0 * std::f64::consts::PI * 1e6;
        let expected = (2.0 * mu34 * mu34) / (c_eps * hbar * hbar) * (n_bar / gamma2) * area * 0.02 * (p_s / b) * beta;
        assert!((got - expected).abs() <= 1e-12 * expected, "{got} vs {expected}");
    }

    #[test]
    fn snr_scales_with_power_and_bandwidth() {
        let phys = ReceiverPhysics::default();
        for regime in [SensingRegime::Sql, SensingRegime::Psl] {
            let s = snr1_per_sensor(regime, &phys, 0.1, 1e5, 1e-9).unwrap();
            let s2 = snr1_per_sensor(regime, &phys, 0.2, 1e5, 1e-9).unwrap();
            let sb = snr1_per_sensor(regime, &phys, 0.1, 2e5, 1e-9).unwrap();
            assert!((s2 - 2.0 * s).abs() < 1e-12 * s2);
            assert!((sb - 0.5 * s).abs() < 1e-12 * s);
        }
    }

    #[test]
    fn superposition_reference_cases() {
        let (e, a) = superposition_amplitude(0.5, &[0.0, 0.0], 1e3, &[0.1, 0.2], 0.37).unwrap();
        assert_eq!((e, a), (0.5, 0.5));
        let (e, a) = superposition_amplitude(0.5, &[0.2], 1e3, &[0.0], 0.0).unwrap();
        assert!((e - 0.7).abs() < 1e-15 && (a - 0.7).abs() < 1e-15);
        assert!(superposition_error(1.0, &[0.01], &[0.0]).unwrap() < 1e-4);
        assert!(superposition_error(1.0, &[0.004, 0.006], &[0.3, 1.2]).unwrap() < 1e-4);
    }

    #[test]
    fn superposition_error_monotone_in_user_power() {
        let grid: Vec<f64> = (0..=100).map(|i| 0.5 * i as f64 / 100.0).collect();
        let errs: Vec<f64> = grid.iter().map(|&r| superposition_error(1.0, &[r], &[0.0]).unwrap()).collect();
        assert!(errs.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn bcod_linearisation_small_and_large_signal() {
        let phys = ReceiverPhysics::default();
        let u_y = phys.lo_field();
        let small = phys.bcod_linearization_error(&[0.01 * u_y], &[0.0]).unwrap();
        let large = phys.bcod_linearization_error(&[u_y], &[0.0]).unwrap();
        assert!(small < 0.01, "small-signal error {small}");
        assert!(large > 0.1, "large-signal error {large}");
    }

    #[test]
    fn default_operating_point_is_sane() {
        let phys = ReceiverPhysics::default();
        let op = phys.operating_point().unwrap();
        assert!(op.readout.kappa > 0.0);
        assert!((op.readout.cos2_varphi - 1.0).abs() < 1e-12);
        assert!((phys.atoms.mu34 - 1000.0 * ELEMENTARY_CHARGE * BOHR_RADIUS).abs() < 1e-40);
    }

    proptest! {
        #[test]
        fn phi_magnitude_is_abs_cos(theta in -10.0f64..10.0, varphi in -10.0f64..10.0) {
            let z = phase_factor(theta, varphi);
            prop_assert!((z.norm() - varphi.cos().abs()).abs() < 1e-12);
            prop_assert!((z.norm() - phase_factor(0.0, varphi).norm()).abs() < 1e-12);
        }

        #[test]
        fn lo_ramp_unit_modulus(m in 1usize..4096, d in 0.01f64..0.5, theta in -PI..PI) {
            prop_assert!((lo_phase_ramp(m, d, theta).unwrap().norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn gain_scaling(g in 0.1f64..100.0, pl in 1e-5f64..1e-1, k in 0.1f64..10.0) {
            let base = OpticalConfig::default();
            let s = sus(Complex64::new(1e-7, 1e-5), Complex64::new(1e-13, 4e-12));
            let r0 = readout(&base, 1e-26, &s, 0.0).varrho;
            let rg = readout(&OpticalConfig { g_lna: base.g_lna * g, p_lob: base.p_lob * pl, ..base }, 1e-26, &s, 0.0).varrho;
            prop_assert!((rg - r0 * g * pl).abs() <= 1e-12 * rg);
            let sk = sus(s.chi, s.chi_prime * k);
            let rk = readout(&base, 1e-26, &sk, 0.0).varrho;
            prop_assert!((rk - r0 * k * k).abs() <= 1e-10 * rk);
        }
    }
}
