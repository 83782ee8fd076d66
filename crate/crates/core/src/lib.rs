//! Simulation core for Rydberg-atomic quantum MIMO (RAQ-MIMO) multi-user
//! uplink receivers.
//!
//! The crate is organised along the receiver chain:
//!
//! * [`quantum`]: four-level Lindblad steady state and the vapour
//!   susceptibility χ(Ω_RF) with its derivative.
//! * [`transduction`]: probe transfer, balanced coherent optical detection,
//!   per-sensor gain/phase and per-sensor SNR.
//! * [`channel`]: UFC/CFC channel matrices, Jakes correlation and user
//!   geometry.
//! * [`rates`]: MRC/ZF SINR, Monte Carlo ergodic rates, closed-form
//!   asymptotics, trace bounds and the classical massive-MIMO comparison.

pub mod bessel;
pub mod channel;
pub mod constants;
pub mod error;
pub mod quantum;
pub mod rates;
pub mod rng;
pub mod stats;
pub mod transduction;
pub mod units;

pub use num_complex::Complex64;

pub use error::{Error, Result};
