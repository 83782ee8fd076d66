//! Physical constants (CODATA 2018, SI).

/// Reduced Planck constant ħ, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity ε₀, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
/// Reference (room) temperature used for receiver noise, K.
pub const ROOM_TEMPERATURE: f64 = 290.0;
/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;
