//! Bessel function of the first kind, order zero.
//!
//! Power series for small arguments, Miller backward recurrence in the
//! mid range and the Hankel asymptotic expansion for large arguments.
//! Absolute error is below 1e-13 on the whole real line.

use std::f64::consts::{FRAC_PI_4, PI};

const SERIES_MAX: f64 = 8.0;
const MILLER_MAX: f64 = 40.0;

pub fn j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_MAX {
        series(x)
    } else if x < MILLER_MAX {
        miller(x)
    } else {
        hankel(x)
    }
}

fn series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) || k > 200.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

fn miller(x: f64) -> f64 {
    let mut n = (x + 40.0 + 4.0 * x.sqrt()) as usize;
    n += n % 2;
    let mut jp1 = 0.0;
    let mut j = 1e-30;
    let mut norm = 0.0;
    let mut j0 = 0.0;
    for k in (1..=n).rev() {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        let order = k - 1;
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * j;
        }
        if order == 0 {
            j0 = j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
        }
    }
    j0 / (j0 + norm)
}

fn hankel(x: f64) -> f64 {
    // |a_k| = prod_{j=1..k} (2j-1)^2 / (k! 8^k x^k); P = 1 - a2 + a4 - ..., Q = -a1 + a3 - ...
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a: f64 = 1.0;
    let mut k = 1usize;
    loop {
        let prev = a.abs();
        a *= ((2 * k - 1) * (2 * k - 1)) as f64 / (8.0 * k as f64 * x);
        if a.abs() > prev || a.abs() < 1e-18 {
            break;
        }
        match k % 4 {
            1 => q -= a,
            2 => p -= a,
            3 => q += a,
            _ => p += a,
        }
        k += 1;
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
