use nalgebra::DMatrix;
use raqmimo_core::rng::{complex_normal, trial_rng};
use raqmimo_core::stats::mean;
use raqmimo_core::Complex64;

fn gaussian(m: usize, k: usize, seed: u64, n: u64) -> DMatrix<Complex64> {
    let mut rng = trial_rng(seed, n);
    DMatrix::from_fn(m, k, |_, _| complex_normal(&mut rng))
}

#[test]
fn inverse_gram_diagonal_mean() {
    let (m, k, n) = (64, 8, 10_000u64);
    let samples: Vec<f64> = (0..n)
        .map(|t| {
            let g = gaussian(m, k, 11, t);
            let inv = (g.adjoint() * &g).try_inverse().expect("Gram is invertible");
            inv[(0, 0)].re
        })
        .collect();
    let target = 1.0 / (m - k) as f64;
    let got = mean(&samples);
    assert!((got - target).abs() < 0.02 * target, "{got} vs {target}");
}

#[test]
fn inverse_norm_mean() {
    let (m, n) = (64, 10_000u64);
    let samples: Vec<f64> = (0..n).map(|t| 1.0 / gaussian(m, 1, 12, t).norm_squared()).collect();
    let target = 1.0 / (m - 1) as f64;
    let got = mean(&samples);
    assert!((got - target).abs() < 0.02 * target, "{got} vs {target}");
}
