//! Deterministic random samples of points and motions.
//!
//! Every stream is a ChaCha8 generator seeded from a `u64`, so a seed fully
//! determines the output on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::HPoint;
use crate::group::{assemble, MotionMatrix, Sign, Sl2Matrix};
use crate::numkit::{c64, Tolerance};

pub type SampleRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// Factor heights `Im(τ ± z)` log-uniform in `[0.1, 10]`, `Re τ` and `Re z`
/// uniform in `[−5, 5]`.
pub fn sample_hpoint<R: Rng + ?Sized>(rng: &mut R) -> HPoint {
    let y_plus = log_uniform(rng, 0.1, 10.0);
    let y_minus = log_uniform(rng, 0.1, 10.0);
    let x_tau = rng.random_range(-5.0..5.0);
    let x_z = rng.random_range(-5.0..5.0);
    let tau = c64(x_tau, 0.5 * (y_plus + y_minus));
    let z = c64(x_z, 0.5 * (y_plus - y_minus));
    HPoint::new(tau, z, &Tolerance::default()).expect("sampled heights are bounded below by 0.1")
}

/// `rot(θ)·diag(a, 1/a)·[[1, n], [0, 1]]` with `θ ∈ [0, 2π)`, `log a ∈ [−1, 1]`,
/// `n ∈ [−2, 2]`.
pub fn sample_sl2<R: Rng + ?Sized>(rng: &mut R) -> Sl2Matrix {
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let a = rng.random_range(-1.0f64..1.0).exp();
    let n = rng.random_range(-2.0..2.0);
    let (s, c) = theta.sin_cos();
    // [[c, -s], [s, c]] · [[a, a n], [0, 1/a]]
    Sl2Matrix::from_entries_unchecked(c * a, c * a * n - s / a, s * a, s * a * n + c / a)
}

pub fn sample_sign<R: Rng + ?Sized>(rng: &mut R) -> Sign {
    if rng.random_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// A motion assembled from two independent SL₂ factors and a random sign.
pub fn sample_motion<R: Rng + ?Sized>(rng: &mut R) -> MotionMatrix {
    let m1 = sample_sl2(rng);
    let m2 = sample_sl2(rng);
    let eps = sample_sign(rng);
    assemble(&m1, &m2, eps)
}
