//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// ln Γ(x) for x > 0 by shifting the argument past 50 with the recurrence
/// and summing the Stirling series there.
pub fn ln_gamma_stirling(x: f64) -> f64 {
    assert!(x > 0.0);
    let mut z = x;
    let mut shift = 0.0;
    while z < 50.0 {
        shift += z.ln();
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift
}

/// Γ(x) for any non-integer x, via Γ(x) = Γ(x+n)/(x(x+1)…(x+n−1)).
pub fn gamma_ref(x: f64) -> f64 {
    let mut z = x;
    let mut denom = 1.0;
    while z <= 0.0 {
        denom *= z;
        z += 1.0;
    }
    ln_gamma_stirling(z).exp() / denom
}

/// Amplitude in its defining form (2/π) Γ(2−2γ) cos πγ.
pub fn v_literal(gamma: f64) -> f64 {
    2.0 / PI * gamma_ref(2.0 - 2.0 * gamma) * (PI * gamma).cos()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}
