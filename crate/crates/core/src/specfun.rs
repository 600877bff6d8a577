//! Real special functions and the fBm amplitude coefficient.
//!
//! The amplitude `V_γ = (2/π) Γ(2−2γ) cos πγ` is indeterminate at γ = 3/2
//! (a pole of Γ against a zero of the cosine). Applying the reflection
//! formula once gives the pole-free form
//!
//! ```text
//! V_γ = −1 / (sin(πγ) Γ(2γ−1))
//! ```
//!
//! which is finite and positive on the whole open interval 1 < γ < 2, and
//! whose γ-derivative only involves ψ(2γ−1) with argument in (1, 3).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance kept from the endpoints γ = 1 and γ = 2, where `V_γ` diverges.
pub const GAMMA_EPS: f64 = 1e-6;

/// Lower admissible bound for the complementary Hurst parameter.
pub const GAMMA_MIN: f64 = 1.0 + GAMMA_EPS;

/// Upper admissible bound for the complementary Hurst parameter.
pub const GAMMA_MAX: f64 = 2.0 - GAMMA_EPS;

/// Noise parameter bundle: complementary Hurst parameter γ = 1 + H = 3 − δ.
///
/// Only γ is stored; H and δ are derived. For γ in [1, 2] both `γ − 1` and
/// `3 − γ` are exact in binary floating point, so the three views agree
/// bit-for-bit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HurstPoint {
    gamma: f64,
}

impl HurstPoint {
    /// Builds a point from γ. Values outside `[GAMMA_MIN, GAMMA_MAX]` are
    /// rejected rather than clamped.
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && (GAMMA_MIN..=GAMMA_MAX).contains(&gamma) {
            Ok(Self { gamma })
        } else {
            Err(Error::InvalidHurst(gamma))
        }
    }

    pub fn from_hurst(hurst: f64) -> Result<Self> {
        Self::new(hurst + 1.0)
    }

    pub fn from_fractal_dim(fractal_dim: f64) -> Result<Self> {
        Self::new(3.0 - fractal_dim)
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Hurst exponent H = γ − 1.
    #[inline]
    pub fn hurst(&self) -> f64 {
        self.gamma - 1.0
    }

    /// Fractal dimension of the trajectories, δ = 3 − γ.
    #[inline]
    pub fn fractal_dim(&self) -> f64 {
        3.0 - self.gamma
    }
}

impl TryFrom<f64> for HurstPoint {
    type Error = Error;

    fn try_from(gamma: f64) -> Result<Self> {
        Self::new(gamma)
    }
}

impl From<HurstPoint> for f64 {
    fn from(p: HurstPoint) -> f64 {
        p.gamma
    }
}

// Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Natural logarithm of Γ(x) for x > 0.
pub fn ln_gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain {
            function: "ln_gamma",
            arg: x,
        });
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    Ok(ln_gamma_positive(x))
}

fn ln_gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1−x) = π / sin(πx), with sin(πx) > 0 on (0, ½).
        return (PI / sin_pi(x)).ln() - ln_gamma_positive(1.0 - x);
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + series.ln()
}

/// Digamma function ψ(x) = Γ′(x)/Γ(x) for x > 0.
///
/// Upward recurrence ψ(x) = ψ(x+1) − 1/x until x ≥ 10, then the asymptotic
/// Bernoulli series.
pub fn digamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain {
            function: "digamma",
            arg: x,
        });
    }
    Ok(digamma_positive(x))
}

fn digamma_positive(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // B_{2k} / (2k) for k = 1..7
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    shift + x.ln() - 0.5 * inv - tail
}

/// sin(πx) with the argument reduced before multiplying by π, so that the
/// zeros at integers are resolved to full relative precision.
pub fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// cos(πx), reduced like [`sin_pi`].
pub fn cos_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let c = (PI * r).cos();
    if (n as i64) % 2 == 0 {
        c
    } else {
        -c
    }
}

/// Noise amplitude `V_γ`, evaluated in the reflection form.
pub fn v_gamma(p: HurstPoint) -> f64 {
    let g = p.gamma();
    -1.0 / (sin_pi(g) * ln_gamma_positive(2.0 * g - 1.0).exp())
}

/// ∂V_γ/∂γ = [π cos πγ + 2 sin πγ ψ(2γ−1)] / (sin²πγ Γ(2γ−1)).
pub fn dv_gamma(p: HurstPoint) -> f64 {
    let g = p.gamma();
    let s = sin_pi(g);
    let c = cos_pi(g);
    let arg = 2.0 * g - 1.0;
    (PI * c + 2.0 * s * digamma_positive(arg)) / (s * s * ln_gamma_positive(arg).exp())
}

/// Logarithmic derivative ∂_γ ln V_γ, which stays O(1/(γ−1)) near the
/// endpoints instead of growing like V_γ itself.
pub fn dln_v_gamma(p: HurstPoint) -> f64 {
    let g = p.gamma();
    let s = sin_pi(g);
    -(PI * cos_pi(g) / s + 2.0 * digamma_positive(2.0 * g - 1.0))
}
