//! fBm covariance, the dephasing exponent β(t), and the evolved qubit family.
//!
//! Under `H_I = λ σ_z B_γ(t)` the qubit picks up the random phase
//! φ(t) = λ ∫₀ᵗ B_γ(s) ds. Averaging over the Gaussian process gives a pure
//! dephasing channel: the transverse Bloch components shrink by e^{−2β(t)}
//! and r_z is untouched, with
//!
//! ```text
//! β(t) = λ^q t^{2γ} V_γ / (2γ),   p_γ(t, λ) = ½ (1 + e^{−2β(t)}).
//! ```
//!
//! The exponent `q` on λ is a family parameter, see [`CouplingPower`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{dln_v_gamma, v_gamma, HurstPoint};

/// Covariance of fBm, `K(t,s) = ½ V_γ (|t|^{2H} + |s|^{2H} − |t−s|^{2H})`.
pub fn covariance(p: HurstPoint, t: f64, s: f64) -> f64 {
    let two_h = 2.0 * p.hurst();
    let pow = |x: f64| {
        let x = x.abs();
        if x == 0.0 {
            0.0
        } else {
            x.powf(two_h)
        }
    };
    0.5 * v_gamma(p) * (pow(t) + pow(s) - pow(t - s))
}

/// System–environment coupling λ > 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Coupling(f64);

impl Coupling {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda > 0.0 {
            Ok(Self(lambda))
        } else {
            Err(Error::InvalidCoupling(lambda))
        }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Coupling {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Coupling> for f64 {
    fn from(c: Coupling) -> f64 {
        c.0
    }
}

/// Power of λ entering β(t).
///
/// With φ = λ∫B the phase variance is λ²∫∫K, while the customary closed
/// form for β is linear in λ. Both conventions are supported; `Linear` is
/// the default, and Monte Carlo paths use the matching coupling λ^{q/2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum CouplingPower {
    #[default]
    Linear,
    Quadratic,
}

impl CouplingPower {
    pub fn exponent(self) -> i32 {
        match self {
            CouplingPower::Linear => 1,
            CouplingPower::Quadratic => 2,
        }
    }

    /// λ^q, the prefactor of ∫∫K in β.
    pub fn scale(self, c: Coupling) -> f64 {
        c.value().powi(self.exponent())
    }

    /// Coupling to apply to a sampled path integral so that the phase
    /// variance equals β: λ^{q/2}.
    pub fn path_coupling(self, c: Coupling) -> f64 {
        match self {
            CouplingPower::Linear => c.value().sqrt(),
            CouplingPower::Quadratic => c.value(),
        }
    }
}

impl TryFrom<u8> for CouplingPower {
    type Error = Error;

    fn try_from(q: u8) -> Result<Self> {
        match q {
            1 => Ok(CouplingPower::Linear),
            2 => Ok(CouplingPower::Quadratic),
            _ => Err(Error::InvalidArgument(format!(
                "coupling power must be 1 or 2, got {q}"
            ))),
        }
    }
}

impl From<CouplingPower> for u8 {
    fn from(q: CouplingPower) -> u8 {
        q.exponent() as u8
    }
}

/// Slack on |r| ≤ 1 for rounding.
pub const BLOCH_NORM_SLACK: f64 = 1e-12;
const PURITY_TOL: f64 = 1e-9;

/// Qubit density operator ρ = ½(I + r·σ) in Bloch form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    bloch: [f64; 3],
}

impl QubitState {
    pub fn new(bloch: [f64; 3]) -> Result<Self> {
        let n = norm(bloch);
        if bloch.iter().all(|c| c.is_finite()) && n <= 1.0 + BLOCH_NORM_SLACK {
            Ok(Self { bloch })
        } else {
            Err(Error::InvalidState(bloch))
        }
    }

    /// Pure state cos(θ/2)|0⟩ + e^{iα} sin(θ/2)|1⟩.
    pub fn pure(theta: f64, alpha: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sa, ca) = alpha.sin_cos();
        Self {
            bloch: [st * ca, st * sa, ct],
        }
    }

    /// (|0⟩ + |1⟩)/√2, the optimal probe preparation.
    pub fn plus() -> Self {
        Self {
            bloch: [1.0, 0.0, 0.0],
        }
    }

    pub fn maximally_mixed() -> Self {
        Self { bloch: [0.0; 3] }
    }

    #[inline]
    pub fn bloch(&self) -> [f64; 3] {
        self.bloch
    }

    pub fn radius(&self) -> f64 {
        norm(self.bloch)
    }

    pub fn is_pure(&self) -> bool {
        (self.radius() - 1.0).abs() <= PURITY_TOL
    }

    /// Tr ρ² = ½(1 + |r|²).
    pub fn purity(&self) -> f64 {
        0.5 * (1.0 + dot(self.bloch, self.bloch))
    }

    /// Matrix elements (ρ₀₀, ρ₁₁, Re ρ₀₁, Im ρ₀₁).
    pub fn matrix_elements(&self) -> (f64, f64, f64, f64) {
        let [x, y, z] = self.bloch;
        (0.5 * (1.0 + z), 0.5 * (1.0 - z), 0.5 * x, -0.5 * y)
    }
}

/// Spectral decomposition of a qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem {
    /// Eigenvalues in descending order.
    pub values: [f64; 2],
    /// Bloch directions of the eigenprojectors, matching `values`.
    pub axes: [[f64; 3]; 2],
}

/// Eigenvalues (1 ± |r|)/2 with eigenvectors ±r̂. Near the maximally mixed
/// state the z basis is returned.
pub fn state_eigensystem(st: &QubitState) -> Eigensystem {
    let r = st.radius();
    if r < 1e-14 {
        return Eigensystem {
            values: [0.5, 0.5],
            axes: [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]],
        };
    }
    let [x, y, z] = st.bloch;
    let u = [x / r, y / r, z / r];
    Eigensystem {
        values: [0.5 * (1.0 + r), 0.5 * (1.0 - r)],
        axes: [u, [-u[0], -u[1], -u[2]]],
    }
}

/// State family ρ_γ(t) for fixed initial state and coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DephasingFamily {
    pub hurst: HurstPoint,
    pub coupling: Coupling,
    pub initial: QubitState,
    pub power: CouplingPower,
}

impl DephasingFamily {
    pub fn new(
        hurst: HurstPoint,
        coupling: Coupling,
        initial: QubitState,
        power: CouplingPower,
    ) -> Self {
        Self {
            hurst,
            coupling,
            initial,
            power,
        }
    }

    /// Probe prepared in |+⟩.
    pub fn probe(hurst: HurstPoint, coupling: Coupling, power: CouplingPower) -> Self {
        Self::new(hurst, coupling, QubitState::plus(), power)
    }

    /// Same family with a different γ.
    pub fn with_hurst(&self, hurst: HurstPoint) -> Self {
        Self { hurst, ..*self }
    }

    pub fn with_coupling(&self, coupling: Coupling) -> Self {
        Self { coupling, ..*self }
    }

    /// λ^q V_γ / (2γ), so that β(t) = a t^{2γ}.
    pub fn beta_prefactor(&self) -> f64 {
        let g = self.hurst.gamma();
        self.power.scale(self.coupling) * v_gamma(self.hurst) / (2.0 * g)
    }

    /// Dephasing exponent β(t) = λ^q t^{2γ} V_γ / (2γ).
    pub fn beta(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.beta_prefactor() * t.powf(2.0 * self.hurst.gamma())
    }

    /// ∂β/∂γ = λ^q t^{2γ}/(2γ²) [γ ∂V_γ + (2γ ln t − 1) V_γ],
    /// evaluated as β (2 ln t + ∂ ln V_γ − 1/γ).
    pub fn dbeta_dgamma(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let g = self.hurst.gamma();
        self.beta(t) * (2.0 * t.ln() + dln_v_gamma(self.hurst) - 1.0 / g)
    }

    /// Time at which β reaches `beta`; inverse of [`Self::beta`].
    pub fn time_for_beta(&self, beta: f64) -> f64 {
        (beta / self.beta_prefactor()).powf(0.5 / self.hurst.gamma())
    }

    /// Time at which ∂β/∂γ changes sign: ln t = −(∂ ln V_γ − 1/γ)/2.
    pub fn insensitive_time(&self) -> f64 {
        let g = self.hurst.gamma();
        (-0.5 * (dln_v_gamma(self.hurst) - 1.0 / g)).exp()
    }

    /// Transverse contraction factor e^{−2β(t)}.
    pub fn coherence(&self, t: f64) -> f64 {
        (-2.0 * self.beta(t)).exp()
    }

    /// Visibility p_γ(t, λ) = E[cos²φ] = ½(1 + e^{−2β}).
    pub fn visibility(&self, t: f64) -> f64 {
        0.5 * (1.0 + self.coherence(t))
    }

    /// 1 − p = ½(1 − e^{−2β}), without cancellation at small β.
    pub fn complement_visibility(&self, t: f64) -> f64 {
        -0.5 * (-2.0 * self.beta(t)).exp_m1()
    }

    /// ∂p/∂γ = −e^{−2β} ∂β/∂γ.
    pub fn dvisibility_dgamma(&self, t: f64) -> f64 {
        -self.coherence(t) * self.dbeta_dgamma(t)
    }

    /// ρ_γ(t) = p ρ₀ + (1−p) σ_z ρ₀ σ_z.
    pub fn evolve(&self, t: f64) -> QubitState {
        let c = self.coherence(t);
        let [x, y, z] = self.initial.bloch;
        QubitState {
            bloch: [c * x, c * y, z],
        }
    }

    /// ∂r/∂γ of the evolved Bloch vector.
    pub fn dbloch_dgamma(&self, t: f64) -> [f64; 3] {
        let k = -2.0 * self.dbeta_dgamma(t) * self.coherence(t);
        let [x, y, _] = self.initial.bloch;
        [k * x, k * y, 0.0]
    }
}

#[inline]
pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}
