//! Figures of merit for estimating and discriminating γ with the probe.
//!
//! For a qubit ρ = ½(I + r·σ) moving along a curve r(γ), the spectral
//! Bures and quantum-Chernoff metrics reduce to Bloch-vector expressions.
//! Splitting ∂r into its radial part (r̂·∂r) and transverse part ∂r⊥:
//!
//! ```text
//! g_B   = ¼ [ |∂r⊥|² + (r̂·∂r)²/(1−|r|²) ]
//! g_QCB = ⅛ (r̂·∂r)²/(1−|r|²) + ¼ |∂r⊥|² / (1 + √(1−|r|²))
//! ```
//!
//! The dephasing family started in |+⟩ has γ-independent eigenvectors, so
//! only the radial terms survive and g_QCB = ½ g_B. In that case both
//! metrics are evaluated from the eigenvalues (p, 1−p) directly, which keeps
//! full relative precision when β is tiny.

use serde::Serialize;

use crate::dephasing::{dot, norm, Coupling, CouplingPower, DephasingFamily, QubitState};
use crate::error::{Error, Result};
use crate::search::golden_section_min;
use crate::specfun::HurstPoint;

/// Tolerance on s in the Chernoff minimization.
pub const CHERNOFF_S_TOL: f64 = 1e-10;

const PURE_STATE_TOL: f64 = 1e-12;

/// Bures metric of a qubit family at state `st` with tangent `d_st` = ∂r.
pub fn bures_metric_bloch(st: &QubitState, d_st: [f64; 3]) -> Result<f64> {
    let r = st.bloch();
    let r2 = dot(r, r);
    let d2 = dot(d_st, d_st);
    let radial = dot(r, d_st);
    let mixedness = 1.0 - r2;
    if mixedness <= PURE_STATE_TOL {
        if radial.abs() > 1e-9 * d2.sqrt().max(1.0) {
            return Err(Error::SingularMetric(radial));
        }
        return Ok(0.25 * d2);
    }
    Ok(0.25 * (d2 + radial * radial / mixedness))
}

/// Quantum-Chernoff metric of a qubit family at `st` with tangent `d_st`.
pub fn qcb_metric_bloch(st: &QubitState, d_st: [f64; 3]) -> Result<f64> {
    let r = st.bloch();
    let rn = norm(r);
    let mixedness = (1.0 - rn * rn).max(0.0);
    let (radial, transverse2) = if rn < 1e-14 {
        (0.0, dot(d_st, d_st))
    } else {
        let rad = dot(r, d_st) / rn;
        (rad, (dot(d_st, d_st) - rad * rad).max(0.0))
    };
    let off = 0.25 * transverse2 / (1.0 + mixedness.sqrt());
    if mixedness <= PURE_STATE_TOL {
        if radial.abs() > 1e-9 * dot(d_st, d_st).sqrt().max(1.0) {
            return Err(Error::SingularMetric(radial));
        }
        return Ok(off);
    }
    Ok(0.125 * radial * radial / mixedness + off)
}

/// Bures metric g_B(γ) = ¼ (∂_γ p)² / (p (1−p)) of the |+⟩ dephasing family.
pub fn g_bures_gamma(fam: &DephasingFamily, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let dp = fam.dvisibility_dgamma(t);
    if dp == 0.0 {
        return 0.0;
    }
    let p = fam.visibility(t);
    let q = fam.complement_visibility(t);
    0.25 * dp * dp / (p * q)
}

/// Quantum Fisher information G = 4 g_B.
pub fn qfi_gamma(fam: &DephasingFamily, t: f64) -> f64 {
    4.0 * g_bures_gamma(fam, t)
}

/// QCB metric of the |+⟩ family from the eigenvalue terms
/// ½ Σ_n (∂ρ_n)² / (2√ρ_n)².
pub fn g_qcb_gamma(fam: &DephasingFamily, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let dp = fam.dvisibility_dgamma(t);
    if dp == 0.0 {
        return 0.0;
    }
    let p = fam.visibility(t);
    let q = fam.complement_visibility(t);
    0.5 * (dp * dp / (4.0 * p) + dp * dp / (4.0 * q))
}

/// Classical Fisher information of an x-basis measurement, whose outcome is
/// Bernoulli(p_γ): (∂p)² / (p(1−p)).
pub fn x_basis_fisher(fam: &DephasingFamily, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let dp = fam.dvisibility_dgamma(t);
    if dp == 0.0 {
        return 0.0;
    }
    let p = fam.visibility(t);
    let q = fam.complement_visibility(t);
    dp * dp / p / q
}

/// Uhlmann fidelity for qubits:
/// F = ½ (1 + r₁·r₂ + √((1−|r₁|²)(1−|r₂|²))).
pub fn fidelity(a: &QubitState, b: &QubitState) -> f64 {
    let ra = a.bloch();
    let rb = b.bloch();
    let ma = (1.0 - dot(ra, ra)).max(0.0);
    let mb = (1.0 - dot(rb, rb)).max(0.0);
    (0.5 * (1.0 + dot(ra, rb) + (ma * mb).sqrt())).clamp(0.0, 1.0)
}

/// Squared Bures distance 2(1 − √F).
pub fn bures_distance_sq(a: &QubitState, b: &QubitState) -> f64 {
    2.0 * (1.0 - fidelity(a, b).sqrt())
}

/// Eigenvalues of the Hermitian matrix [[a, b], [b*, d]], descending.
fn hermitian_eigenvalues(a: f64, d: f64, b_re: f64, b_im: f64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b_re * b_re + b_im * b_im).sqrt();
    [mean + half_gap, mean - half_gap]
}

/// Helstrom error ½(1 − Tr|Λ|), Λ = ½(ρ₂ − ρ₁), for equal priors.
pub fn helstrom_pe_general(rho1: &QubitState, rho2: &QubitState) -> f64 {
    let (a1, d1, re1, im1) = rho1.matrix_elements();
    let (a2, d2, re2, im2) = rho2.matrix_elements();
    let ev = hermitian_eigenvalues(a2 - a1, d2 - d1, re2 - re1, im2 - im1);
    let trace_norm = ev[0].abs() + ev[1].abs();
    0.5 * (1.0 - 0.5 * trace_norm)
}

/// Binary discrimination problem between two values of γ, equal priors,
/// probe prepared in |+⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscriminationPair {
    pub first: HurstPoint,
    pub second: HurstPoint,
    pub coupling: Coupling,
    pub power: CouplingPower,
}

impl DiscriminationPair {
    pub fn new(
        first: HurstPoint,
        second: HurstPoint,
        coupling: Coupling,
        power: CouplingPower,
    ) -> Self {
        Self {
            first,
            second,
            coupling,
            power,
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            first: self.second,
            second: self.first,
            ..*self
        }
    }

    pub fn families(&self) -> (DephasingFamily, DephasingFamily) {
        (
            DephasingFamily::probe(self.first, self.coupling, self.power),
            DephasingFamily::probe(self.second, self.coupling, self.power),
        )
    }

    pub fn is_degenerate(&self) -> bool {
        self.first == self.second
    }
}

/// Helstrom error for the pair at time t:
/// ½(1 − ½|e^{−2β₁} − e^{−2β₂}|).
pub fn helstrom_pe(pair: &DiscriminationPair, t: f64) -> f64 {
    let (f1, f2) = pair.families();
    0.5 * (1.0 - 0.5 * (f1.coherence(t) - f2.coherence(t)).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChernoffResult {
    pub q: f64,
    pub s_star: f64,
}

/// Chernoff objective Tr[ρ₁^s ρ₂^{1−s}] for commuting states with spectra
/// (p₁, 1−p₁) and (p₂, 1−p₂).
pub fn chernoff_objective(p1: f64, q1: f64, p2: f64, q2: f64, s: f64) -> f64 {
    p1.powf(s) * p2.powf(1.0 - s) + q1.powf(s) * q2.powf(1.0 - s)
}

/// Objective minus one, written as p₂ expm1(s ln(p₁/p₂)) + q₂ expm1(s ln(q₁/q₂))
/// so that the near-identity regime keeps its relative precision.
fn chernoff_excess(p2: f64, ln_p: f64, q2: f64, ln_q: f64, s: f64) -> f64 {
    p2 * (s * ln_p).exp_m1() + q2 * (s * ln_q).exp_m1()
}

/// Quantum Chernoff quantity Q = inf_s Tr[ρ₁^s ρ₂^{1−s}] and its minimizer.
///
/// The objective is a sum of exponentials in s, hence convex, and equals 1
/// at both ends; golden-section search finds the interior minimum.
pub fn chernoff_q(pair: &DiscriminationPair, t: f64) -> ChernoffResult {
    let (f1, f2) = pair.families();
    let p1 = f1.visibility(t);
    let q1 = f1.complement_visibility(t);
    let p2 = f2.visibility(t);
    let q2 = f2.complement_visibility(t);
    if p1 == p2 && q1 == q2 {
        return ChernoffResult {
            q: 1.0,
            s_star: 0.5,
        };
    }
    if q1 == 0.0 || q2 == 0.0 {
        let m = golden_section_min(
            |s| chernoff_objective(p1, q1, p2, q2, s),
            0.0,
            1.0,
            CHERNOFF_S_TOL,
        );
        return ChernoffResult {
            q: m.value.min(1.0),
            s_star: m.x,
        };
    }
    let ln_p = (p1 / p2).ln();
    let ln_q = (q1 / q2).ln();
    let m = golden_section_min(
        |s| chernoff_excess(p2, ln_p, q2, ln_q, s),
        0.0,
        1.0,
        CHERNOFF_S_TOL,
    );
    ChernoffResult {
        q: (1.0 + m.value).min(1.0),
        s_star: m.x,
    }
}

/// Upper bound ½ Qⁿ on the n-copy error probability.
pub fn multicopy_bound(q: f64, n: u32) -> f64 {
    assert!(
        q > 0.0 && q <= 1.0,
        "Chernoff quantity must lie in (0, 1], got {q}"
    );
    assert!(n >= 1, "at least one copy is required");
    0.5 * q.powi(n as i32)
}

/// One evaluation of the estimation metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricSample {
    pub gamma: f64,
    pub lambda: f64,
    pub t: f64,
    pub g_bures: f64,
    pub qfi: f64,
    pub g_qcb: f64,
}

impl MetricSample {
    pub fn evaluate(fam: &DephasingFamily, t: f64) -> Self {
        let g_bures = g_bures_gamma(fam, t);
        Self {
            gamma: fam.hurst.gamma(),
            lambda: fam.coupling.value(),
            t,
            g_bures,
            qfi: 4.0 * g_bures,
            g_qcb: g_qcb_gamma(fam, t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn hp(g: f64) -> HurstPoint {
        HurstPoint::new(g).unwrap()
    }

    fn family(g: f64, lambda: f64) -> DephasingFamily {
        DephasingFamily::probe(hp(g), Coupling::new(lambda).unwrap(), CouplingPower::Linear)
    }

    fn pair(g1: f64, g2: f64, lambda: f64) -> DiscriminationPair {
        DiscriminationPair::new(
            hp(g1),
            hp(g2),
            Coupling::new(lambda).unwrap(),
            CouplingPower::Linear,
        )
    }

    #[test]
    fn bloch_metric_reduces_to_visibility_form() {
        for (g, l, t) in [(1.5, 1.0, 1.0), (1.2, 0.1, 3.0), (1.8, 30.0, 0.2)] {
            let f = family(g, l);
            let via_bloch = bures_metric_bloch(&f.evolve(t), f.dbloch_dgamma(t)).unwrap();
            let via_p = g_bures_gamma(&f, t);
            assert!(
                (via_bloch - via_p).abs() <= 1e-10 * via_p,
                "{via_bloch} {via_p}"
            );
        }
    }

    #[test]
    fn bloch_metric_trivial_cases() {
        let st = QubitState::new([0.3, -0.2, 0.5]).unwrap();
        assert_eq!(bures_metric_bloch(&st, [0.0; 3]).unwrap(), 0.0);
        let mm = QubitState::maximally_mixed();
        let g = bures_metric_bloch(&mm, [0.2, -0.4, 1.0]).unwrap();
        assert!((g - 0.25 * (0.04 + 0.16 + 1.0)).abs() < 1e-15);
        let q = qcb_metric_bloch(&mm, [0.2, -0.4, 1.0]).unwrap();
        assert!((q - 0.5 * g).abs() < 1e-15);
    }

    #[test]
    fn pure_state_with_radial_derivative_is_singular() {
        let st = QubitState::plus();
        assert!(matches!(
            bures_metric_bloch(&st, [0.1, 0.0, 0.0]),
            Err(Error::SingularMetric(_))
        ));
        assert!(qcb_metric_bloch(&st, [0.1, 0.0, 0.0]).is_err());
        // Tangent motion on the sphere is fine.
        let g = bures_metric_bloch(&st, [0.0, 0.7, 0.0]).unwrap();
        assert!((g - 0.25 * 0.49).abs() < 1e-15);
        let q = qcb_metric_bloch(&st, [0.0, 0.7, 0.0]).unwrap();
        assert!((q - g).abs() < 1e-15);
    }

    #[test]
    fn qcb_metric_is_bracketed_by_bures() {
        let st = QubitState::new([0.2, 0.5, -0.3]).unwrap();
        for d in [
            [1.0, 0.0, 0.0],
            [0.0, 0.3, 0.9],
            [0.2, 0.5, -0.3],
            [-0.4, 0.1, 0.2],
        ] {
            let g = bures_metric_bloch(&st, d).unwrap();
            let q = qcb_metric_bloch(&st, d).unwrap();
            assert!(q >= 0.5 * g - 1e-15 && q <= g + 1e-15);
        }
    }

    #[test]
    fn bures_endpoints() {
        let f = family(1.5, 1.0);
        assert_eq!(g_bures_gamma(&f, 0.0), 0.0);
        assert_eq!(g_qcb_gamma(&f, 0.0), 0.0);
        let t = f.time_for_beta(400.0);
        assert_eq!(g_bures_gamma(&f, t), 0.0);
    }

    #[test]
    fn fidelity_examples() {
        let a = QubitState::new([0.3, 0.1, -0.4]).unwrap();
        assert!((fidelity(&a, &a) - 1.0).abs() < 1e-15);
        let up = QubitState::pure(0.0, 0.0);
        let down = QubitState::pure(PI, 0.0);
        assert!(fidelity(&up, &down) < 1e-15);
        assert!((fidelity(&QubitState::maximally_mixed(), &up) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn helstrom_general_examples() {
        let a = QubitState::new([0.3, 0.1, -0.4]).unwrap();
        assert!((helstrom_pe_general(&a, &a) - 0.5).abs() < 1e-15);
        let up = QubitState::pure(0.0, 0.0);
        let down = QubitState::pure(PI, 0.0);
        assert!(helstrom_pe_general(&up, &down).abs() < 1e-15);
        let x = QubitState::pure(PI / 2.0, 0.0);
        let mx = QubitState::pure(PI / 2.0, PI);
        assert!(helstrom_pe_general(&x, &mx).abs() < 1e-15);
    }

    #[test]
    fn helstrom_edge_cases() {
        let p = pair(1.3, 1.7, 2.0);
        assert_eq!(helstrom_pe(&p, 0.0), 0.5);
        assert_eq!(helstrom_pe(&pair(1.4, 1.4, 2.0), 0.9), 0.5);
        assert!(helstrom_pe(&p, 0.5) >= 0.25);
    }

    #[test]
    fn chernoff_edge_cases() {
        let eq = chernoff_q(&pair(1.4, 1.4, 1.0), 0.7);
        assert_eq!(eq.q, 1.0);
        let t0 = chernoff_q(&pair(1.2, 1.8, 1.0), 0.0);
        assert_eq!(t0.q, 1.0);
        let c = chernoff_q(&pair(1.2, 1.8, 1.0), 0.7);
        assert!(c.q < 1.0 && c.q > 0.0);
        assert!((0.0..=1.0).contains(&c.s_star));
    }

    #[test]
    fn chernoff_swap_maps_s_to_complement() {
        let p = pair(1.25, 1.65, 0.4);
        for t in [0.3, 1.0, 4.0] {
            let a = chernoff_q(&p, t);
            let b = chernoff_q(&p.swapped(), t);
            assert!((a.q - b.q).abs() < 1e-14);
            // The bottom is flat to O(Δp²) when the states nearly coincide.
            assert!(
                (a.s_star - (1.0 - b.s_star)).abs() < 1e-3,
                "{} {}",
                a.s_star,
                b.s_star
            );
        }
    }

    #[test]
    fn multicopy_examples() {
        assert_eq!(multicopy_bound(1.0, 7), 0.5);
        assert_eq!(multicopy_bound(0.5, 10), 1.0 / 2048.0);
        assert!(multicopy_bound(0.9, 3) < multicopy_bound(0.9, 2));
    }

    #[test]
    #[should_panic]
    fn multicopy_rejects_zero_copies() {
        multicopy_bound(0.5, 0);
    }

    #[test]
    fn qfi_and_qcb_relations() {
        let f = family(1.37, 0.8);
        let s = MetricSample::evaluate(&f, 1.3);
        assert_eq!(s.qfi, 4.0 * s.g_bures);
        assert!((s.g_qcb - 0.5 * s.g_bures).abs() <= 1e-14 * s.g_bures);
        assert!((x_basis_fisher(&f, 1.3) - s.qfi).abs() <= 1e-13 * s.qfi);
    }
}
