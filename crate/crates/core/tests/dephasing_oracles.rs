use fbn_probe::dephasing::covariance;
use fbn_probe::metrology::g_bures_gamma;
use fbn_probe::specfun::v_gamma;
use fbn_probe::{Coupling, CouplingPower, DephasingFamily, HurstPoint, QubitState};
use proptest::prelude::*;

fn hp(g: f64) -> HurstPoint {
    HurstPoint::new(g).unwrap()
}

fn family(g: f64, l: f64, power: CouplingPower) -> DephasingFamily {
    DephasingFamily::probe(hp(g), Coupling::new(l).unwrap(), power)
}

/// Var φ(t) = λ^q ∫₀ᵗ∫₀ᵗ K(s, u) ds du by the 2-D midpoint rule.
fn beta_by_quadrature(fam: &DephasingFamily, t: f64, n: usize) -> f64 {
    let h = t / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let s = (i as f64 + 0.5) * h;
        for j in 0..n {
            let u = (j as f64 + 0.5) * h;
            sum += covariance(fam.hurst, s, u);
        }
    }
    fam.power.scale(fam.coupling) * sum * h * h
}

#[test]
fn beta_matches_double_integral_of_covariance() {
    for power in [CouplingPower::Linear, CouplingPower::Quadratic] {
        for g in [1.1, 1.3, 1.5, 1.7, 1.9] {
            let fam = family(g, 0.7, power);
            for t in [0.3, 1.0, 2.5] {
                let quad = beta_by_quadrature(&fam, t, 400);
                let exact = fam.beta(t);
                // The |s−u|^{2H} kink on the diagonal limits the rule to
                // about h^{1+2H} accuracy.
                let rel = (quad - exact).abs() / exact;
                assert!(rel < 2e-3, "g = {g}, t = {t}: {quad} vs {exact}");
            }
        }
    }
}

#[test]
fn brownian_covariance_is_min() {
    let p = hp(1.5);
    for (t, s) in [(0.3, 0.7), (2.0, 1.0), (5.0, 5.0)] {
        assert!((covariance(p, t, s) - f64::min(t, s)).abs() < 1e-14);
    }
}

#[test]
fn plus_state_visibility_is_x_population() {
    let fam = family(1.35, 2.0, CouplingPower::Linear);
    for t in [0.01, 0.5, 1.0, 3.0] {
        let x = fam.evolve(t).bloch()[0];
        assert!((0.5 * (1.0 + x) - fam.visibility(t)).abs() < 1e-15);
    }
}

#[test]
fn dephasing_preserves_populations() {
    let st = QubitState::pure(0.7, 1.1);
    let fam = DephasingFamily::new(
        hp(1.6),
        Coupling::new(1.0).unwrap(),
        st,
        CouplingPower::Linear,
    );
    let later = fam.evolve(2.0);
    assert_eq!(later.bloch()[2], st.bloch()[2]);
    assert!(later.radius() < st.radius());
}

proptest! {
    #[test]
    fn covariance_diagonal_is_variance(g in 1.01f64..1.99, t in 0.01f64..10.0) {
        let p = hp(g);
        let want = v_gamma(p) * t.powf(2.0 * (g - 1.0));
        prop_assert!((covariance(p, t, t) - want).abs() <= 1e-13 * want);
    }

    #[test]
    fn beta_self_similarity(g in 1.01f64..1.99, l in 1e-3f64..1e3, t in 1e-2f64..1e2, c in 0.1f64..10.0) {
        let fam = family(g, l, CouplingPower::Linear);
        let scaled = fam.beta(c * t);
        let want = c.powf(2.0 * g) * fam.beta(t);
        prop_assert!((scaled - want).abs() <= 1e-12 * want);
        // Rescaling λ by c^{−2γ} compensates the time rescaling exactly.
        let other = fam.with_coupling(Coupling::new(l * c.powf(-2.0 * g)).unwrap());
        prop_assert!((other.beta(c * t) - fam.beta(t)).abs() <= 1e-12 * fam.beta(t));
    }

    #[test]
    fn metric_is_invariant_along_beta_level_sets(g in 1.05f64..1.95, l in 1e-2f64..1e2, beta in 1e-2f64..5.0, c in 0.5f64..2.0) {
        // Along a level set of β the lever ∂ln β/∂γ shifts by 2 ln c while
        // √g_B / |lever| stays fixed.
        let fam = family(g, l, CouplingPower::Quadratic);
        let t = fam.time_for_beta(beta);
        let moved = fam.with_coupling(Coupling::new(l * c.powf(-g)).unwrap());
        let t2 = c * t;
        prop_assert!((moved.beta(t2) - beta).abs() <= 1e-12 * beta);
        let shift = 2.0 * c.ln();
        let a = g_bures_gamma(&fam, t);
        let b = g_bures_gamma(&moved, t2);
        let lever = |f: &DephasingFamily, t: f64| f.dbeta_dgamma(t) / f.beta(t);
        prop_assert!((lever(&moved, t2) - lever(&fam, t) - shift).abs() <= 1e-10 * (1.0 + lever(&fam, t).abs()));
        prop_assert!((a.sqrt() / lever(&fam, t).abs() - b.sqrt() / lever(&moved, t2).abs()).abs()
            <= 1e-10 * a.sqrt() / lever(&fam, t).abs());
    }

    #[test]
    fn dbeta_matches_finite_difference(g in 1.02f64..1.98, l in 1e-2f64..1e2, t in 1e-2f64..1e2) {
        let fam = family(g, l, CouplingPower::Linear);
        let h = 1e-5;
        let b = |x: f64| fam.with_hurst(hp(x)).beta(t);
        let fd = (b(g - 2.0 * h) - 8.0 * b(g - h) + 8.0 * b(g + h) - b(g + 2.0 * h)) / (12.0 * h);
        let got = fam.dbeta_dgamma(t);
        prop_assert!((got - fd).abs() <= 1e-6 * got.abs().max(fam.beta(t)));
    }

    #[test]
    fn visibility_stays_in_half_unit_interval(g in 1.001f64..1.999, l in 1e-3f64..1e3, t in 1e-6f64..1e6) {
        let fam = family(g, l, CouplingPower::Linear);
        let p = fam.visibility(t);
        prop_assert!((0.5..=1.0).contains(&p));
        prop_assert!((p + fam.complement_visibility(t) - 1.0).abs() < 1e-15);
    }
}
