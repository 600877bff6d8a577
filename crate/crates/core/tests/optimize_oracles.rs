use fbn_probe::metrology::{chernoff_q, g_bures_gamma, helstrom_pe};
use fbn_probe::optimize::{
    log_space, maximize_gb_over_t, minimize_pe_over_t, minimize_q_over_t, optimal_gb_curve,
    sweep_fig1, sweep_fig3, sweep_fig4,
};
use fbn_probe::{
    Coupling, CouplingPower, DephasingFamily, DiscriminationPair, HurstPoint, TimeGrid,
};

fn hp(g: f64) -> HurstPoint {
    HurstPoint::new(g).unwrap()
}

fn lam(l: f64) -> Coupling {
    Coupling::new(l).unwrap()
}

/// Brute-force optimum over a dense fixed grid.
fn dense_max(f: impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    log_space(a, b, 200_001)
        .into_iter()
        .map(|t| (t, f(t)))
        .fold(
            (0.0, f64::NEG_INFINITY),
            |m, x| if x.1 > m.1 { x } else { m },
        )
}

#[test]
fn time_optimum_matches_dense_scan() {
    for g in [1.05, 1.3, 1.5, 1.8, 1.95] {
        for l in [1e-3, 0.05, 1.0, 20.0, 1e3] {
            let fam = DephasingFamily::probe(hp(g), lam(l), CouplingPower::Linear);
            let opt = maximize_gb_over_t(&fam, &TimeGrid::default()).unwrap();
            let (a, b) = (fam.time_for_beta(1e-10), fam.time_for_beta(40.0));
            let (t_dense, v_dense) = dense_max(|t| g_bures_gamma(&fam, t), a, b);
            assert!(opt.value >= v_dense * (1.0 - 1e-9), "g = {g}, l = {l}");
            assert!(
                (opt.t_star / t_dense - 1.0).abs() < 1e-3,
                "g = {g}, l = {l}: {} vs {t_dense}",
                opt.t_star
            );
        }
    }
}

#[test]
fn discrimination_optima_match_dense_scan() {
    for (g1, g2) in [(1.2, 1.4), (1.4, 1.6), (1.1, 1.9), (1.55, 1.56)] {
        for l in [1e-2, 1.0, 1e2] {
            let pair = DiscriminationPair::new(hp(g1), hp(g2), lam(l), CouplingPower::Quadratic);
            let (f1, f2) = pair.families();
            let a = f1.time_for_beta(1e-10).min(f2.time_for_beta(1e-10));
            let b = f1.time_for_beta(40.0).max(f2.time_for_beta(40.0));
            let pe = minimize_pe_over_t(&pair, &TimeGrid::default()).unwrap();
            let (_, best) = dense_max(|t| -helstrom_pe(&pair, t), a, b);
            assert!(pe.value <= -best + 1e-12);
            let q = minimize_q_over_t(&pair, &TimeGrid::default()).unwrap();
            let (_, best) = dense_max(|t| -chernoff_q(&pair, t).q, a, b);
            assert!(q.value <= -best + 1e-12);
            assert!(pe.value <= 0.5 * q.value + 1e-15);
        }
    }
}

#[test]
fn bures_optimum_has_two_lobes_around_the_insensitive_time() {
    let fam = DephasingFamily::probe(hp(1.5), lam(0.08), CouplingPower::Linear);
    let opt = maximize_gb_over_t(&fam, &TimeGrid::default()).unwrap();
    let t0 = fam.insensitive_time();
    assert!(opt.local_optima.len() >= 2);
    assert!(opt.local_optima.iter().any(|o| o.0 < t0));
    assert!(opt.local_optima.iter().any(|o| o.0 > t0));
}

#[test]
fn sweep_rows_follow_grid_order() {
    let gammas = [1.2, 1.5, 1.8];
    let times = [0.1, 1.0, 10.0];
    let lambdas = [0.01, 1.0];
    let rows = sweep_fig1(&gammas, &times, &lambdas, CouplingPower::Linear).unwrap();
    assert_eq!(rows.len(), 18);
    let mut k = 0;
    for &l in &lambdas {
        for &g in &gammas {
            for &t in &times {
                assert_eq!((rows[k].lambda, rows[k].gamma, rows[k].t), (l, g, t));
                k += 1;
            }
        }
    }
    assert_eq!(
        rows,
        sweep_fig1(&gammas, &times, &lambdas, CouplingPower::Linear).unwrap()
    );
}

#[test]
fn helstrom_and_chernoff_sweeps_are_consistent() {
    let grid = TimeGrid::default();
    let h = sweep_fig3(
        &[1.2, 1.4],
        &[1.4, 1.6],
        &[1.0],
        CouplingPower::Linear,
        &grid,
    )
    .unwrap();
    assert_eq!(h.len(), 4);
    let same = h
        .iter()
        .find(|r| r.gamma1 == 1.4 && r.gamma2 == 1.4)
        .unwrap();
    assert_eq!(same.pe_min, 0.5);
    let c = sweep_fig4(
        &[(1.2, 1.4), (1.4, 1.6)],
        &[0.1, 1.0],
        CouplingPower::Linear,
        &grid,
    )
    .unwrap();
    for row in &c {
        let pe = h
            .iter()
            .find(|r| r.lambda == row.lambda && r.gamma1 == row.gamma1 && r.gamma2 == row.gamma2)
            .map(|r| r.pe_min);
        if let Some(pe) = pe {
            assert!(pe <= 0.5 * row.q_min + 1e-15);
        }
        assert!(row.s_star > 0.0 && row.s_star < 1.0);
    }
}

#[test]
fn optimal_curve_is_deterministic() {
    let lambdas = log_space(1e-2, 1e2, 9);
    let a = optimal_gb_curve(
        1.3,
        &lambdas,
        CouplingPower::Quadratic,
        &TimeGrid::default(),
    )
    .unwrap();
    let b = optimal_gb_curve(
        1.3,
        &lambdas,
        CouplingPower::Quadratic,
        &TimeGrid::default(),
    )
    .unwrap();
    assert_eq!(a, b);
    assert!(a.iter().zip(&lambdas).all(|(r, &l)| r.lambda == l));
}
