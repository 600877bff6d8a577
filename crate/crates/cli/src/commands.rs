use fbn_probe::metrology::multicopy_bound;
use fbn_probe::montecarlo::{empirical_visibility, mle_gamma, simulate_measurements};
use fbn_probe::optimize::{
    lin_space, log_space, maximize_gb_over_t, sweep_fig1, sweep_fig2, sweep_fig3, sweep_fig4,
    threshold_lambda, BetaWindow,
};
use fbn_probe::{Coupling, DephasingFamily, EstimationRun, HurstPoint, PathSpec, TimeGrid};

use crate::args::{
    coupling_power, ChernoffArgs, Command, EstimateArgs, HelstromArgs, McValidateArgs, QfiMapArgs,
    QfiOptArgs, ThresholdArgs,
};
use crate::error::{CliError, Result};
use crate::table::{Cell, Table};

/// Oracle checks pass within this many standard errors.
pub const ORACLE_SIGMAS: f64 = 4.0;

pub struct Report {
    pub table: Table,
    /// Set when an oracle check ran and failed; the table is still written.
    pub failure: Option<String>,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Self {
            table,
            failure: None,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn gamma_range(min: f64, max: f64, resolution: usize) -> Result<Vec<f64>> {
    HurstPoint::new(min)?;
    HurstPoint::new(max)?;
    if min >= max {
        return Err(usage(format!("empty γ range [{min}, {max}]")));
    }
    if resolution < 2 {
        return Err(usage("resolution must be at least 2"));
    }
    Ok(lin_space(min, max, resolution))
}

fn lambda_range(min: f64, max: f64, resolution: usize) -> Result<Vec<f64>> {
    Coupling::new(min)?;
    Coupling::new(max)?;
    if min >= max {
        return Err(usage(format!("empty coupling range [{min}, {max}]")));
    }
    if resolution < 2 {
        return Err(usage("resolution must be at least 2"));
    }
    Ok(log_space(min, max, resolution))
}

pub fn execute(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::QfiMap(a) => qfi_map(a).map(Report::from),
        Command::QfiOpt(a) => qfi_opt(a).map(Report::from),
        Command::Helstrom(a) => helstrom(a).map(Report::from),
        Command::Chernoff(a) => chernoff(a).map(Report::from),
        Command::Threshold(a) => threshold(a).map(Report::from),
        Command::McValidate(a) => mc_validate(a),
        Command::Estimate(a) => estimate(a).map(Report::from),
        Command::Replay(_) => unreachable!("replay is resolved before execution"),
    }
}

fn qfi_map(a: &QfiMapArgs) -> Result<Table> {
    let gammas = gamma_range(a.gamma_min, a.gamma_max, a.resolution)?;
    let coupling = Coupling::new(a.lambda)?;
    let power = coupling_power(a.q_power);
    let t_res = a.t_resolution.unwrap_or(a.resolution);
    if t_res < 2 {
        return Err(usage("time resolution must be at least 2"));
    }

    // Automatic window: union over the γ grid of the β window of each family.
    let window = BetaWindow::default();
    let (auto_lo, auto_hi) = gammas
        .iter()
        .try_fold((f64::INFINITY, 0.0f64), |(lo, hi), &g| {
            let fam = DephasingFamily::probe(HurstPoint::new(g)?, coupling, power);
            let (a, b) = window.time_range(&fam);
            Ok::<_, CliError>((lo.min(a), hi.max(b)))
        })?;
    let t_min = a.t_min.unwrap_or(auto_lo);
    let t_max = a.t_max.unwrap_or(auto_hi);
    if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) {
        return Err(usage(format!("invalid time window [{t_min}, {t_max}]")));
    }

    let rows = sweep_fig1(&gammas, &log_space(t_min, t_max, t_res), &[a.lambda], power)?;
    let mut table = Table::new(&["gamma", "t", "g_bures", "qfi"]);
    for r in rows {
        table.push(vec![
            r.gamma.into(),
            r.t.into(),
            r.g_bures.into(),
            r.qfi.into(),
        ]);
    }
    Ok(table)
}

fn qfi_opt(a: &QfiOptArgs) -> Result<Table> {
    if a.samples == 0 {
        return Err(usage("samples must be at least 1"));
    }
    lambda_range(a.lambda_min, a.lambda_max, 2)?;
    let rows = sweep_fig2(
        a.samples,
        (a.lambda_min, a.lambda_max),
        a.seed,
        coupling_power(a.q_power),
        &TimeGrid::default(),
    )?;
    let mut table = Table::new(&["gamma", "lambda", "g_star", "tau_b"]);
    for r in rows {
        table.push(vec![
            r.gamma.into(),
            r.lambda.into(),
            r.g_star.into(),
            r.tau_b.into(),
        ]);
    }
    Ok(table)
}

fn helstrom(a: &HelstromArgs) -> Result<Table> {
    let grid = || gamma_range(a.gamma_min, a.gamma_max, a.resolution);
    let g1 = if a.gamma1.is_empty() {
        grid()?
    } else {
        a.gamma1.clone()
    };
    let g2 = if a.gamma2.is_empty() {
        grid()?
    } else {
        a.gamma2.clone()
    };
    if a.lambda.is_empty() {
        return Err(usage("at least one coupling is required"));
    }
    let rows = sweep_fig3(
        &g1,
        &g2,
        &a.lambda,
        coupling_power(a.q_power),
        &TimeGrid::default(),
    )?;
    let mut table = Table::new(&["lambda", "gamma1", "gamma2", "pe_min", "t_star"]);
    for r in rows {
        table.push(vec![
            r.lambda.into(),
            r.gamma1.into(),
            r.gamma2.into(),
            r.pe_min.into(),
            r.t_star.into(),
        ]);
    }
    Ok(table)
}

fn chernoff(a: &ChernoffArgs) -> Result<Table> {
    if a.gamma1.len() != a.gamma2.len() || a.gamma1.is_empty() {
        return Err(usage(
            "--gamma1 and --gamma2 must list the same, non-zero number of values",
        ));
    }
    let pairs: Vec<(f64, f64)> = a
        .gamma1
        .iter()
        .copied()
        .zip(a.gamma2.iter().copied())
        .collect();
    if let Some((g, _)) = pairs.iter().find(|(x, y)| x == y) {
        return Err(usage(format!(
            "pair ({g}, {g}) is not a discrimination problem: the hypotheses coincide"
        )));
    }
    if a.copies == 0 {
        return Err(usage("copies must be at least 1"));
    }
    let lambdas = lambda_range(a.lambda_min, a.lambda_max, a.resolution)?;
    let rows = sweep_fig4(
        &pairs,
        &lambdas,
        coupling_power(a.q_power),
        &TimeGrid::default(),
    )?;
    let mut table = Table::new(&[
        "gamma1",
        "gamma2",
        "lambda",
        "q_min",
        "t_star",
        "s_star",
        "multicopy_bound",
    ]);
    for r in rows {
        let bound = if r.q_min > 0.0 {
            multicopy_bound(r.q_min, a.copies)
        } else {
            0.0
        };
        table.push(vec![
            r.gamma1.into(),
            r.gamma2.into(),
            r.lambda.into(),
            r.q_min.into(),
            r.t_star.into(),
            r.s_star.into(),
            bound.into(),
        ]);
    }
    Ok(table)
}

fn threshold(a: &ThresholdArgs) -> Result<Table> {
    if a.gamma.is_empty() {
        return Err(usage("at least one γ is required"));
    }
    let lambdas = lambda_range(a.lambda_min, a.lambda_max, a.resolution)?;
    let mut table = Table::new(&["gamma", "lambda_th", "g_star"]);
    for &g in &a.gamma {
        let th = threshold_lambda(
            HurstPoint::new(g)?,
            &lambdas,
            coupling_power(a.q_power),
            &TimeGrid::default(),
        )?;
        table.push(vec![g.into(), th.lambda.into(), th.g_star.into()]);
    }
    Ok(table)
}

fn mc_validate(a: &McValidateArgs) -> Result<Report> {
    let fam = DephasingFamily::probe(
        HurstPoint::new(a.gamma)?,
        Coupling::new(a.lambda)?,
        coupling_power(a.q_power),
    );
    let spec = PathSpec::new(a.steps, a.time, a.seed, a.paths)?;
    let est = empirical_visibility(&fam, &spec)?;
    let z = est.z_score();
    let z_sc = est.sin_cos_mean.abs() / est.sin_cos_std_err;
    let pass = z <= ORACLE_SIGMAS && z_sc <= ORACLE_SIGMAS;
    let mut table = Table::new(&[
        "gamma",
        "lambda",
        "t",
        "q_power",
        "paths",
        "steps",
        "analytic_p",
        "empirical_p",
        "std_err",
        "z_score",
        "coarse_p",
        "sin_cos_mean",
        "sin_cos_std_err",
        "pass",
    ]);
    table.push(vec![
        a.gamma.into(),
        a.lambda.into(),
        a.time.into(),
        u64::from(a.q_power).into(),
        a.paths.into(),
        a.steps.into(),
        est.analytic.into(),
        est.mean.into(),
        est.std_err.into(),
        z.into(),
        est.coarse_mean.unwrap_or(f64::NAN).into(),
        est.sin_cos_mean.into(),
        est.sin_cos_std_err.into(),
        Cell::Bool(pass),
    ]);
    let failure = (!pass).then(|| {
        format!(
            "empirical p = {} vs analytic {} ({z:.2} SE), E[sin cos] at {z_sc:.2} SE",
            est.mean, est.analytic
        )
    });
    Ok(Report { table, failure })
}

fn estimate(a: &EstimateArgs) -> Result<Table> {
    let fam = DephasingFamily::probe(
        HurstPoint::new(a.gamma)?,
        Coupling::new(a.lambda)?,
        coupling_power(a.q_power),
    );
    let t = match a.time {
        Some(t) => t,
        None => maximize_gb_over_t(&fam, &TimeGrid::default())?.t_star,
    };
    let run = EstimationRun::new(
        fam.hurst,
        fam.coupling,
        fam.power,
        t,
        a.shots,
        a.trials,
        a.seed,
    )?;
    let rep = mle_gamma(&simulate_measurements(&run), &run)?;
    let mut table = Table::new(&[
        "gamma",
        "lambda",
        "t",
        "shots",
        "trials",
        "mean",
        "std_err_mean",
        "variance",
        "crb",
        "efficiency",
        "boundary_fraction",
        "degenerate_trials",
    ]);
    table.push(vec![
        a.gamma.into(),
        a.lambda.into(),
        t.into(),
        a.shots.into(),
        a.trials.into(),
        rep.mean.into(),
        rep.std_err_mean.into(),
        rep.variance.into(),
        rep.cramer_rao_bound.into(),
        rep.efficiency().into(),
        rep.boundary_fraction().into(),
        rep.degenerate_trials.into(),
    ]);
    Ok(table)
}
