//! Interaction-time optimization of the figures of merit.
//!
//! Every optimizer follows the same protocol: evaluate a non-negative score
//! on a logarithmic time grid, collect every interior local maximum of the
//! sampled score, refine each one by golden-section search in ln t over the
//! two neighbouring cells, and report the best. Keeping all local maxima
//! matters here: g_B(t) has one lobe on each side of the time where
//! ∂β/∂γ = 0, and which lobe wins depends on the coupling.
//!
//! Before scanning, the grid is restricted to the window where β(t) lies in
//! [`BetaWindow`]; outside it every score is either negligible or
//! exponentially suppressed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dephasing::{Coupling, CouplingPower, DephasingFamily};
use crate::error::{Error, Result};
use crate::metrology::{chernoff_q, g_bures_gamma, helstrom_pe, DiscriminationPair, MetricSample};
use crate::search::{golden_section_max, golden_section_min};
use crate::specfun::{HurstPoint, GAMMA_MAX, GAMMA_MIN};

/// Tolerance on ln t (≈ relative tolerance on t) for local refinement.
pub const T_REL_TOL: f64 = 1e-8;

/// Tolerance on ln λ when refining the threshold coupling.
pub const LAMBDA_REL_TOL: f64 = 1e-6;

/// Scores below this on the whole grid are reported as a flat objective.
pub const FLAT_THRESHOLD: f64 = 1e-300;

/// Logarithmically spaced time grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    /// Restrict the scan to the β window of the family before scanning.
    pub auto_window: bool,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            t_min: 1e-6,
            t_max: 1e6,
            points: 4001,
            auto_window: true,
        }
    }
}

impl TimeGrid {
    pub fn new(t_min: f64, t_max: f64, points: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_min.is_finite() && t_max.is_finite() && t_max > t_min) {
            return Err(Error::InvalidArgument(format!(
                "time grid needs 0 < t_min < t_max, got [{t_min}, {t_max}]"
            )));
        }
        if points < 100 {
            return Err(Error::InvalidArgument(format!(
                "time grid needs at least 100 points, got {points}"
            )));
        }
        Ok(Self {
            t_min,
            t_max,
            points,
            auto_window: true,
        })
    }

    /// Same grid, scanned as given.
    pub fn fixed(self) -> Self {
        Self {
            auto_window: false,
            ..self
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        log_space(self.t_min, self.t_max, self.points)
    }

    /// Intersection with `[lo, hi]`, keeping the point count. Falls back to
    /// the full grid when the intersection is empty.
    fn clipped(&self, lo: f64, hi: f64) -> Self {
        let a = self.t_min.max(lo);
        let b = self.t_max.min(hi);
        if a.is_finite() && b.is_finite() && b > a * (1.0 + 1e-9) {
            Self {
                t_min: a,
                t_max: b,
                ..*self
            }
        } else {
            *self
        }
    }
}

/// Range of β(t) that the auto-window keeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaWindow {
    pub lo: f64,
    pub hi: f64,
}

impl Default for BetaWindow {
    fn default() -> Self {
        // Wide enough to contain the small-t lobe of g_B down to λ = 1e-3.
        Self { lo: 1e-8, hi: 20.0 }
    }
}

impl BetaWindow {
    pub fn time_range(&self, fam: &DephasingFamily) -> (f64, f64) {
        (fam.time_for_beta(self.lo), fam.time_for_beta(self.hi))
    }

    fn pair_time_range(&self, pair: &DiscriminationPair) -> (f64, f64) {
        let (f1, f2) = pair.families();
        let (a1, b1) = self.time_range(&f1);
        let (a2, b2) = self.time_range(&f2);
        (a1.min(a2), b1.max(b2))
    }
}

/// Outcome of a time optimization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptResult {
    /// Optimized figure of merit.
    pub value: f64,
    /// Optimal interaction time (τ_B for the Bures metric).
    pub t_star: f64,
    /// All refined local optima as (t, value), sorted by t.
    pub local_optima: Vec<(f64, f64)>,
    /// Chernoff exponent at the optimum, when applicable.
    pub s_star: Option<f64>,
}

pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let (la, lb) = (a.ln(), b.ln());
            let step = (lb - la) / (n - 1) as f64;
            (0..n)
                .map(|k| match k {
                    0 => a,
                    k if k == n - 1 => b,
                    k => (la + step * k as f64).exp(),
                })
                .collect()
        }
    }
}

pub fn lin_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    b
                } else {
                    a + (b - a) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Maximum of a non-negative score: (t*, score*, local maxima).
struct ScoreMax {
    t_star: f64,
    score: f64,
    local: Vec<(f64, f64)>,
}

fn scan_refine<F>(score: F, grid: &TimeGrid) -> Result<ScoreMax>
where
    F: Fn(f64) -> f64,
{
    let ts = grid.nodes();
    let us: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let vs: Vec<f64> = ts.iter().map(|&t| score(t)).collect();

    let (mut best_k, mut best_v) = (0, f64::NEG_INFINITY);
    for (k, &v) in vs.iter().enumerate() {
        if v > best_v {
            best_k = k;
            best_v = v;
        }
    }
    if best_v.is_nan() || best_v < FLAT_THRESHOLD {
        return Err(Error::FlatObjective(best_v.max(0.0)));
    }

    let mut local = Vec::new();
    for k in 1..vs.len() - 1 {
        if vs[k] > vs[k - 1] && vs[k] >= vs[k + 1] {
            let m = golden_section_max(|u| score(u.exp()), us[k - 1], us[k + 1], T_REL_TOL);
            // Never report less than the coarse grid already found.
            let refined = if m.value >= vs[k] {
                (m.x.exp(), m.value)
            } else {
                (ts[k], vs[k])
            };
            local.push(refined);
        }
    }

    let (t_star, score_star) =
        local.iter().copied().fold(
            (ts[best_k], best_v),
            |acc, lm| if lm.1 > acc.1 { lm } else { acc },
        );

    Ok(ScoreMax {
        t_star,
        score: score_star,
        local,
    })
}

fn gb_grid(fam: &DephasingFamily, grid: &TimeGrid) -> TimeGrid {
    if grid.auto_window {
        let (lo, hi) = BetaWindow::default().time_range(fam);
        grid.clipped(lo, hi)
    } else {
        *grid
    }
}

fn pair_grid(pair: &DiscriminationPair, grid: &TimeGrid) -> TimeGrid {
    if grid.auto_window {
        let (lo, hi) = BetaWindow::default().pair_time_range(pair);
        grid.clipped(lo, hi)
    } else {
        *grid
    }
}

/// Maximizes the Bures metric over the interaction time. `t_star` is τ_B.
pub fn maximize_gb_over_t(fam: &DephasingFamily, grid: &TimeGrid) -> Result<OptResult> {
    let g = gb_grid(fam, grid);
    let m = scan_refine(|t| g_bures_gamma(fam, t), &g)?;
    Ok(OptResult {
        value: m.score,
        t_star: m.t_star,
        local_optima: m.local,
        s_star: None,
    })
}

fn require_distinct(pair: &DiscriminationPair) -> Result<()> {
    if pair.is_degenerate() {
        Err(Error::InvalidArgument(format!(
            "discrimination needs gamma1 != gamma2, got {} twice",
            pair.first.gamma()
        )))
    } else {
        Ok(())
    }
}

/// Minimizes the Helstrom error over the interaction time.
pub fn minimize_pe_over_t(pair: &DiscriminationPair, grid: &TimeGrid) -> Result<OptResult> {
    require_distinct(pair)?;
    let g = pair_grid(pair, grid);
    let m = scan_refine(|t| 0.5 - helstrom_pe(pair, t), &g)?;
    Ok(OptResult {
        value: 0.5 - m.score,
        t_star: m.t_star,
        local_optima: m.local.into_iter().map(|(t, s)| (t, 0.5 - s)).collect(),
        s_star: None,
    })
}

/// Minimizes the quantum Chernoff quantity over s (inner) and t (outer).
pub fn minimize_q_over_t(pair: &DiscriminationPair, grid: &TimeGrid) -> Result<OptResult> {
    require_distinct(pair)?;
    let g = pair_grid(pair, grid);
    let m = scan_refine(|t| 1.0 - chernoff_q(pair, t).q, &g)?;
    let at_star = chernoff_q(pair, m.t_star);
    Ok(OptResult {
        value: at_star.q.min(1.0 - m.score),
        t_star: m.t_star,
        local_optima: m.local.into_iter().map(|(t, s)| (t, 1.0 - s)).collect(),
        s_star: Some(at_star.s_star),
    })
}

/// Threshold coupling: interior minimizer over λ of the time-optimized
/// Bures metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    pub lambda: f64,
    pub g_star: f64,
}

/// Locates λ_th(γ) on a log-spaced λ grid and refines it by golden-section
/// search in ln λ. A minimum at either end of the grid means the metric is
/// monotone over the range and no threshold exists.
pub fn threshold_lambda(
    p: HurstPoint,
    lambda_grid: &[f64],
    power: CouplingPower,
    grid: &TimeGrid,
) -> Result<Threshold> {
    if lambda_grid.len() < 3 {
        return Err(Error::InvalidArgument(
            "threshold search needs at least 3 couplings".into(),
        ));
    }
    let optimum = |lambda: f64| -> Result<f64> {
        let fam = DephasingFamily::probe(p, Coupling::new(lambda)?, power);
        Ok(maximize_gb_over_t(&fam, grid)?.value)
    };
    let values = lambda_grid
        .par_iter()
        .map(|&l| optimum(l))
        .collect::<Result<Vec<_>>>()?;
    let k = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v < values[best] { i } else { best });
    if k == 0 || k == lambda_grid.len() - 1 {
        return Err(Error::NoThreshold {
            lambda: lambda_grid[k],
        });
    }
    let m = golden_section_min(
        |u| optimum(u.exp()).unwrap_or(f64::INFINITY),
        lambda_grid[k - 1].ln(),
        lambda_grid[k + 1].ln(),
        LAMBDA_REL_TOL,
    );
    let (lambda, g_star) = if m.value <= values[k] {
        (m.x.exp(), m.value)
    } else {
        (lambda_grid[k], values[k])
    };
    Ok(Threshold { lambda, g_star })
}

/// Bures metric map over (γ, t) for each coupling, ordered λ → γ → t.
pub fn sweep_fig1(
    gammas: &[f64],
    times: &[f64],
    lambdas: &[f64],
    power: CouplingPower,
) -> Result<Vec<MetricSample>> {
    let cells: Vec<(f64, f64)> = lambdas
        .iter()
        .flat_map(|&l| gammas.iter().map(move |&g| (l, g)))
        .collect();
    let blocks = cells
        .par_iter()
        .map(|&(l, g)| {
            let fam = DephasingFamily::probe(HurstPoint::new(g)?, Coupling::new(l)?, power);
            Ok(times
                .iter()
                .map(|&t| MetricSample::evaluate(&fam, t))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalMetricRow {
    pub gamma: f64,
    pub lambda: f64,
    pub g_star: f64,
    pub tau_b: f64,
}

fn optimal_metric_rows(
    points: &[(f64, f64)],
    power: CouplingPower,
    grid: &TimeGrid,
) -> Result<Vec<OptimalMetricRow>> {
    points
        .par_iter()
        .map(|&(gamma, lambda)| {
            let fam =
                DephasingFamily::probe(HurstPoint::new(gamma)?, Coupling::new(lambda)?, power);
            let opt = maximize_gb_over_t(&fam, grid)?;
            Ok(OptimalMetricRow {
                gamma,
                lambda,
                g_star: opt.value,
                tau_b: opt.t_star,
            })
        })
        .collect()
}

/// Time-optimized Bures metric at `n` random (γ, λ): γ uniform on the
/// admissible interval, λ log-uniform on `lambda_range`.
pub fn sweep_fig2(
    n: usize,
    lambda_range: (f64, f64),
    seed: u64,
    power: CouplingPower,
    grid: &TimeGrid,
) -> Result<Vec<OptimalMetricRow>> {
    let (lmin, lmax) = lambda_range;
    if !(lmin > 0.0 && lmax > lmin) {
        return Err(Error::InvalidArgument(format!(
            "bad coupling range [{lmin}, {lmax}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let g = rng.random_range(GAMMA_MIN..GAMMA_MAX);
            let l = (rng.random_range(lmin.ln()..lmax.ln())).exp();
            (g, l)
        })
        .collect();
    optimal_metric_rows(&points, power, grid)
}

/// Time-optimized Bures metric along λ at fixed γ.
pub fn optimal_gb_curve(
    gamma: f64,
    lambdas: &[f64],
    power: CouplingPower,
    grid: &TimeGrid,
) -> Result<Vec<OptimalMetricRow>> {
    let points: Vec<(f64, f64)> = lambdas.iter().map(|&l| (gamma, l)).collect();
    optimal_metric_rows(&points, power, grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HelstromRow {
    pub lambda: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub pe_min: f64,
    /// NaN when γ₁ = γ₂ (no time dependence).
    pub t_star: f64,
}

/// Time-minimized Helstrom error over γ₁ × γ₂ for each coupling, ordered
/// λ → γ₁ → γ₂. Coincident pairs are reported as ½.
pub fn sweep_fig3(
    gamma1s: &[f64],
    gamma2s: &[f64],
    lambdas: &[f64],
    power: CouplingPower,
    grid: &TimeGrid,
) -> Result<Vec<HelstromRow>> {
    let cells: Vec<(f64, f64, f64)> = lambdas
        .iter()
        .flat_map(|&l| {
            gamma1s
                .iter()
                .flat_map(move |&g1| gamma2s.iter().map(move |&g2| (l, g1, g2)))
        })
        .collect();
    cells
        .par_iter()
        .map(|&(lambda, gamma1, gamma2)| {
            let pair = DiscriminationPair::new(
                HurstPoint::new(gamma1)?,
                HurstPoint::new(gamma2)?,
                Coupling::new(lambda)?,
                power,
            );
            if pair.is_degenerate() {
                return Ok(HelstromRow {
                    lambda,
                    gamma1,
                    gamma2,
                    pe_min: 0.5,
                    t_star: f64::NAN,
                });
            }
            let opt = minimize_pe_over_t(&pair, grid)?;
            Ok(HelstromRow {
                lambda,
                gamma1,
                gamma2,
                pe_min: opt.value,
                t_star: opt.t_star,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChernoffRow {
    pub gamma1: f64,
    pub gamma2: f64,
    pub lambda: f64,
    pub q_min: f64,
    pub t_star: f64,
    pub s_star: f64,
}

/// Time-minimized Chernoff quantity for each pair along λ, ordered
/// pair → λ.
pub fn sweep_fig4(
    pairs: &[(f64, f64)],
    lambdas: &[f64],
    power: CouplingPower,
    grid: &TimeGrid,
) -> Result<Vec<ChernoffRow>> {
    let cells: Vec<(f64, f64, f64)> = pairs
        .iter()
        .flat_map(|&(g1, g2)| lambdas.iter().map(move |&l| (g1, g2, l)))
        .collect();
    cells
        .par_iter()
        .map(|&(gamma1, gamma2, lambda)| {
            let pair = DiscriminationPair::new(
                HurstPoint::new(gamma1)?,
                HurstPoint::new(gamma2)?,
                Coupling::new(lambda)?,
                power,
            );
            let opt = minimize_q_over_t(&pair, grid)?;
            Ok(ChernoffRow {
                gamma1,
                gamma2,
                lambda,
                q_min: opt.value,
                t_star: opt.t_star,
                s_star: opt.s_star.unwrap_or(f64::NAN),
            })
        })
        .collect()
}
