//! Monte Carlo oracle for the analytic dephasing average, and simulated
//! estimation experiments.
//!
//! Paths of B_γ are drawn exactly on a uniform grid t_k = k T / n from the
//! Cholesky factor of the covariance matrix. The phase of path j is
//! φ_j = λ^{q/2} ∫₀ᵀ B_j(s) ds by the trapezoid rule with B(0) = 0, so that
//! Var φ = β(T) in either coupling convention and E[cos² φ] should match
//! the visibility p_γ(T, λ).
//!
//! The Gaussian draws for path j come from ChaCha stream j of the seed, so a
//! path does not depend on how the work is scheduled.

use nalgebra::{Cholesky, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::dephasing::{covariance, Coupling, CouplingPower, DephasingFamily};
use crate::error::{Error, Result};
use crate::metrology::qfi_gamma;
use crate::optimize::lin_space;
use crate::search::golden_section_max;
use crate::specfun::HurstPoint;

/// Jitter levels tried on the covariance diagonal, relative to its maximum.
const JITTER_LADDER: [f64; 5] = [1e-12, 1e-11, 1e-10, 1e-9, 1e-8];

/// Minimum number of paths for a visibility estimate.
pub const MIN_VISIBILITY_PATHS: usize = 100;

/// Likelihood grid for the MLE.
pub const MLE_GRID_POINTS: usize = 400;
pub const MLE_GAMMA_RANGE: (f64, f64) = (1.001, 1.999);
const MLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathSpec {
    pub steps: usize,
    pub horizon: f64,
    pub seed: u64,
    pub paths: usize,
}

impl PathSpec {
    pub fn new(steps: usize, horizon: f64, seed: u64, paths: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 steps, got {steps}"
            )));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if paths < 1 {
            return Err(Error::InvalidArgument("need at least one path".into()));
        }
        Ok(Self {
            steps,
            horizon,
            seed,
            paths,
        })
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    /// Grid times t_k = k T / n, k = 1..=n.
    pub fn times(&self) -> Vec<f64> {
        let dt = self.dt();
        (1..=self.steps).map(|k| k as f64 * dt).collect()
    }
}

pub fn covariance_matrix(p: HurstPoint, times: &[f64]) -> DMatrix<f64> {
    let n = times.len();
    DMatrix::from_fn(n, n, |i, j| covariance(p, times[i], times[j]))
}

/// Lower Cholesky factor of `k`, adding diagonal jitter from
/// [`JITTER_LADDER`] until the factorization succeeds.
pub fn cholesky_with_jitter(k: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    let n = k.nrows();
    let scale = k.diagonal().max();
    for rel in JITTER_LADDER {
        let jitter = rel * scale;
        let mut m = k.clone();
        for i in 0..n {
            m[(i, i)] += jitter;
        }
        if let Some(ch) = Cholesky::new(m) {
            return Ok((ch.unpack(), jitter));
        }
    }
    Err(Error::Factorization {
        size: n,
        jitter: JITTER_LADDER[JITTER_LADDER.len() - 1] * scale,
    })
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Exact fBm samples on the grid of `spec`, one path per row.
pub fn sample_paths(p: HurstPoint, spec: &PathSpec) -> Result<DMatrix<f64>> {
    let times = spec.times();
    let (l, _) = cholesky_with_jitter(&covariance_matrix(p, &times))?;
    let n = spec.steps;
    let columns: Vec<Vec<f64>> = (0..spec.paths)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream_rng(spec.seed, j as u64);
            (0..n).map(|_| rng.sample(StandardNormal)).collect()
        })
        .collect();
    let z = DMatrix::from_iterator(n, spec.paths, columns.into_iter().flatten());
    Ok((l * z).transpose())
}

/// Trapezoid integral of one path with B(0) = 0, using every `stride`-th
/// node.
fn trapezoid(path: impl Iterator<Item = f64> + Clone, n: usize, dt: f64, stride: usize) -> f64 {
    let h = dt * stride as f64;
    let mut sum = 0.0;
    let mut last = 0.0;
    for (k, b) in path.enumerate() {
        if (k + 1) % stride == 0 {
            sum += b;
            last = b;
        }
    }
    debug_assert!(n.is_multiple_of(stride));
    h * (sum - 0.5 * last)
}

/// Phases per path: (fine grid, every-other-node grid). The coarse phases
/// are only produced for an even step count.
pub fn phases(fam: &DephasingFamily, spec: &PathSpec) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let paths = sample_paths(fam.hurst, spec)?;
    let k = fam.power.path_coupling(fam.coupling);
    let dt = spec.dt();
    let n = spec.steps;
    let fine = (0..spec.paths)
        .map(|j| k * trapezoid(paths.row(j).iter().copied(), n, dt, 1))
        .collect();
    let coarse = n.is_multiple_of(2).then(|| {
        (0..spec.paths)
            .map(|j| k * trapezoid(paths.row(j).iter().copied(), n, dt, 2))
            .collect()
    });
    Ok((fine, coarse))
}

fn mean_and_se(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VisibilityEstimate {
    pub analytic: f64,
    /// Sample mean of cos²φ.
    pub mean: f64,
    pub std_err: f64,
    /// Same paths integrated on every other node (n/2 steps).
    pub coarse_mean: Option<f64>,
    /// Sample mean of sin φ cos φ and its standard error.
    pub sin_cos_mean: f64,
    pub sin_cos_std_err: f64,
}

impl VisibilityEstimate {
    /// |mean − analytic| in units of the standard error.
    pub fn z_score(&self) -> f64 {
        if self.std_err > 0.0 {
            (self.mean - self.analytic).abs() / self.std_err
        } else if self.mean == self.analytic {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Monte Carlo estimate of p_γ(T, λ) = E[cos²φ(T)] at T = `spec.horizon`.
pub fn empirical_visibility(fam: &DephasingFamily, spec: &PathSpec) -> Result<VisibilityEstimate> {
    if spec.paths < MIN_VISIBILITY_PATHS {
        return Err(Error::InvalidArgument(format!(
            "visibility estimate needs at least {MIN_VISIBILITY_PATHS} paths, got {}",
            spec.paths
        )));
    }
    let (fine, coarse) = phases(fam, spec)?;
    let (mean, std_err) = mean_and_se(fine.iter().map(|phi| phi.cos().powi(2)));
    let (sin_cos_mean, sin_cos_std_err) = mean_and_se(fine.iter().map(|phi| phi.sin() * phi.cos()));
    let coarse_mean =
        coarse.map(|c| c.iter().map(|phi| phi.cos().powi(2)).sum::<f64>() / c.len() as f64);
    Ok(VisibilityEstimate {
        analytic: fam.visibility(spec.horizon),
        mean,
        std_err,
        coarse_mean,
        sin_cos_mean,
        sin_cos_std_err,
    })
}

/// Repeated x-basis measurements on the |+⟩ probe at a fixed time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimationRun {
    pub hurst: HurstPoint,
    pub coupling: Coupling,
    pub power: CouplingPower,
    pub time: f64,
    pub shots: u64,
    pub trials: usize,
    pub seed: u64,
}

impl EstimationRun {
    pub fn new(
        hurst: HurstPoint,
        coupling: Coupling,
        power: CouplingPower,
        time: f64,
        shots: u64,
        trials: usize,
        seed: u64,
    ) -> Result<Self> {
        if !(time > 0.0 && time.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "measurement time must be positive, got {time}"
            )));
        }
        if shots < 1 || trials < 1 {
            return Err(Error::InvalidArgument(
                "shots and trials must be at least 1".into(),
            ));
        }
        Ok(Self {
            hurst,
            coupling,
            power,
            time,
            shots,
            trials,
            seed,
        })
    }

    pub fn family(&self) -> DephasingFamily {
        DephasingFamily::probe(self.hurst, self.coupling, self.power)
    }

    /// Quantum Cramér–Rao bound 1/(M G) at the true γ.
    pub fn cramer_rao_bound(&self) -> f64 {
        1.0 / (self.shots as f64 * qfi_gamma(&self.family(), self.time))
    }
}

/// Number of "+" outcomes in each trial of `shots` Bernoulli(p_γ) draws.
pub fn simulate_measurements(run: &EstimationRun) -> Vec<u64> {
    let p = run.family().visibility(run.time);
    (0..run.trials)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(run.seed, r as u64);
            (0..run.shots).filter(|_| rng.random::<f64>() < p).count() as u64
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MleReport {
    pub estimates: Vec<f64>,
    pub mean: f64,
    /// Sample variance of the non-degenerate estimates.
    pub variance: f64,
    pub std_err_mean: f64,
    /// Trials whose maximizer sits on the edge of the search branch.
    pub boundary_trials: usize,
    /// Trials with k = 0 or k = M, or with a γ-independent likelihood;
    /// excluded from mean and variance.
    pub degenerate_trials: usize,
    /// γ interval searched: the monotone branch of p_γ holding the true γ.
    pub branch: (f64, f64),
    pub cramer_rao_bound: f64,
}

impl MleReport {
    /// CRB / variance; 1 for an efficient estimator.
    pub fn efficiency(&self) -> f64 {
        self.cramer_rao_bound / self.variance
    }

    pub fn boundary_fraction(&self) -> f64 {
        self.boundary_trials as f64 / self.estimates.len() as f64
    }
}

/// Monotone stretch of `values` (over consecutive grid cells) that contains
/// index `at`, as an inclusive index range.
fn monotone_branch(values: &[f64], at: usize) -> (usize, usize) {
    let slope = |i: usize| (values[i + 1] - values[i]).signum();
    let n = values.len();
    let dir = if at + 1 < n { slope(at) } else { slope(at - 1) };
    let mut lo = at;
    while lo > 0 && slope(lo - 1) == dir {
        lo -= 1;
    }
    let mut hi = at;
    while hi + 1 < n && slope(hi) == dir {
        hi += 1;
    }
    (lo, hi)
}

/// Maximum-likelihood estimate of γ for each trial.
///
/// At fixed t the map γ ↦ p_γ is two-to-one on (1, 2) (V_γ diverges at both
/// ends), so the likelihood has two equal maxima. The search is confined to
/// the monotone branch of p_γ that contains the true γ, which is the local
/// estimation problem the Cramér–Rao bound refers to.
pub fn mle_gamma(counts: &[u64], run: &EstimationRun) -> Result<MleReport> {
    let fam = run.family();
    let m = run.shots as f64;
    let (a, b) = MLE_GAMMA_RANGE;
    let gammas = lin_space(a, b, MLE_GRID_POINTS);
    let prob = |g: f64| -> Result<(f64, f64)> {
        let f = fam.with_hurst(HurstPoint::new(g)?);
        Ok((f.visibility(run.time), f.complement_visibility(run.time)))
    };
    let grid_p = gammas
        .iter()
        .map(|&g| prob(g))
        .collect::<Result<Vec<_>>>()?;
    let ps: Vec<f64> = grid_p.iter().map(|x| x.0).collect();

    let truth = run.hurst.gamma();
    let at = gammas.iter().enumerate().fold(0, |best, (i, g)| {
        if (g - truth).abs() < (gammas[best] - truth).abs() {
            i
        } else {
            best
        }
    });
    let (lo, hi) = monotone_branch(&ps, at);

    // p_γ constant around the truth (e.g. p = ½ to machine precision at long
    // times): the outcomes carry no information and the variance is unbounded.
    if ps[lo] == ps[hi] {
        return Ok(MleReport {
            estimates: vec![f64::NAN; counts.len()],
            mean: f64::NAN,
            variance: f64::INFINITY,
            std_err_mean: f64::NAN,
            boundary_trials: 0,
            degenerate_trials: counts.len(),
            branch: (gammas[lo], gammas[hi]),
            cramer_rao_bound: run.cramer_rao_bound(),
        });
    }

    let loglik = |k: f64, (p, q): (f64, f64)| {
        let a = if k > 0.0 { k * p.ln() } else { 0.0 };
        let b = if k < m { (m - k) * q.ln() } else { 0.0 };
        a + b
    };

    let fits: Vec<(f64, bool, bool)> = counts
        .par_iter()
        .map(|&count| {
            let k = count as f64;
            let degenerate = count == 0 || count == run.shots;
            let best = (lo..=hi).fold(lo, |best, i| {
                if loglik(k, grid_p[i]) > loglik(k, grid_p[best]) {
                    i
                } else {
                    best
                }
            });
            let on_edge = best == lo || best == hi;
            let left = gammas[best.saturating_sub(1).max(lo)];
            let right = gammas[(best + 1).min(hi)];
            let refined = golden_section_max(
                |g| prob(g).map(|pq| loglik(k, pq)).unwrap_or(f64::NEG_INFINITY),
                left,
                right,
                MLE_TOL,
            );
            let estimate = if refined.value >= loglik(k, grid_p[best]) {
                refined.x
            } else {
                gammas[best]
            };
            (estimate, on_edge, degenerate)
        })
        .collect();

    let estimates: Vec<f64> = fits.iter().map(|f| f.0).collect();
    let boundary_trials = fits.iter().filter(|f| f.1).count();
    let degenerate_trials = fits.iter().filter(|f| f.2).count();
    let kept: Vec<f64> = fits.iter().filter(|f| !f.2).map(|f| f.0).collect();
    let (mean, std_err_mean, variance) = if kept.len() >= 2 {
        let (mean, se) = mean_and_se(kept.iter().copied());
        (mean, se, se * se * kept.len() as f64)
    } else {
        (
            kept.first().copied().unwrap_or(f64::NAN),
            f64::NAN,
            f64::NAN,
        )
    };

    Ok(MleReport {
        estimates,
        mean,
        variance,
        std_err_mean,
        boundary_trials,
        degenerate_trials,
        branch: (gammas[lo], gammas[hi]),
        cramer_rao_bound: run.cramer_rao_bound(),
    })
}
