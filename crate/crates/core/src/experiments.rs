//! Monte Carlo harness for the convergence, variance-scaling, and
//! covariance structure of the normalized bigraded Betti statistics.
//!
//! Per-trial statistics are exact rationals internally (integer homology
//! sums over an integer binomial count); floats appear only in the final
//! aggregates. Trials use the sampler's substream contract, and
//! aggregation is indexed by trial, so results are bit-identical for any
//! worker count.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldSpec;
use crate::io::json_f64_17;
use crate::limits::{self, LimitError};
use crate::sampler::{sample_stream, LMParams, SampleError};
use crate::subsets::{binomial, k_subsets};

/// Ceiling on `C(n, j) * trials` for one estimation cell; above this the
/// run is refused instead of hanging (override to force).
pub const WORK_BUDGET: u128 = 100_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum ExperimentError {
    #[error("work estimate {work} exceeds the budget of {budget}; lower trials or n, or override")]
    BudgetExceeded { work: u128, budget: u128 },
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
    #[error("variance fit is degenerate: {0}")]
    DegenerateFit(String),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error(transparent)]
    Sample(#[from] SampleError),
}

/// Monte Carlo aggregate of the normalized statistic
/// `beta^{-i,2j} / C(n, j)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SampleStats {
    pub trials: u64,
    #[serde(serialize_with = "json_f64_17")]
    pub mean: f64,
    /// Unbiased sample variance (zero for a single trial).
    #[serde(serialize_with = "json_f64_17")]
    pub variance: f64,
    #[serde(serialize_with = "json_f64_17")]
    pub std_err: f64,
}

/// Grid configuration of a convergence run.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub d: usize,
    pub j: usize,
    pub i: usize,
    pub p_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub field: FieldSpec,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            d: 1,
            j: 3,
            i: 2,
            p_grid: vec![0.3, 0.5, 0.7],
            n_grid: vec![8, 12, 16],
            trials: 200,
            seed: 0,
            field: FieldSpec::f2(),
        }
    }
}

/// Grid configuration of a variance-scaling run (single p).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VarScaleConfig {
    pub d: usize,
    pub j: usize,
    pub i: usize,
    pub p: f64,
    pub n_grid: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub field: FieldSpec,
}

impl Default for VarScaleConfig {
    fn default() -> Self {
        VarScaleConfig {
            d: 1,
            j: 3,
            i: 2,
            p: 0.5,
            n_grid: vec![8, 12, 16, 24],
            trials: 500,
            seed: 0,
            field: FieldSpec::f2(),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConvergenceRow {
    pub d: usize,
    pub j: usize,
    pub i: usize,
    #[serde(serialize_with = "json_f64_17")]
    pub p: f64,
    pub n: usize,
    pub trials: u64,
    #[serde(serialize_with = "json_f64_17")]
    pub mean: f64,
    #[serde(serialize_with = "json_f64_17")]
    pub std_err: f64,
    #[serde(serialize_with = "json_f64_17")]
    pub limit: f64,
    /// Mean absolute deviation of the per-trial normalized values from the
    /// limit; tracks the convergence trend far more stably than the
    /// deviation of the mean (which is recoverable from the `mean` and
    /// `limit` columns).
    #[serde(serialize_with = "json_f64_17")]
    pub abs_dev: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VarianceRow {
    pub d: usize,
    pub j: usize,
    pub i: usize,
    #[serde(serialize_with = "json_f64_17")]
    pub p: f64,
    pub n: usize,
    pub trials: u64,
    #[serde(serialize_with = "json_f64_17")]
    pub mean: f64,
    #[serde(serialize_with = "json_f64_17")]
    pub variance: f64,
    /// True when the empirical variance is exactly zero and the cell was
    /// left out of the log-log fit.
    pub excluded: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VarianceScaling {
    pub rows: Vec<VarianceRow>,
    /// Least-squares slope of log(variance) against log(n).
    #[serde(serialize_with = "json_f64_17")]
    pub slope: f64,
    pub fitted_cells: usize,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CovarianceCheck {
    pub d: usize,
    pub j: usize,
    pub i: usize,
    pub m: usize,
    pub n: usize,
    #[serde(serialize_with = "json_f64_17")]
    pub p: f64,
    pub trials: u64,
    #[serde(serialize_with = "json_f64_17")]
    pub covariance: f64,
    #[serde(serialize_with = "json_f64_17")]
    pub std_err: f64,
    /// Four standard errors; the acceptance radius around the exact value.
    #[serde(serialize_with = "json_f64_17")]
    pub radius: f64,
    /// Exact covariance polynomial evaluated at p, when its enumeration
    /// fits the guard.
    #[serde(serialize_with = "crate::io::json_opt_f64_17")]
    pub exact: Option<f64>,
}

fn check_index(d: usize, j: usize, i: usize) -> Result<(), ExperimentError> {
    if d == 0 || j < d + 1 {
        return Err(ExperimentError::InvalidArguments(format!(
            "need 1 <= d < j, got d = {d}, j = {j}"
        )));
    }
    if i + d != j && i + d + 1 != j {
        return Err(ExperimentError::InvalidArguments(format!(
            "homological index i must be j - d or j - d - 1, got i = {i}"
        )));
    }
    Ok(())
}

/// Per-trial values of `sum over |J| = j of dim H~_{j-i-1}(Y_J)` for
/// `trials` seeded samples of the model on `n` vertices.
#[allow(clippy::too_many_arguments)]
fn per_trial_sums(
    d: usize,
    n: usize,
    p: f64,
    i: usize,
    j: usize,
    trials: u64,
    seed: u64,
    field: &FieldSpec,
    override_budget: bool,
) -> Result<Vec<u64>, ExperimentError> {
    check_index(d, j, i)?;
    if n < j {
        return Err(ExperimentError::InvalidArguments(format!(
            "need n >= j, got n = {n}, j = {j}"
        )));
    }
    if trials == 0 {
        return Err(ExperimentError::InvalidArguments("need trials >= 1".into()));
    }
    let work = binomial(n, j) * trials as u128;
    if work > WORK_BUDGET && !override_budget {
        return Err(ExperimentError::BudgetExceeded {
            work,
            budget: WORK_BUDGET,
        });
    }

    let params = LMParams { n, d, p, seed };
    params.validate()?;
    let degree = j as i64 - i as i64 - 1;
    let masks: Vec<u64> = k_subsets(n, j).collect();

    Ok((0..trials)
        .into_par_iter()
        .map(|t| {
            let sample = sample_stream(&params, t).expect("validated params");
            masks
                .iter()
                .map(|&mask| sample.full_subcomplex(mask).reduced_betti(degree, field) as u64)
                .sum()
        })
        .collect())
}

/// One estimation cell: `trials` seeded samples of the model on `n`
/// vertices, each evaluated as `sum over |J| = j of dim H~_{j-i-1}(Y_J)`,
/// normalized by `C(n, j)`.
#[allow(clippy::too_many_arguments)]
pub fn estimate_bigraded(
    d: usize,
    n: usize,
    p: f64,
    i: usize,
    j: usize,
    trials: u64,
    seed: u64,
    field: &FieldSpec,
    override_budget: bool,
) -> Result<SampleStats, ExperimentError> {
    let sums = per_trial_sums(d, n, p, i, j, trials, seed, field, override_budget)?;
    Ok(aggregate(&sums, binomial(n, j)))
}

/// Exact-rational aggregation of integer per-trial sums normalized by
/// `denominator`.
fn aggregate(per_trial: &[u64], denominator: u128) -> SampleStats {
    let trials = per_trial.len() as u64;
    let t = BigInt::from(trials);
    let c = BigInt::from(denominator);
    let sum: BigInt = per_trial.iter().map(|&k| BigInt::from(k)).sum();
    let sum_sq: BigInt = per_trial.iter().map(|&k| BigInt::from(k) * k).sum();

    let mean = BigRational::new(sum.clone(), &t * &c);
    let variance = if trials > 1 {
        // Unbiased: (T sum_sq - sum^2) / (T (T-1) C^2).
        BigRational::new(&t * &sum_sq - &sum * &sum, &t * (&t - 1) * &c * &c)
    } else {
        BigRational::zero()
    };
    debug_assert!(!variance.is_negative());
    let mean_f = mean.to_f64().expect("finite");
    let var_f = variance.to_f64().expect("finite");
    SampleStats {
        trials,
        mean: mean_f,
        variance: var_f,
        std_err: (var_f / trials as f64).sqrt(),
    }
}

/// One row per `(p, n)` cell, in grid order, with the exact limit and the
/// absolute deviation of the empirical mean from it.
pub fn run_convergence(
    config: &ConvergenceConfig,
    override_budget: bool,
) -> Result<Vec<ConvergenceRow>, ExperimentError> {
    check_index(config.d, config.j, config.i)?;
    if config.n_grid.iter().any(|&n| n < config.j) {
        return Err(ExperimentError::InvalidArguments(
            "every n in the grid must be at least j".into(),
        ));
    }
    let poly = limits::limit_poly(config.d, config.j, config.i, &config.field)?;
    let mut rows = Vec::with_capacity(config.p_grid.len() * config.n_grid.len());
    for &p in &config.p_grid {
        let limit = poly.eval_f64(p);
        for &n in &config.n_grid {
            let sums = per_trial_sums(
                config.d,
                n,
                p,
                config.i,
                config.j,
                config.trials,
                config.seed,
                &config.field,
                override_budget,
            )?;
            let stats = aggregate(&sums, binomial(n, config.j));
            let denominator = binomial(n, config.j) as f64;
            let abs_dev = sums
                .iter()
                .map(|&k| (k as f64 / denominator - limit).abs())
                .sum::<f64>()
                / sums.len() as f64;
            rows.push(ConvergenceRow {
                d: config.d,
                j: config.j,
                i: config.i,
                p,
                n,
                trials: config.trials,
                mean: stats.mean,
                std_err: stats.std_err,
                limit,
                abs_dev,
            });
        }
    }
    Ok(rows)
}

/// Empirical variance of the normalized statistic per `n`, plus the
/// least-squares slope of `log variance` against `log n`. Cells with
/// exactly zero variance are flagged, excluded, and reported; the fit
/// refuses with a diagnostic when fewer than two cells survive.
pub fn run_variance_scaling(
    config: &VarScaleConfig,
    override_budget: bool,
) -> Result<VarianceScaling, ExperimentError> {
    check_index(config.d, config.j, config.i)?;
    if config.n_grid.len() < 3 {
        return Err(ExperimentError::InvalidArguments(
            "variance scaling needs at least 3 n values".into(),
        ));
    }
    let mut rows = Vec::with_capacity(config.n_grid.len());
    for &n in &config.n_grid {
        let stats = estimate_bigraded(
            config.d,
            n,
            config.p,
            config.i,
            config.j,
            config.trials,
            config.seed,
            &config.field,
            override_budget,
        )?;
        rows.push(VarianceRow {
            d: config.d,
            j: config.j,
            i: config.i,
            p: config.p,
            n,
            trials: config.trials,
            mean: stats.mean,
            variance: stats.variance,
            excluded: stats.variance == 0.0,
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| !r.excluded)
        .map(|r| ((r.n as f64).ln(), r.variance.ln()))
        .collect();
    if points.len() < 2 {
        let excluded: Vec<usize> = rows.iter().filter(|r| r.excluded).map(|r| r.n).collect();
        return Err(ExperimentError::DegenerateFit(format!(
            "only {} cells have nonzero variance (zero-variance n: {:?})",
            points.len(),
            excluded
        )));
    }
    let slope = least_squares_slope(&points);
    Ok(VarianceScaling {
        fitted_cells: points.len(),
        slope,
        rows,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Empirical covariance of the statistics of the two fixed subsets
/// `J1 = {1..j}` and `J2 = {j-m+1..2j-m}` over seeded trials, with a
/// four-standard-error radius and, when its enumeration fits the guard,
/// the exact covariance polynomial value.
#[allow(clippy::too_many_arguments)]
pub fn run_covariance_check(
    d: usize,
    j: usize,
    i: usize,
    m: usize,
    n: usize,
    p: f64,
    trials: u64,
    seed: u64,
    field: &FieldSpec,
) -> Result<CovarianceCheck, ExperimentError> {
    check_index(d, j, i)?;
    if m > j {
        return Err(ExperimentError::InvalidArguments(format!(
            "overlap m must be at most j, got m = {m}, j = {j}"
        )));
    }
    if n < 2 * j - m {
        return Err(ExperimentError::InvalidArguments(format!(
            "need n >= 2j - m = {}, got n = {n}",
            2 * j - m
        )));
    }
    if trials < 2 {
        return Err(ExperimentError::InvalidArguments("need trials >= 2".into()));
    }
    // Sampling dominates here: one variate per candidate d-simplex.
    let work = binomial(n, d + 1) * trials as u128;
    if work > WORK_BUDGET {
        return Err(ExperimentError::BudgetExceeded {
            work,
            budget: WORK_BUDGET,
        });
    }
    let params = LMParams { n, d, p, seed };
    params.validate()?;
    let degree = j as i64 - i as i64 - 1;
    let j1: u64 = (1u64 << j) - 1;
    let j2: u64 = ((1u64 << (2 * j - m)) - 1) ^ ((1u64 << (j - m)) - 1);

    let pairs: Vec<(u64, u64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sample = sample_stream(&params, t).expect("validated params");
            let x1 = sample.full_subcomplex(j1).reduced_betti(degree, field) as u64;
            let x2 = sample.full_subcomplex(j2).reduced_betti(degree, field) as u64;
            (x1, x2)
        })
        .collect();

    let t = BigInt::from(trials);
    let s1: BigInt = pairs.iter().map(|&(a, _)| BigInt::from(a)).sum();
    let s2: BigInt = pairs.iter().map(|&(_, b)| BigInt::from(b)).sum();
    let s12: BigInt = pairs.iter().map(|&(a, b)| BigInt::from(a) * b).sum();

    // Unbiased sample covariance.
    let cov = BigRational::new(&t * &s12 - &s1 * &s2, &t * (&t - 1));
    // Delta-method standard error: sqrt((m22 - cov_biased^2) / T) with
    // m22 the second mixed central moment, all exact until the sqrt.
    let cov_biased = BigRational::new(&t * &s12 - &s1 * &s2, &t * &t);
    let m22_num: BigInt = pairs
        .iter()
        .map(|&(a, b)| {
            let da = &t * BigInt::from(a) - &s1;
            let db = &t * BigInt::from(b) - &s2;
            let prod = da * db;
            &prod * &prod
        })
        .sum();
    let m22 = BigRational::new(m22_num, &t * &t * &t * &t * &t);
    let spread = (&m22 - &cov_biased * &cov_biased).to_f64().expect("finite");
    let std_err = (spread.max(0.0) / trials as f64).sqrt();

    let exact = if m < j {
        match limits::exact_cov_poly(d, j, m, i, field) {
            Ok(poly) => Some(poly.eval_f64(p)),
            Err(LimitError::CandidateGuard { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };

    Ok(CovarianceCheck {
        d,
        j,
        i,
        m,
        n,
        p,
        trials,
        covariance: cov.to_f64().expect("finite"),
        std_err,
        radius: 4.0 * std_err,
        exact,
    })
}
