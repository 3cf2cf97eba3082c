//! Exact limit polynomials of the normalized bigraded Betti statistics.
//!
//! For dimension `d` and subset size `j`, the normalized statistics
//! converge to the expected reduced homology dimensions of the
//! model on `j` vertices:
//!
//! ```text
//! f_j(p) = E dim H~_{d-1}(Y)    g_j(p) = E dim H~_d(Y)
//! ```
//!
//! Both are integer-coefficient polynomials of degree at most
//! `M = C(j, d+1)`, and this module computes them exactly by enumerating
//! all `2^M` complexes between the (d-1)-skeleton and the d-skeleton:
//! homology dimensions are accumulated per count `s` of present
//! d-simplices, and the generating sum `sum_s total_s p^s (1-p)^(M-s)` is
//! expanded by binomial convolution in exact integers. The same
//! enumeration yields the variance polynomial of one subset statistic and
//! the covariance polynomial of two overlapping subsets.

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::field::FieldSpec;
use crate::poly::{one_minus_p_power, IntPolynomial};
use crate::subsets::{binomial, k_subsets};

/// Hard ceiling on the number of candidate d-simplices per enumeration;
/// `2^24` homology computations of tiny complexes is minutes at desk
/// scale, and anything beyond is refused outright.
pub const CANDIDATE_GUARD: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LimitError {
    #[error("enumeration needs {candidates} candidate simplices, above the hard guard of {guard}")]
    CandidateGuard { candidates: u128, guard: usize },
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
}

fn check_dims(d: usize, j: usize) -> Result<(), LimitError> {
    if d == 0 {
        return Err(LimitError::InvalidArguments("need d >= 1".into()));
    }
    if j < d + 1 {
        return Err(LimitError::InvalidArguments(format!(
            "need j >= d + 1, got d = {d}, j = {j}"
        )));
    }
    Ok(())
}

fn check_index(d: usize, j: usize, i: usize) -> Result<(), LimitError> {
    if i + d != j && i + d + 1 != j {
        return Err(LimitError::InvalidArguments(format!(
            "homological index i must be j - d or j - d - 1, got i = {i}, d = {d}, j = {j}"
        )));
    }
    Ok(())
}

fn check_guard(candidates: u128) -> Result<usize, LimitError> {
    if candidates > CANDIDATE_GUARD as u128 {
        return Err(LimitError::CandidateGuard {
            candidates,
            guard: CANDIDATE_GUARD,
        });
    }
    Ok(candidates as usize)
}

/// Per-popcount homology totals over one exhaustive enumeration.
struct EnumTotals {
    /// totals in degree d-1 and d, and their squares, indexed by the
    /// number `s` of present d-simplices.
    low: Vec<u64>,
    high: Vec<u64>,
    low_sq: Vec<u64>,
    high_sq: Vec<u64>,
}

impl EnumTotals {
    fn zeros(m: usize) -> Self {
        EnumTotals {
            low: vec![0; m + 1],
            high: vec![0; m + 1],
            low_sq: vec![0; m + 1],
            high_sq: vec![0; m + 1],
        }
    }

    fn merge(mut self, other: EnumTotals) -> EnumTotals {
        for (a, b) in self.low.iter_mut().zip(other.low) {
            *a += b;
        }
        for (a, b) in self.high.iter_mut().zip(other.high) {
            *a += b;
        }
        for (a, b) in self.low_sq.iter_mut().zip(other.low_sq) {
            *a += b;
        }
        for (a, b) in self.high_sq.iter_mut().zip(other.high_sq) {
            *a += b;
        }
        self
    }
}

/// Enumerates all complexes with full (d-1)-skeleton on `j` vertices and
/// every subset of the `M` candidate d-simplices, accumulating homology
/// dimensions in degrees d-1 and d by present-simplex count.
fn homology_totals(d: usize, j: usize, field: &FieldSpec) -> Result<EnumTotals, LimitError> {
    check_dims(d, j)?;
    let m = check_guard(binomial(j, d + 1))?;
    let candidates: Vec<u64> = k_subsets(j, d + 1).collect();
    let skeleton: Vec<Vec<u64>> = (0..d).map(|k| k_subsets(j, k + 1).collect()).collect();

    let totals = (0u64..(1u64 << m))
        .into_par_iter()
        .fold(
            || EnumTotals::zeros(m),
            |mut acc, choice| {
                let s = choice.count_ones() as usize;
                let complex = assemble(j, &skeleton, &candidates, choice);
                let betti = complex.reduced_betti_all(field);
                let low = betti.get(d).copied().unwrap_or(0) as u64;
                let high = betti.get(d + 1).copied().unwrap_or(0) as u64;
                acc.low[s] += low;
                acc.high[s] += high;
                acc.low_sq[s] += low * low;
                acc.high_sq[s] += high * high;
                acc
            },
        )
        .reduce(|| EnumTotals::zeros(m), EnumTotals::merge);
    Ok(totals)
}

/// The complex on `n` vertices with the given lower skeleton plus the
/// chosen subset of candidate top simplices.
fn assemble(n: usize, skeleton: &[Vec<u64>], candidates: &[u64], choice: u64) -> SimplicialComplex {
    let mut buckets: Vec<Vec<u64>> = skeleton.to_vec();
    let mut top = Vec::with_capacity(choice.count_ones() as usize);
    let mut rest = choice;
    while rest != 0 {
        top.push(candidates[rest.trailing_zeros() as usize]);
        rest &= rest - 1;
    }
    buckets.push(top);
    SimplicialComplex::from_closed_buckets(n, buckets)
}

/// Expands `sum_s totals[s] p^s (1-p)^(m-s)` into exact coefficients.
fn expand(totals: &[u64], m: usize) -> IntPolynomial {
    let mut acc = IntPolynomial::zero();
    for (s, &t) in totals.iter().enumerate() {
        if t == 0 {
            continue;
        }
        let term = one_minus_p_power(m - s).shifted(s).scaled(&BigInt::from(t));
        acc = &acc + &term;
    }
    acc
}

/// The limit of the leading normalized statistic (`i = j - d`): the
/// expected homology dimension in degree `d - 1` of the model on `j`
/// vertices. Degree at most `C(j, d+1)`.
pub fn limit_poly_f(d: usize, j: usize, field: &FieldSpec) -> Result<IntPolynomial, LimitError> {
    let totals = homology_totals(d, j, field)?;
    Ok(expand(&totals.low, totals.low.len() - 1))
}

/// The limit of the companion statistic (`i = j - d - 1`): the expected
/// homology dimension in degree `d`. Degree at most `C(j, d+1)`.
pub fn limit_poly_g(d: usize, j: usize, field: &FieldSpec) -> Result<IntPolynomial, LimitError> {
    let totals = homology_totals(d, j, field)?;
    Ok(expand(&totals.high, totals.high.len() - 1))
}

/// The polynomial the statistic's limit picks for the homological index:
/// `f_j` for `i = j - d`, `g_j` for `i = j - d - 1`.
pub fn limit_poly(
    d: usize,
    j: usize,
    i: usize,
    field: &FieldSpec,
) -> Result<IntPolynomial, LimitError> {
    check_dims(d, j)?;
    check_index(d, j, i)?;
    if i + d == j {
        limit_poly_f(d, j, field)
    } else {
        limit_poly_g(d, j, field)
    }
}

/// Exact variance polynomial `Var(X) = E[X^2] - (E[X])^2` of one subset
/// statistic, where `X` is the homology dimension in degree `j - i - 1`.
/// Vanishes at `p = 0` and `p = 1` (the complex is deterministic there).
pub fn exact_variance_poly(
    d: usize,
    j: usize,
    i: usize,
    field: &FieldSpec,
) -> Result<IntPolynomial, LimitError> {
    check_dims(d, j)?;
    check_index(d, j, i)?;
    let totals = homology_totals(d, j, field)?;
    let m = totals.low.len() - 1;
    let (first, second) = if i + d == j {
        (expand(&totals.low_sq, m), expand(&totals.low, m))
    } else {
        (expand(&totals.high_sq, m), expand(&totals.high, m))
    };
    Ok(&first - &(&second * &second))
}

/// Exact covariance polynomial of the statistics of two `j`-subsets
/// overlapping in `m` vertices, inside the model on their union.
///
/// Identically zero when `m <= d`: the two subsets then share no candidate
/// d-simplex, so the statistics are independent. For larger overlaps the
/// value comes from enumerating every configuration of the candidate
/// simplices lying inside either subset (simplices in neither restriction
/// integrate out exactly).
pub fn exact_cov_poly(
    d: usize,
    j: usize,
    m: usize,
    i: usize,
    field: &FieldSpec,
) -> Result<IntPolynomial, LimitError> {
    check_dims(d, j)?;
    check_index(d, j, i)?;
    if m >= j {
        return Err(LimitError::InvalidArguments(format!(
            "overlap m must be below j, got m = {m}, j = {j}"
        )));
    }
    if m <= d {
        return Ok(IntPolynomial::zero());
    }
    let (e12, e1, e2) = cov_enumeration(d, j, m, i, field)?;
    Ok(&e12 - &(&e1 * &e2))
}

/// Expands E[X1 X2], E[X1], E[X2] over the union of the two subsets.
fn cov_enumeration(
    d: usize,
    j: usize,
    m: usize,
    i: usize,
    field: &FieldSpec,
) -> Result<(IntPolynomial, IntPolynomial, IntPolynomial), LimitError> {
    let union_n = 2 * j - m;
    check_guard(binomial(union_n, d + 1))?;
    let j1: u64 = (1u64 << j) - 1;
    let j2: u64 = ((1u64 << union_n) - 1) ^ ((1u64 << (j - m)) - 1);
    let degree = j as i64 - i as i64 - 1;

    // Only candidates inside one of the two subsets influence either
    // statistic; the rest integrate out exactly.
    let candidates: Vec<u64> = k_subsets(union_n, d + 1)
        .filter(|c| c & !j1 == 0 || c & !j2 == 0)
        .collect();
    let m_rel = candidates.len();
    let skeleton: Vec<Vec<u64>> = (0..d)
        .map(|k| k_subsets(union_n, k + 1).collect())
        .collect();

    struct CovTotals {
        both: Vec<u64>,
        first: Vec<u64>,
        second: Vec<u64>,
    }
    let totals = (0u64..(1u64 << m_rel))
        .into_par_iter()
        .fold(
            || CovTotals {
                both: vec![0; m_rel + 1],
                first: vec![0; m_rel + 1],
                second: vec![0; m_rel + 1],
            },
            |mut acc, choice| {
                let s = choice.count_ones() as usize;
                let complex = assemble(union_n, &skeleton, &candidates, choice);
                let x1 = complex.full_subcomplex(j1).reduced_betti(degree, field) as u64;
                let x2 = complex.full_subcomplex(j2).reduced_betti(degree, field) as u64;
                acc.both[s] += x1 * x2;
                acc.first[s] += x1;
                acc.second[s] += x2;
                acc
            },
        )
        .reduce(
            || CovTotals {
                both: vec![0; m_rel + 1],
                first: vec![0; m_rel + 1],
                second: vec![0; m_rel + 1],
            },
            |mut a, b| {
                for (x, y) in a.both.iter_mut().zip(b.both) {
                    *x += y;
                }
                for (x, y) in a.first.iter_mut().zip(b.first) {
                    *x += y;
                }
                for (x, y) in a.second.iter_mut().zip(b.second) {
                    *x += y;
                }
                a
            },
        );
    Ok((
        expand(&totals.both, m_rel),
        expand(&totals.first, m_rel),
        expand(&totals.second, m_rel),
    ))
}
