//! Exact matrix rank over the rationals and over prime fields.
//!
//! This is the single numeric kernel behind every homology rank in the
//! crate. Rational ranks use fraction-free (Bareiss) elimination on
//! arbitrary-precision integers; prime-field ranks use modular Gaussian
//! elimination on `u64` residues. Pivoting is deterministic (first nonzero
//! entry at or below the pivot row, columns scanned left to right), so
//! eliminations are reproducible bit for bit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{FieldKind, FieldSpec};
use crate::matrix::IntegerMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// Rank of `m` over the field described by `spec`.
pub fn rank(m: &IntegerMatrix, spec: &FieldSpec) -> usize {
    match spec.kind() {
        FieldKind::Rationals => rank_rational(m),
        // The modulus was validated when the FieldSpec was built.
        FieldKind::Prime(p) => rank_mod_prime(m, p),
    }
}

/// Rank of `m` with entries reduced modulo the prime `p`.
pub fn rank_mod_p(m: &IntegerMatrix, p: u64) -> Result<usize, LinalgError> {
    if !crate::field::is_prime(p) {
        return Err(LinalgError::NotPrime(p));
    }
    Ok(rank_mod_prime(m, p))
}

#[allow(clippy::needless_range_loop)] // two rows of one matrix, split borrows
fn rank_mod_prime(m: &IntegerMatrix, p: u64) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            m.row(r)
                .iter()
                .map(|&e| (e as i128).rem_euclid(p as i128) as u64)
                .collect()
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(src) = (pivot_row..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(pivot_row, src);
        let inv = inv_mod(a[pivot_row][col], p);
        for r in pivot_row + 1..rows {
            if a[r][col] == 0 {
                continue;
            }
            let factor = mul_mod(a[r][col], inv, p);
            for c in col..cols {
                let sub = mul_mod(factor, a[pivot_row][c], p);
                a[r][c] = (a[r][c] + p - sub) % p;
            }
        }
        pivot_row += 1;
    }
    pivot_row
}

/// Exact rank over the rationals.
///
/// Fraction-free one-step Bareiss elimination: every intermediate entry is
/// a minor of the input, the division by the previous pivot is exact, and
/// no floating point or rational normalization is ever involved.
pub fn rank_rational(m: &IntegerMatrix) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| m.row(r).iter().map(|&e| BigInt::from(e)).collect())
        .collect();
    let mut prev = BigInt::one();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(src) = (pivot_row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, src);
        for r in pivot_row + 1..rows {
            for c in col + 1..cols {
                let t = &a[pivot_row][col] * &a[r][c] - &a[r][col] * &a[pivot_row][c];
                let (q, rem) = t.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[r][c] = q;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[pivot_row][col].clone();
        pivot_row += 1;
    }
    pivot_row
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}
