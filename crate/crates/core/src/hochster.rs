//! Bigraded Betti numbers of the Stanley-Reisner ring through the
//! full-subcomplex decomposition, Betti numbers of the associated
//! moment-angle complex, minimal non-faces, and an independent Taylor
//! complex route to the same table.
//!
//! The decomposition computed here is
//!
//! ```text
//! beta^{-i, 2j} = sum over J in [n], |J| = j, of dim H~_{j-i-1}(K_J)
//! ```
//!
//! with the `J = {}` term contributing `beta^{0,0} = 1` through the
//! reduced homology of the empty complex in degree -1. Both enumerations
//! in this module are exponential, so they sit behind explicit guards the
//! caller can override.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::field::FieldSpec;
use crate::linalg;
use crate::matrix::IntegerMatrix;
use crate::subsets::{binomial, k_subsets, lex_cmp};

/// Largest number of vertex subsets a table computation will enumerate
/// without an explicit override (2^20, i.e. a full table on 20 vertices).
pub const SUBSET_GUARD: u128 = 1 << 20;

/// Largest number of minimal non-faces the Taylor route accepts without an
/// override; the Taylor complex has `2^r` basis elements.
pub const TAYLOR_GUARD: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HochsterError {
    #[error(
        "table enumeration would visit {subsets} vertex subsets, above the guard of {guard}; \
         restrict (i, j) or override the guard"
    )]
    SubsetGuard { subsets: u128, guard: u128 },
    #[error(
        "Taylor complex on {generators} minimal non-faces exceeds the guard of {guard} \
         (2^r basis elements); override the guard to force it"
    )]
    TaylorGuard { generators: usize, guard: usize },
}

/// Table of bigraded Betti numbers `beta^{-i, 2j}`, storing only nonzero
/// entries. Iteration order is by multidegree `j`, then homological index
/// `i`, matching the JSON output format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedTable {
    n: usize,
    field: FieldSpec,
    /// Keyed by `(j, i)` so natural iteration is sorted by (j, i).
    entries: BTreeMap<(usize, usize), u64>,
}

impl BigradedTable {
    pub fn empty(n: usize, field: FieldSpec) -> Self {
        BigradedTable {
            n,
            field,
            entries: BTreeMap::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// The rank `beta^{-i, 2j}`; zero when absent.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries.get(&(j, i)).copied().unwrap_or(0)
    }

    pub fn add(&mut self, i: usize, j: usize, rank: u64) {
        if rank > 0 {
            *self.entries.entry((j, i)).or_insert(0) += rank;
        }
    }

    /// Nonzero entries as `(i, j, beta)`, sorted by `(j, i)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.entries.iter().map(|(&(j, i), &b)| (i, j, b))
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }

    /// Sum of all ranks in the table.
    pub fn total_rank(&self) -> u64 {
        self.entries.values().sum()
    }

    fn merge(mut self, other: BigradedTable) -> BigradedTable {
        for ((j, i), b) in other.entries {
            *self.entries.entry((j, i)).or_insert(0) += b;
        }
        self
    }
}

impl Serialize for BigradedTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            i: usize,
            j: usize,
            beta: u64,
        }
        let entries: Vec<Entry> = self
            .iter()
            .map(|(i, j, beta)| Entry { i, j, beta })
            .collect();
        let mut s = serializer.serialize_struct("BigradedTable", 3)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("field", &self.field)?;
        s.serialize_field("entries", &entries)?;
        s.end()
    }
}

/// Work estimate of a table computation: the number of vertex subsets it
/// will enumerate.
fn subset_work(n: usize, js: impl Iterator<Item = usize>) -> u128 {
    js.map(|j| binomial(n, j)).sum()
}

/// Bigraded Betti numbers of the Stanley-Reisner ring of `complex`.
///
/// Without a filter the full table is computed, visiting all `2^n` vertex
/// subsets; a filter restricts to the listed `(i, j)` pairs and only
/// enumerates the cardinalities that occur. Enumerations above
/// [`SUBSET_GUARD`] subsets are refused unless `override_guard` is set.
pub fn bigraded_betti(
    complex: &SimplicialComplex,
    field: &FieldSpec,
    filter: Option<&[(usize, usize)]>,
    override_guard: bool,
) -> Result<BigradedTable, HochsterError> {
    let n = complex.vertex_count();

    // Group requested homological indices by cardinality.
    let wanted: BTreeMap<usize, Vec<i64>> = match filter {
        None => (0..=n).map(|j| (j, (-1..j as i64).collect())).collect(),
        Some(pairs) => {
            let mut map: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
            for &(i, j) in pairs {
                if i > j || j > n {
                    continue; // structural zero, nothing to enumerate
                }
                let degree = j as i64 - i as i64 - 1;
                let degrees = map.entry(j).or_default();
                if !degrees.contains(&degree) {
                    degrees.push(degree);
                }
            }
            map
        }
    };

    let work = subset_work(n, wanted.keys().copied());
    if work > SUBSET_GUARD && !override_guard {
        return Err(HochsterError::SubsetGuard {
            subsets: work,
            guard: SUBSET_GUARD,
        });
    }

    let mut table = BigradedTable::empty(n, *field);
    for (&j, degrees) in &wanted {
        let masks: Vec<u64> = k_subsets(n, j).collect();
        let partial = masks
            .par_iter()
            .fold(
                || BigradedTable::empty(n, *field),
                |mut acc, &mask| {
                    contribute(complex, mask, j, degrees, field, &mut acc);
                    acc
                },
            )
            .reduce(|| BigradedTable::empty(n, *field), BigradedTable::merge);
        table = table.merge(partial);
    }
    Ok(table)
}

fn contribute(
    complex: &SimplicialComplex,
    mask: u64,
    j: usize,
    degrees: &[i64],
    field: &FieldSpec,
    table: &mut BigradedTable,
) {
    let sub = complex.full_subcomplex(mask);
    if degrees.len() > 1 {
        // Full sweep: one pass over all boundary ranks of the subcomplex.
        let betti = sub.reduced_betti_all(field);
        for (idx, &b) in betti.iter().enumerate() {
            let degree = idx as i64 - 1;
            if b > 0 && degrees.contains(&degree) {
                let i = (j as i64 - degree - 1) as usize;
                table.add(i, j, b as u64);
            }
        }
    } else {
        for &degree in degrees {
            let b = sub.reduced_betti(degree, field);
            if b > 0 {
                let i = (j as i64 - degree - 1) as usize;
                table.add(i, j, b as u64);
            }
        }
    }
}

/// Betti numbers of the moment-angle complex associated with `complex`:
/// `b_l = sum over j of beta^{-(2j - l), 2j}`. The vector runs up to the
/// last nonzero rank (so a contractible complex gives `[1]`).
pub fn zk_betti_numbers(
    complex: &SimplicialComplex,
    field: &FieldSpec,
    override_guard: bool,
) -> Result<Vec<u64>, HochsterError> {
    let table = bigraded_betti(complex, field, None, override_guard)?;
    let max_l = table.iter().map(|(i, j, _)| 2 * j - i).max().unwrap_or(0);
    let mut out = vec![0u64; max_l + 1];
    for (i, j, beta) in table.iter() {
        out[2 * j - i] += beta;
    }
    Ok(out)
}

/// All inclusion-minimal vertex subsets absent from `complex`, sorted
/// lexicographically by vertex tuple. These generate the Stanley-Reisner
/// ideal (one square-free monomial each).
pub fn minimal_non_faces(complex: &SimplicialComplex) -> Vec<u64> {
    let n = complex.vertex_count();
    // A minimal non-face has at most dim + 2 vertices: anything larger
    // properly contains a (dim+2)-subset, which is already a non-face.
    let max_size = ((complex.dim() + 2).max(1) as usize).min(n);
    let mut out = Vec::new();
    for size in 1..=max_size {
        for mask in k_subsets(n, size) {
            if complex.contains(mask) {
                continue;
            }
            let mut all_faces = true;
            let mut rest = mask;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                if !complex.contains(mask & !bit) {
                    all_faces = false;
                    break;
                }
                rest &= rest - 1;
            }
            if all_faces {
                out.push(mask);
            }
        }
    }
    out.sort_unstable_by(|a, b| lex_cmp(*a, *b));
    out
}

/// Bigraded Betti numbers through the Taylor complex of the
/// Stanley-Reisner ideal: an independent route to [`bigraded_betti`].
///
/// The Taylor complex on the `r` minimal non-face monomials has one basis
/// element per generator subset `S`, in multidegree `lcm(S)` (the union of
/// the vertex sets). After tensoring with the ground field, the
/// differential keeps a face `S \ t` exactly when dropping `t` preserves
/// the lcm; the complex therefore splits by multidegree, and
/// `beta^{-i,2j}` is the sum over multidegrees of size `j` of the homology
/// dimension in homological degree `i`.
pub fn tor_via_taylor(
    complex: &SimplicialComplex,
    field: &FieldSpec,
    override_guard: bool,
) -> Result<BigradedTable, HochsterError> {
    let generators = minimal_non_faces(complex);
    let r = generators.len();
    if r > TAYLOR_GUARD && !override_guard {
        return Err(HochsterError::TaylorGuard {
            generators: r,
            guard: TAYLOR_GUARD,
        });
    }

    // Group the 2^r generator subsets by their lcm multidegree.
    let mut by_multidegree: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for subset in 0u64..(1u64 << r) {
        let mut lcm = 0u64;
        let mut rest = subset;
        while rest != 0 {
            let idx = rest.trailing_zeros() as usize;
            lcm |= generators[idx];
            rest &= rest - 1;
        }
        by_multidegree.entry(lcm).or_default().push(subset);
    }

    let mut table = BigradedTable::empty(complex.vertex_count(), *field);
    for (multidegree, subsets) in &by_multidegree {
        let j = multidegree.count_ones() as usize;
        // Basis by homological degree, with positions for differential rows.
        let max_card = subsets
            .iter()
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0);
        let mut basis: Vec<Vec<u64>> = vec![Vec::new(); max_card + 1];
        for &s in subsets {
            basis[s.count_ones() as usize].push(s);
        }
        let position: Vec<BTreeMap<u64, usize>> = basis
            .iter()
            .map(|level| level.iter().enumerate().map(|(pos, &s)| (s, pos)).collect())
            .collect();

        // ranks[i] = rank of the differential out of homological degree i.
        let mut ranks = vec![0usize; max_card + 2];
        for i in 1..=max_card {
            let m = taylor_differential(&generators, *multidegree, &basis[i], &position[i - 1]);
            ranks[i] = linalg::rank(&m, field);
        }
        for (i, level) in basis.iter().enumerate() {
            let h = level.len() - ranks[i] - ranks[i + 1];
            if h > 0 {
                table.add(i, j, h as u64);
            }
        }
    }
    Ok(table)
}

/// Differential of the multidegree-`lcm` piece of the tensored Taylor
/// complex, from the given homological level down one.
fn taylor_differential(
    generators: &[u64],
    multidegree: u64,
    level: &[u64],
    below: &BTreeMap<u64, usize>,
) -> IntegerMatrix {
    let mut m = IntegerMatrix::zeros(below.len(), level.len());
    for (col, &subset) in level.iter().enumerate() {
        let mut sign = 1i64;
        let mut rest = subset;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            let face = subset & !bit;
            // The face survives only if the lcm is unchanged; otherwise the
            // quotient monomial dies in the ground field.
            let mut lcm = 0u64;
            let mut f = face;
            while f != 0 {
                lcm |= generators[f.trailing_zeros() as usize];
                f &= f - 1;
            }
            if lcm == multidegree {
                let row = below[&face];
                m.set(row, col, sign);
            }
            sign = -sign;
            rest &= rest - 1;
        }
    }
    m
}
