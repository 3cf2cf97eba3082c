//! Finite simplicial complexes on labeled vertices, full subcomplexes, and
//! boundary matrices of the reduced (augmented) chain complex.

use std::collections::HashSet;

use thiserror::Error;

use crate::field::FieldSpec;
use crate::linalg;
use crate::matrix::IntegerMatrix;
use crate::subsets::{self, k_subsets, lex_cmp_same_size};

/// Largest supported vertex count; simplices are stored as 64-bit masks.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("vertex count must be in 1..={MAX_VERTICES}, got {0}")]
    BadVertexCount(usize),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("facet #{index} lists vertex {vertex} more than once")]
    DuplicateVertex { index: usize, vertex: usize },
    #[error("facet #{index} is empty")]
    EmptyFacet { index: usize },
    #[error("skeleton dimension {k} invalid for {n} vertices (need -1 <= k <= n-1)")]
    BadSkeletonDimension { k: i64, n: usize },
}

/// A simplicial complex on the vertex labels `1..=n`.
///
/// A simplex is the bitmask of its vertices (vertex `v` is bit `v - 1`).
/// Bucket `k` holds the `k`-dimensional simplices, sorted lexicographically
/// by their vertex tuples; that order fixes every boundary-matrix layout
/// bit-exactly. The empty simplex is implicit: the chain complex is always
/// augmented, so `C_{-1}` has dimension one even for the empty complex.
///
/// A complex on `n` labels need not contain all singletons: constructors
/// only ever add the closure of what they are given, so "ghost" labels are
/// possible and meaningful (their full subcomplex is empty).
///
/// Complexes are immutable after construction; every operation is a pure
/// function and safe to call concurrently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    n: usize,
    /// `simplices[k]` = sorted masks of the k-simplices; the last bucket is
    /// non-empty (no trailing empties), so `dim = len - 1`.
    simplices: Vec<Vec<u64>>,
}

impl SimplicialComplex {
    /// Downward closure of the given facets.
    ///
    /// `dim` becomes the largest facet size minus one; vertices not covered
    /// by any facet stay absent as 0-simplices.
    pub fn from_facets(n: usize, facets: &[Vec<usize>]) -> Result<Self, ComplexError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(ComplexError::BadVertexCount(n));
        }
        let mut masks = Vec::with_capacity(facets.len());
        for (index, facet) in facets.iter().enumerate() {
            if facet.is_empty() {
                return Err(ComplexError::EmptyFacet { index });
            }
            let mut mask = 0u64;
            for &vertex in facet {
                if vertex == 0 || vertex > n {
                    return Err(ComplexError::VertexOutOfRange { vertex, n });
                }
                let bit = 1u64 << (vertex - 1);
                if mask & bit != 0 {
                    return Err(ComplexError::DuplicateVertex { index, vertex });
                }
                mask |= bit;
            }
            masks.push(mask);
        }
        Ok(Self::closure_of(n, &masks))
    }

    /// Downward closure of a set of simplex masks.
    pub(crate) fn closure_of(n: usize, masks: &[u64]) -> Self {
        let top = masks
            .iter()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0);
        let mut buckets: Vec<HashSet<u64>> = vec![HashSet::new(); top];
        for &m in masks {
            buckets[m.count_ones() as usize - 1].insert(m);
        }
        // Close from the top down: every (k-1)-face of a k-simplex.
        for size in (2..=top).rev() {
            let faces: Vec<u64> = buckets[size - 1]
                .iter()
                .flat_map(|&m| {
                    let mut out = Vec::with_capacity(size);
                    let mut rest = m;
                    while rest != 0 {
                        let bit = rest & rest.wrapping_neg();
                        out.push(m & !bit);
                        rest &= rest - 1;
                    }
                    out
                })
                .collect();
            buckets[size - 2].extend(faces);
        }
        let simplices = buckets
            .into_iter()
            .map(|set| {
                let mut v: Vec<u64> = set.into_iter().collect();
                v.sort_unstable_by(|a, b| lex_cmp_same_size(*a, *b));
                v
            })
            .collect();
        let complex = SimplicialComplex { n, simplices };
        debug_assert!(complex.is_downward_closed());
        complex
    }

    /// Internal constructor from per-dimension buckets that are already
    /// downward closed; sorts and trims.
    pub(crate) fn from_closed_buckets(n: usize, mut buckets: Vec<Vec<u64>>) -> Self {
        while buckets.last().is_some_and(Vec::is_empty) {
            buckets.pop();
        }
        for bucket in &mut buckets {
            bucket.sort_unstable_by(|a, b| lex_cmp_same_size(*a, *b));
        }
        let complex = SimplicialComplex {
            n,
            simplices: buckets,
        };
        debug_assert!(complex.is_downward_closed());
        complex
    }

    /// The `k`-skeleton of the full simplex on `n` vertices: every subset
    /// of size at most `k + 1`. `k = -1` gives the empty complex.
    pub fn skeleton(n: usize, k: i64) -> Result<Self, ComplexError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(ComplexError::BadVertexCount(n));
        }
        if k < -1 || k >= n as i64 {
            return Err(ComplexError::BadSkeletonDimension { k, n });
        }
        let buckets = (0..=k)
            .map(|dim| k_subsets(n, dim as usize + 1).collect())
            .collect();
        Ok(Self::from_closed_buckets(n, buckets))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Largest dimension carrying a simplex; -1 for the empty complex.
    pub fn dim(&self) -> i64 {
        self.simplices.len() as i64 - 1
    }

    /// The k-simplices, sorted; empty slice outside `0..=dim`.
    pub fn simplices(&self, k: i64) -> &[u64] {
        if k < 0 || k >= self.simplices.len() as i64 {
            &[]
        } else {
            &self.simplices[k as usize]
        }
    }

    pub fn simplex_count(&self, k: i64) -> usize {
        self.simplices(k).len()
    }

    pub fn total_simplices(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    /// Membership; the empty simplex is a member of every complex.
    pub fn contains(&self, mask: u64) -> bool {
        if mask == 0 {
            return true;
        }
        let k = mask.count_ones() as i64 - 1;
        self.simplices(k)
            .binary_search_by(|probe| lex_cmp_same_size(*probe, mask))
            .is_ok()
    }

    /// The full subcomplex on the vertex set `j_mask`: every simplex of
    /// `self` whose vertices all lie in `j_mask`. Labels are preserved.
    pub fn full_subcomplex(&self, j_mask: u64) -> Self {
        let buckets = self
            .simplices
            .iter()
            .map(|bucket| {
                bucket
                    .iter()
                    .copied()
                    .filter(|m| m & !j_mask == 0)
                    .collect()
            })
            .collect();
        // Filtering keeps each bucket sorted; only trailing buckets can
        // empty out.
        Self::from_closed_buckets(self.n, buckets)
    }

    /// Matrix of the boundary operator from k-chains to (k-1)-chains of the
    /// reduced complex.
    ///
    /// Rows are the (k-1)-simplices and columns the k-simplices, each in
    /// the complex's lexicographic order; the entry for a face is
    /// `(-1)^position` of the omitted vertex within the column's sorted
    /// tuple. For `k = 0` this is the 1 x (#vertices) augmentation row of
    /// ones. Absent dimensions give 0 x m or m x 0 shapes.
    pub fn boundary_matrix(&self, k: usize) -> IntegerMatrix {
        let cols = self.simplices(k as i64);
        if k == 0 {
            let mut m = IntegerMatrix::zeros(1, cols.len());
            for c in 0..cols.len() {
                m.set(0, c, 1);
            }
            return m;
        }
        let rows = self.simplices(k as i64 - 1);
        let mut m = IntegerMatrix::zeros(rows.len(), cols.len());
        for (c, &simplex) in cols.iter().enumerate() {
            let mut sign = 1i64;
            let mut rest = simplex;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                let face = simplex & !bit;
                let r = rows
                    .binary_search_by(|probe| lex_cmp_same_size(*probe, face))
                    .expect("face of a simplex must be present (downward closure)");
                m.set(r, c, sign);
                sign = -sign;
                rest &= rest - 1;
            }
        }
        m
    }

    /// Dimension over `field` of the k-th reduced homology group.
    ///
    /// `k = -1` is meaningful: it is 1 exactly for the empty complex (the
    /// augmentation has nothing to hit) and 0 otherwise.
    pub fn reduced_betti(&self, k: i64, field: &FieldSpec) -> usize {
        if k < -1 || k > self.dim() {
            return 0;
        }
        let rank_down = if k == -1 {
            0 // boundary out of C_{-1} is the zero map
        } else {
            linalg::rank(&self.boundary_matrix(k as usize), field)
        };
        let rank_up = linalg::rank(&self.boundary_matrix((k + 1) as usize), field);
        let chains = if k == -1 { 1 } else { self.simplex_count(k) };
        chains - rank_down - rank_up
    }

    /// All reduced Betti numbers in one pass, sharing boundary ranks.
    ///
    /// Entry `k + 1` holds the dimension in degree `k`, starting at
    /// `k = -1`; the vector has length `dim + 2`.
    pub fn reduced_betti_all(&self, field: &FieldSpec) -> Vec<usize> {
        let dim = self.dim();
        // ranks[k] = rank of the boundary out of C_k, for k = 0..=dim+1.
        let ranks: Vec<usize> = (0..=(dim + 1) as usize)
            .map(|k| linalg::rank(&self.boundary_matrix(k), field))
            .collect();
        let mut betti = vec![0usize; (dim + 2) as usize];
        betti[0] = 1 - ranks[0];
        for k in 0..=dim {
            let k = k as usize;
            betti[k + 1] = self.simplex_count(k as i64) - ranks[k] - ranks[k + 1];
        }
        betti
    }

    /// Alternating face-count sum minus one; equals the alternating sum of
    /// reduced Betti numbers over any field.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        let mut chi = -1i64;
        for (k, bucket) in self.simplices.iter().enumerate() {
            let term = bucket.len() as i64;
            chi += if k % 2 == 0 { term } else { -term };
        }
        chi
    }

    /// Checks that every face of every simplex is present and that all
    /// simplices sit in the right bucket within range.
    pub fn is_downward_closed(&self) -> bool {
        if self.simplices.last().is_some_and(Vec::is_empty) {
            return false;
        }
        let full = if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        };
        for (k, bucket) in self.simplices.iter().enumerate() {
            for &m in bucket {
                if m.count_ones() as usize != k + 1 || m & !full != 0 {
                    return false;
                }
                if k > 0 {
                    let mut rest = m;
                    while rest != 0 {
                        let bit = rest & rest.wrapping_neg();
                        if !self.contains(m & !bit) {
                            return false;
                        }
                        rest &= rest - 1;
                    }
                }
            }
        }
        true
    }

    /// Maximal simplices, ordered by dimension then lexicographically.
    pub fn facets(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for (k, bucket) in self.simplices.iter().enumerate() {
            let above = self.simplices.get(k + 1);
            for &m in bucket {
                let covered = above.is_some_and(|next| next.iter().any(|&bigger| bigger & m == m));
                if !covered {
                    out.push(m);
                }
            }
        }
        out
    }

    /// Mask of a vertex subset given as 1-based labels.
    pub fn vertex_mask(&self, vertices: &[usize]) -> Result<u64, ComplexError> {
        let mut mask = 0u64;
        for &v in vertices {
            if v == 0 || v > self.n {
                return Err(ComplexError::VertexOutOfRange {
                    vertex: v,
                    n: self.n,
                });
            }
            mask |= 1u64 << (v - 1);
        }
        Ok(mask)
    }
}

/// Sorted vertex labels of a simplex mask (re-export for callers that do
/// not want to reach into [`subsets`]).
pub fn vertices_of(mask: u64) -> Vec<usize> {
    subsets::vertices_of(mask)
}
