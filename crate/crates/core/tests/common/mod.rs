//! Shared fixtures and independent oracles for the integration tests.
//!
//! Everything here is deliberately separate from the library's own
//! computation paths: the Smith normal form is a second route to matrix
//! ranks, and the union-find cycle count is a second route to graph
//! homology.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use hochster::{IntegerMatrix, SimplicialComplex};

/// The 6-vertex minimal triangulation of the real projective plane
/// (antipodal quotient of the icosahedron): complete 1-skeleton, ten
/// triangles, Euler characteristic 1.
pub fn rp2_facets() -> Vec<Vec<usize>> {
    vec![
        vec![1, 2, 3],
        vec![1, 3, 4],
        vec![1, 4, 5],
        vec![1, 5, 6],
        vec![1, 2, 6],
        vec![2, 3, 5],
        vec![3, 4, 6],
        vec![2, 4, 5],
        vec![3, 5, 6],
        vec![2, 4, 6],
    ]
}

pub fn rp2() -> SimplicialComplex {
    SimplicialComplex::from_facets(6, &rp2_facets()).unwrap()
}

/// Invariant factors (absolute values of the nonzero Smith diagonal) of an
/// integer matrix, in divisibility order. Classical reduction: repeatedly
/// move a minimal-magnitude pivot to the corner, clear its row and column
/// by Euclidean steps, and restore the divisibility chain.
#[allow(clippy::needless_range_loop)] // row/column operations need index pairs
pub fn smith_invariant_factors(mat: &IntegerMatrix) -> Vec<BigInt> {
    let rows = mat.rows();
    let cols = mat.cols();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| mat.row(r).iter().map(|&e| BigInt::from(e)).collect())
        .collect();
    let mut diag = Vec::new();
    let mut t = 0;
    'outer: while t < rows && t < cols {
        // Minimal nonzero magnitude in the trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if a[r][c].is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pr, pc)) => a[r][c].abs() < a[pr][pc].abs(),
                };
                if better {
                    pivot = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }

        let mut dirty = false;
        for r in t + 1..rows {
            if a[r][t].is_zero() {
                continue;
            }
            let q = &a[r][t] / &a[t][t];
            if !q.is_zero() {
                for c in t..cols {
                    let sub = &q * &a[t][c];
                    a[r][c] -= sub;
                }
            }
            if !a[r][t].is_zero() {
                dirty = true; // remainder became a smaller pivot candidate
            }
        }
        for c in t + 1..cols {
            if a[t][c].is_zero() {
                continue;
            }
            let q = &a[t][c] / &a[t][t];
            if !q.is_zero() {
                for r in t..rows {
                    let sub = &q * &a[r][t];
                    a[r][c] -= sub;
                }
            }
            if !a[t][c].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue 'outer;
        }
        for r in t + 1..rows {
            for c in t + 1..cols {
                if !(&a[r][c] % &a[t][t]).is_zero() {
                    // Fold row r into row t and redo this corner so the
                    // pivot ends up dividing everything below it.
                    for cc in t..cols {
                        let add = a[r][cc].clone();
                        a[t][cc] += add;
                    }
                    continue 'outer;
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    // Divisibility chain is the defining property; fail loudly here rather
    // than hand back a wrong oracle.
    for w in diag.windows(2) {
        assert!(
            (&w[1] % &w[0]).is_zero(),
            "invariant factors out of order: {diag:?}"
        );
    }
    diag
}

/// Rank over the rationals via the Smith diagonal.
pub fn snf_rank_rational(mat: &IntegerMatrix) -> usize {
    smith_invariant_factors(mat).len()
}

/// Rank over F_p via the Smith diagonal: factors not divisible by p.
pub fn snf_rank_mod_p(mat: &IntegerMatrix, p: u64) -> usize {
    let p = BigInt::from(p);
    smith_invariant_factors(mat)
        .iter()
        .filter(|d| !(*d % &p).is_zero())
        .count()
}

/// Connected components of the graph on `1..=n` whose edges are the
/// `present`-masked subset of `edges`; plain union-find, no homology
/// machinery.
pub fn graph_components(n: usize, edges: &[(usize, usize)], present: u64) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (idx, &(u, v)) in edges.iter().enumerate() {
        if present & (1 << idx) != 0 {
            let (ru, rv) = (find(&mut parent, u - 1), find(&mut parent, v - 1));
            if ru != rv {
                parent[ru] = rv;
            }
        }
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

/// First Betti number of the same graph: edges - n + components.
pub fn graph_cycle_rank(n: usize, edges: &[(usize, usize)], present: u64) -> usize {
    let e = present.count_ones() as usize;
    e + graph_components(n, edges, present) - n
}
