//! Bitmask subset utilities used by every enumeration-heavy module.
//!
//! Vertex `v` (labels start at 1) corresponds to bit `v - 1`. Fixed-size
//! subsets are enumerated in increasing numeric mask order, which for
//! equal-size sets is colexicographic order of the sorted vertex tuples.

use std::cmp::Ordering;

/// Exact binomial coefficient; saturates nothing, so keep `n <= 64`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc
}

/// Iterator over all `k`-element subsets of `{0, .., n-1}` as bitmasks, in
/// increasing numeric order (Gosper's hack).
pub fn k_subsets(n: usize, k: usize) -> KSubsets {
    assert!(n <= 64, "masks are 64-bit");
    let next = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(((1u128 << k) - 1) as u64)
    };
    KSubsets {
        next,
        limit: 1u128 << n,
    }
}

pub struct KSubsets {
    next: Option<u64>,
    limit: u128,
}

impl Iterator for KSubsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            // Gosper: smallest larger mask with the same popcount. Widen to
            // u128 so the n = 64 top masks cannot overflow.
            let v = cur as u128;
            let c = v & v.wrapping_neg();
            let r = v + c;
            let succ = (((r ^ v) >> 2) / c) | r;
            if succ < self.limit {
                Some(succ as u64)
            } else {
                None
            }
        };
        Some(cur)
    }
}

/// Sorted vertex labels (1-based) of a mask.
pub fn vertices_of(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros() as usize;
        out.push(b + 1);
        m &= m - 1;
    }
    out
}

/// Mask of a list of 1-based vertex labels. Callers validate the range.
pub fn mask_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0u64, |m, &v| m | (1u64 << (v - 1)))
}

/// Lexicographic order of the sorted vertex tuples of two same-size sets:
/// the set containing the smallest vertex on which they differ comes first.
/// Only valid for equal popcounts (neither tuple can be a prefix then).
pub fn lex_cmp_same_size(a: u64, b: u64) -> Ordering {
    debug_assert_eq!(a.count_ones(), b.count_ones());
    if a == b {
        return Ordering::Equal;
    }
    let d = a ^ b;
    let low = d & d.wrapping_neg();
    if a & low != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Lexicographic order of sorted vertex tuples for sets of any sizes; a
/// proper prefix sorts first.
pub fn lex_cmp(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let d = a ^ b;
    let low = d & d.wrapping_neg();
    // Vertices below the lowest differing one agree. If the differing vertex
    // belongs to `a`, then `a` either continues a shared prefix that `b` has
    // exhausted (b ⊂ a below `low`.. impossible: all higher bits of b would
    // differ too) or carries the smaller element at the first differing
    // position. The exhausted-prefix case is exactly b & !(low - 1) == 0.
    if a & low != 0 {
        if b & !(low - 1) == 0 {
            Ordering::Greater // b is a proper prefix of a
        } else {
            Ordering::Less
        }
    } else if a & !(low - 1) == 0 {
        Ordering::Less // a is a proper prefix of b
    } else {
        Ordering::Greater
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_subset_counts_match_binomial() {
        for n in 0..=10 {
            for k in 0..=n + 1 {
                let got = k_subsets(n, k).count() as u128;
                assert_eq!(got, binomial(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn k_subsets_increasing_and_correct_size() {
        let masks: Vec<u64> = k_subsets(6, 3).collect();
        assert!(masks.windows(2).all(|w| w[0] < w[1]));
        assert!(masks.iter().all(|m| m.count_ones() == 3));
        assert_eq!(masks[0], 0b111);
        assert_eq!(*masks.last().unwrap(), 0b111000);
    }

    #[test]
    fn top_of_range_does_not_overflow() {
        let last: Vec<u64> = k_subsets(64, 63).collect();
        assert_eq!(last.len(), 64);
        assert_eq!(k_subsets(64, 64).count(), 1);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(30, 2), 435);
        assert_eq!(binomial(24, 3), 2024);
        assert_eq!(binomial(64, 32), 1832624140942590534);
        assert_eq!(binomial(5, 9), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn mask_vertex_round_trip() {
        let vs = vec![1, 4, 6];
        assert_eq!(vertices_of(mask_of(&vs)), vs);
        assert_eq!(vertices_of(0), Vec::<usize>::new());
    }

    fn lex_by_tuples(a: u64, b: u64) -> Ordering {
        vertices_of(a).cmp(&vertices_of(b))
    }

    #[test]
    fn lex_cmp_matches_tuple_comparison() {
        // All subsets of a 6-element ground set, pairwise.
        let all: Vec<u64> = (0u64..64).collect();
        for &a in &all {
            for &b in &all {
                assert_eq!(lex_cmp(a, b), lex_by_tuples(a, b), "a={a:b} b={b:b}");
                if a.count_ones() == b.count_ones() {
                    assert_eq!(lex_cmp_same_size(a, b), lex_by_tuples(a, b));
                }
            }
        }
    }
}
