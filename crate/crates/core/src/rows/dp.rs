//! Digit DP for the shifted row counts.
//!
//! The state is the pair `(row(m), row(m−1))`. Reading one more base-`p` digit
//! `a` of `n` maps the pair for `m` to the pair for `p·m + a`:
//!
//! ```text
//! row(pm+a)   = (a+1)·row(m) ≫ a     + (p−a−1)·row(m−1) ≫ (p+a)
//! row(pm+a−1) =     a·row(m) ≫ (a−1) +   (p−a)·row(m−1) ≫ (p+a−1)   (a ≥ 1)
//! row(pm−1)   =                             p·row(m−1) ≫ (p−1)
//! ```
//!
//! where `≫ s` shifts keys up by `s`. For `p = 2` this is the pair
//! `row(2m) = row(m) + row(m−1) ≫ 2`, `row(2m+1) = 2·row(m) ≫ 1`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::SparseRow;
use crate::error::{guard, Result};
use crate::valuation::{check_prime, digits};

/// Largest `λ` accepted by [`enumerate_interval`] and [`fold_interval`].
pub const MAX_INTERVAL_LAMBDA: u32 = 26;

/// Dense binary row: index `k` holds `ϑ̃₂(k, n)`.
pub type DenseRow = Vec<u128>;

/// A row together with its predecessor row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowPair {
    pub current: SparseRow,
    pub predecessor: SparseRow,
}

fn add_shifted(out: &mut DenseRow, src: &[u128], shift: usize, factor: u128) {
    if src.is_empty() || factor == 0 {
        return;
    }
    if out.len() < src.len() + shift {
        out.resize(src.len() + shift, 0);
    }
    for (o, &s) in out[shift..].iter_mut().zip(src) {
        *o += factor * s;
    }
}

/// Pair for `2m + bit` from the pair for `m`.
fn binary_child(cur: &[u128], pred: &[u128], bit: u64, out_cur: &mut DenseRow, out_pred: &mut DenseRow) {
    out_cur.clear();
    out_pred.clear();
    if bit == 0 {
        add_shifted(out_cur, cur, 0, 1);
        add_shifted(out_cur, pred, 2, 1);
        add_shifted(out_pred, pred, 1, 2);
    } else {
        add_shifted(out_cur, cur, 1, 2);
        add_shifted(out_pred, cur, 0, 1);
        add_shifted(out_pred, pred, 2, 1);
    }
}

fn binary_pair(n: u64) -> (DenseRow, DenseRow) {
    let mut cur = vec![1u128];
    let mut pred = DenseRow::new();
    let (mut next_cur, mut next_pred) = (DenseRow::new(), DenseRow::new());
    let bits = 64 - n.leading_zeros();
    for i in (0..bits).rev() {
        binary_child(&cur, &pred, (n >> i) & 1, &mut next_cur, &mut next_pred);
        std::mem::swap(&mut cur, &mut next_cur);
        std::mem::swap(&mut pred, &mut next_pred);
    }
    (cur, pred)
}

/// Exact `ϑ̃₂(·, n)` by the binary digit DP, in `O(λ²)` additions.
pub fn tilde_row(n: u64) -> SparseRow {
    SparseRow::from_dense(n, &binary_pair(n).0)
}

/// Rows for `n` and `n − 1` (`p = 2`); the predecessor of row 0 is empty.
pub fn tilde_row_pair(n: u64) -> RowPair {
    let (cur, pred) = binary_pair(n);
    RowPair {
        current: SparseRow::from_dense(n, &cur),
        predecessor: SparseRow::from_dense(n.wrapping_sub(1), &pred),
    }
}

type SparseCounts = BTreeMap<u64, u128>;

fn add_sparse(out: &mut SparseCounts, src: &SparseCounts, shift: u64, factor: u128) {
    if factor == 0 {
        return;
    }
    for (&k, &c) in src {
        *out.entry(k + shift).or_insert(0) += factor * c;
    }
}

/// Exact `ϑ̃_p(·, n)` for any prime `p`, via the general digit recurrence.
pub fn tilde_row_general(n: u64, p: u64) -> Result<SparseRow> {
    check_prime(p)?;
    let expansion = digits(n, p)?;
    let mut cur: SparseCounts = [(0u64, 1u128)].into_iter().collect();
    let mut pred = SparseCounts::new();
    let wide = u128::from(p);
    for &a in expansion.digits().iter().rev() {
        let a_wide = u128::from(a);
        let mut next_cur = SparseCounts::new();
        let mut next_pred = SparseCounts::new();
        add_sparse(&mut next_cur, &cur, a, a_wide + 1);
        add_sparse(&mut next_cur, &pred, p + a, wide - a_wide - 1);
        if a == 0 {
            add_sparse(&mut next_pred, &pred, p - 1, wide);
        } else {
            add_sparse(&mut next_pred, &cur, a - 1, a_wide);
            add_sparse(&mut next_pred, &pred, p + a - 1, wide - a_wide);
        }
        cur = next_cur;
        pred = next_pred;
    }
    Ok(SparseRow::from_entries(n, p, cur))
}

fn walk<F>(levels: &mut [(DenseRow, DenseRow)], n: u64, visit: &mut F)
where
    F: FnMut(u64, &[u128], &[u128]),
{
    let (head, tail) = levels.split_first_mut().expect("at least one level");
    if tail.is_empty() {
        visit(n, &head.0, &head.1);
        return;
    }
    for bit in 0..2 {
        let (next_cur, next_pred) = &mut tail[0];
        binary_child(&head.0, &head.1, bit, next_cur, next_pred);
        walk(tail, 2 * n + bit, visit);
    }
}

/// Depth-first walk over the `2^depth` descendants `n·2^depth + r` of the
/// pair for `n`, in increasing order.
fn walk_subtree<F>(n: u64, pair: (DenseRow, DenseRow), depth: u32, visit: &mut F)
where
    F: FnMut(u64, &[u128], &[u128]),
{
    let mut levels = vec![(DenseRow::new(), DenseRow::new()); depth as usize + 1];
    levels[0] = pair;
    walk(&mut levels, n, visit);
}

/// Visits every `n ∈ [2^λ, 2^{λ+1})` in increasing order with its row.
pub fn enumerate_interval<F>(lambda: u32, mut visitor: F) -> Result<()>
where
    F: FnMut(u64, &SparseRow),
{
    guard("lambda", u64::from(lambda), u64::from(MAX_INTERVAL_LAMBDA))?;
    walk_subtree(1, binary_pair(1), lambda, &mut |n, cur, _| {
        visitor(n, &SparseRow::from_dense(n, cur))
    });
    Ok(())
}

/// Parallel fold over `n ∈ [2^λ, 2^{λ+1})` with dense `(row(n), row(n−1))`.
///
/// The interval is split on its top bits; each block is folded sequentially
/// from `init()` and the block results are combined left to right, so the
/// result does not depend on the number of worker threads.
pub fn fold_interval<T, I, F, R>(lambda: u32, init: I, fold: F, reduce: R) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, u64, &[u128], &[u128]) + Sync,
    R: Fn(T, T) -> T,
{
    guard("lambda", u64::from(lambda), u64::from(MAX_INTERVAL_LAMBDA))?;
    let split = lambda.min(8);
    let blocks: Vec<u64> = ((1u64 << split)..(1u64 << (split + 1))).collect();
    let parts: Vec<T> = blocks
        .into_par_iter()
        .map(|prefix| {
            let mut acc = init();
            walk_subtree(prefix, binary_pair(prefix), lambda - split, &mut |n, cur, pred| {
                fold(&mut acc, n, cur, pred)
            });
            acc
        })
        .collect();
    let mut parts = parts.into_iter();
    let first = parts.next().expect("at least one block");
    Ok(parts.fold(first, reduce))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rows::row_bruteforce;

    fn table_column(n: u64) -> Vec<(u64, u128)> {
        // columns n = 0..=17 of the published table of ϑ̃₂(k, n), keyed by k
        let table: [&[(u64, u128)]; 18] = [
            &[(0, 1)],
            &[(1, 2)],
            &[(1, 2), (2, 1)],
            &[(2, 4)],
            &[(1, 2), (2, 1), (3, 2)],
            &[(2, 4), (3, 2)],
            &[(2, 4), (3, 2), (4, 1)],
            &[(3, 8)],
            &[(1, 2), (2, 1), (3, 2), (4, 4)],
            &[(2, 4), (3, 2), (4, 4)],
            &[(2, 4), (3, 4), (4, 1), (5, 2)],
            &[(3, 8), (4, 4)],
            &[(2, 4), (3, 2), (4, 5), (5, 2)],
            &[(3, 8), (4, 4), (5, 2)],
            &[(3, 8), (4, 4), (5, 2), (6, 1)],
            &[(4, 16)],
            &[(1, 2), (2, 1), (3, 2), (4, 4), (5, 8)],
            &[(2, 4), (3, 2), (4, 4), (5, 8)],
        ];
        table[n as usize].to_vec()
    }

    #[test]
    fn reproduces_table() {
        for n in 0..=17 {
            assert_eq!(tilde_row(n).entries(), table_column(n).as_slice(), "n = {n}");
        }
    }

    #[test]
    fn kronecker_rows() {
        for lambda in 0..=26u32 {
            let n = (1u64 << lambda) - 1;
            assert_eq!(tilde_row(n).entries(), &[(u64::from(lambda), 1u128 << lambda)]);
        }
    }

    #[test]
    fn general_base_cases() {
        for p in [2, 3, 5, 7] {
            assert_eq!(tilde_row_general(0, p).unwrap().entries(), &[(0, 1)]);
        }
        assert_eq!(
            tilde_row_general(5, 3).unwrap(),
            row_bruteforce(5, 3).unwrap()
        );
        assert_eq!(
            tilde_row_general(12, 2).unwrap().entries(),
            &[(2, 4), (3, 2), (4, 5), (5, 2)]
        );
        assert!(tilde_row_general(12, 6).is_err());
    }

    #[test]
    fn large_prime_is_sparse() {
        let p = 1_000_000_007;
        let row = tilde_row_general(3 * p + 2, p).unwrap();
        assert_eq!(row.total(), u128::from(3 * p + 3));
        assert_eq!(row.theta(0), 4 * 3);
    }

    #[test]
    fn pair_predecessor() {
        for n in 1..200 {
            let pair = tilde_row_pair(n);
            assert_eq!(pair.current, tilde_row(n));
            assert_eq!(pair.predecessor, tilde_row(n - 1));
        }
        assert!(tilde_row_pair(0).predecessor.is_empty());
    }

    #[test]
    fn enumerate_small_intervals() {
        let mut seen = Vec::new();
        enumerate_interval(0, |n, row| seen.push((n, row.entries().to_vec()))).unwrap();
        assert_eq!(seen, vec![(1, vec![(1, 2)])]);

        seen.clear();
        enumerate_interval(1, |n, row| seen.push((n, row.entries().to_vec()))).unwrap();
        assert_eq!(seen, vec![(2, vec![(1, 2), (2, 1)]), (3, vec![(2, 4)])]);

        assert!(enumerate_interval(MAX_INTERVAL_LAMBDA + 1, |_, _| {}).is_err());
    }

    #[test]
    fn enumeration_visits_each_once_in_order() {
        for lambda in 0..=12u32 {
            let mut expected = 1u64 << lambda;
            let mut mass = 0u128;
            enumerate_interval(lambda, |n, row| {
                assert_eq!(n, expected);
                assert_eq!(row, &tilde_row(n));
                expected += 1;
                mass += row.total();
            })
            .unwrap();
            assert_eq!(expected, 1u64 << (lambda + 1));
            // Σ_{n ∈ I_λ} (n+1) = 3·4^λ/2 + 2^λ/2
            let four = 1u128 << (2 * lambda);
            assert_eq!(2 * mass, 3 * four + (1u128 << lambda));
        }
    }

    #[test]
    fn fold_matches_sequential() {
        for lambda in [0u32, 3, 9, 12] {
            let folded = fold_interval(
                lambda,
                Vec::new,
                |acc: &mut Vec<(u64, u128, u128)>, n, cur, pred| {
                    acc.push((n, cur.iter().sum(), pred.iter().sum()))
                },
                |mut a, b| {
                    a.extend(b);
                    a
                },
            )
            .unwrap();
            let expected: Vec<_> = ((1u64 << lambda)..(1u64 << (lambda + 1)))
                .map(|n| (n, u128::from(n) + 1, u128::from(n)))
                .collect();
            assert_eq!(folded, expected);
        }
    }
}
