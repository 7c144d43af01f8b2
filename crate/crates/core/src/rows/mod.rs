//! Row counts `ϑ_p(j, n)`: how many entries of row `n` of Pascal's triangle
//! are divisible by exactly `p^j`.
//!
//! Rows are stored in the shifted ("rarefied") indexing `k = s_p(n) + (p−1)·j`,
//! under which the counts satisfy a digit recurrence in `n`. The brute-force
//! scan in this module is the oracle for the digit DP in [`dp`].

mod dp;
mod howard;
mod mean;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{guard, Result};
use crate::valuation::{self, check_prime, digit_sum, nu_binomial};

pub use dp::{
    enumerate_interval, fold_interval, tilde_row, tilde_row_general, tilde_row_pair,
    DenseRow, RowPair, MAX_INTERVAL_LAMBDA,
};
pub use howard::{howard_check, howard_ratio};
pub use mean::{digit_sum_prefix, mu_n, MeanValuation};

/// Largest `n` accepted by [`row_bruteforce`].
pub const MAX_BRUTEFORCE_N: u64 = 1 << 24;

/// The shifted row profile `k ↦ ϑ̃_p(k, n)` of a single `n`.
///
/// Only nonzero counts are stored, sorted by `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseRow {
    n: u64,
    p: u64,
    entries: Vec<(u64, u128)>,
}

impl SparseRow {
    /// Builds a row from `(k, count)` pairs; zero counts are dropped and
    /// repeated keys are summed.
    pub fn from_entries(n: u64, p: u64, entries: impl IntoIterator<Item = (u64, u128)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in entries {
            *map.entry(k).or_insert(0u128) += c;
        }
        Self {
            n,
            p,
            entries: map.into_iter().filter(|&(_, c)| c != 0).collect(),
        }
    }

    pub(crate) fn from_dense(n: u64, counts: &[u128]) -> Self {
        Self {
            n,
            p: 2,
            entries: counts
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c != 0)
                .map(|(k, &c)| (k as u64, c))
                .collect(),
        }
    }

    /// The empty row, used as the predecessor of row 0.
    pub fn empty(n: u64, p: u64) -> Self {
        Self {
            n,
            p,
            entries: Vec::new(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Nonzero `(k, ϑ̃(k, n))` pairs in increasing `k`.
    pub fn entries(&self) -> &[(u64, u128)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `ϑ̃(k, n)`; zero outside the support, including negative `k`.
    pub fn get(&self, k: i64) -> u128 {
        let Ok(k) = u64::try_from(k) else {
            return 0;
        };
        self.entries
            .binary_search_by_key(&k, |&(key, _)| key)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    /// Sum of all counts; `n + 1` for a genuine row.
    pub fn total(&self) -> u128 {
        self.entries.iter().map(|&(_, c)| c).sum()
    }

    pub fn min_key(&self) -> Option<u64> {
        self.entries.first().map(|&(k, _)| k)
    }

    pub fn max_key(&self) -> Option<u64> {
        self.entries.last().map(|&(k, _)| k)
    }

    /// `Θ̃(k, n) = Σ_{i ≤ k} ϑ̃(i, n)`.
    pub fn partial_sum(&self, k: i64) -> u128 {
        if k < 0 {
            return 0;
        }
        self.entries
            .iter()
            .take_while(|&&(key, _)| key <= k as u64)
            .map(|&(_, c)| c)
            .sum()
    }

    /// `s_p(n)`, the smallest admissible key.
    pub fn digit_sum(&self) -> u64 {
        digit_sum(self.n, self.p).expect("row base is at least 2")
    }

    /// Re-indexes to the valuation profile `j ↦ ϑ_p(j, n)`.
    pub fn valuation_profile(&self) -> Vec<(u64, u128)> {
        let s = self.digit_sum();
        self.entries
            .iter()
            .map(|&(k, c)| ((k - s) / (self.p - 1), c))
            .collect()
    }

    /// `ϑ_p(j, n)`; zero for negative `j`.
    pub fn theta(&self, j: i64) -> u128 {
        if j < 0 {
            return 0;
        }
        let k = self.digit_sum() as i128 + (self.p as i128 - 1) * j as i128;
        i64::try_from(k).map(|k| self.get(k)).unwrap_or(0)
    }

    /// `Θ_p(j, n) = Σ_{0 ≤ i ≤ j} ϑ_p(i, n)`.
    pub fn theta_partial(&self, j: i64) -> u128 {
        if j < 0 {
            return 0;
        }
        let k = self.digit_sum() as i128 + (self.p as i128 - 1) * j as i128;
        i64::try_from(k)
            .map(|k| self.partial_sum(k))
            .unwrap_or_else(|_| self.total())
    }

    /// JSON object `{"n":…,"p":…,"entries":{"k":count,…}}` with keys in
    /// increasing numeric order.
    pub fn to_json(&self) -> String {
        let mut out = format!("{{\"n\":{},\"p\":{},\"entries\":{{", self.n, self.p);
        for (i, (k, c)) in self.entries.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "\"{k}\":{c}").unwrap();
        }
        out.push_str("}}");
        out
    }

    /// CSV lines `n,k,count` without a header.
    pub fn to_csv_rows(&self) -> String {
        let mut out = String::new();
        for (k, c) in &self.entries {
            writeln!(out, "{},{},{}", self.n, k, c).unwrap();
        }
        out
    }
}

/// Serializable mirror of a row, matching the JSON produced by [`SparseRow::to_json`].
#[derive(Debug, Clone, Serialize)]
pub struct RowRecord {
    pub n: u64,
    pub p: u64,
    pub entries: BTreeMap<u64, u128>,
}

impl From<&SparseRow> for RowRecord {
    fn from(row: &SparseRow) -> Self {
        Self {
            n: row.n,
            p: row.p,
            entries: row.entries.iter().copied().collect(),
        }
    }
}

/// Counts valuations over the whole row by scanning every `t`.
pub fn row_bruteforce(n: u64, p: u64) -> Result<SparseRow> {
    check_prime(p)?;
    guard("n", n, MAX_BRUTEFORCE_N)?;
    let mut by_valuation: BTreeMap<u64, u128> = BTreeMap::new();
    for t in 0..=n {
        *by_valuation.entry(nu_binomial(n, t as i64, p)?).or_insert(0) += 1;
    }
    let s = digit_sum(n, p)?;
    Ok(SparseRow::from_entries(
        n,
        p,
        by_valuation.into_iter().map(|(j, c)| (s + (p - 1) * j, c)),
    ))
}

/// `ϑ_p(0, n) = ∏ (n_i + 1)` over the base-`p` digits of `n` (Fine).
pub fn fine_count(n: u64, p: u64) -> Result<u128> {
    Ok(valuation::digits(n, p)?
        .digits()
        .iter()
        .map(|&d| u128::from(d) + 1)
        .product())
}

/// The exact row `ϑ̃_p(·, n)`, using the binary fast path for `p = 2`.
pub fn row(n: u64, p: u64) -> Result<SparseRow> {
    if p == 2 {
        Ok(tilde_row(n))
    } else {
        tilde_row_general(n, p)
    }
}

/// `Θ_p(j, n)`: number of entries of row `n` not divisible by `p^{j+1}`.
/// Zero for `j < 0`, `n + 1` once `j` reaches the largest valuation.
pub fn theta_partial(j: i64, n: u64, p: u64) -> Result<u128> {
    Ok(row(n, p)?.theta_partial(j))
}

/// `Θ_p(⌊x⌋, n)` for real `x`.
pub fn theta_partial_real(x: f64, n: u64, p: u64) -> Result<u128> {
    let j = x.floor();
    let j = if j < i64::MIN as f64 {
        i64::MIN
    } else if j > i64::MAX as f64 {
        i64::MAX
    } else {
        j as i64
    };
    theta_partial(j, n, p)
}

/// Shifted partial sum `Θ̃(k, n) = Θ₂(k − s₂(n), n)`.
pub fn theta_tilde(k: i64, n: u64) -> u128 {
    tilde_row(n).partial_sum(k)
}
