use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::tilde_row;

/// `Σ_{0 ≤ t < n} s₂(t)`, counted bit position by bit position.
pub fn digit_sum_prefix(n: u64) -> u128 {
    let n = u128::from(n);
    (0..64)
        .map(|i| {
            let block = 1u128 << (i + 1);
            let half = 1u128 << i;
            (n / block) * half + (n % block).saturating_sub(half)
        })
        .sum()
}

/// Mean 2-adic valuation of the entries of row `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanValuation {
    pub n: u64,
    /// `Σ_j j·ϑ₂(j, n) / (n + 1)`.
    #[serde(serialize_with = "crate::format::serialize_rational")]
    pub from_counts: BigRational,
    /// `2·Σ_{t ≤ n} s₂(t) / (n + 1) − s₂(n)`.
    #[serde(serialize_with = "crate::format::serialize_rational")]
    pub from_digit_sums: BigRational,
    /// `μ_n − log₂(n + 1) + s₂(n)`.
    pub fluctuation: f64,
}

impl MeanValuation {
    pub fn agrees(&self) -> bool {
        self.from_counts == self.from_digit_sums
    }
}

pub fn mu_n(n: u64) -> MeanValuation {
    let row = tilde_row(n);
    let weighted: BigInt = row
        .valuation_profile()
        .into_iter()
        .map(|(j, c)| BigInt::from(j) * BigInt::from(c))
        .sum();
    let size = BigInt::from(u128::from(n) + 1);
    let from_counts = BigRational::new(weighted, size.clone());

    let s = i64::from(n.count_ones());
    let prefix = BigInt::from(digit_sum_prefix(n) + u128::from(n.count_ones()));
    let from_digit_sums =
        BigRational::new(2 * prefix, size) - BigRational::from_integer(BigInt::from(s));

    let fluctuation = from_counts.to_f64().unwrap_or(f64::NAN) - ((n as f64) + 1.0).log2()
        + s as f64;
    MeanValuation {
        n,
        from_counts,
        from_digit_sums,
        fluctuation,
    }
}
