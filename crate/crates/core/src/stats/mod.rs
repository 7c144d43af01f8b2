//! Gaussian comparison of rows, second moments, interval averages.

mod clt;
mod lemma;
mod normal;
mod second_moment;
mod singmaster;
mod trend;

pub use clt::{
    clt_scan, prefix_scan, sample_interval, sup_distance, sup_distance_with, CltReport,
    Normalization, PrefixReport, ScanMode, MAX_FULL_SCAN_LAMBDA, MAX_SAMPLE_LAMBDA,
    QUANTILE_LEVELS,
};
pub use lemma::{lemma_ratio_checks, LemmaRow, LemmaTable, SlopeFit, UPoint, MAX_LEMMA_LAMBDA};
pub use normal::phi;
pub use second_moment::{
    second_moment_scan, uniform_moments, CenteringRule, SecondMomentConfig, SecondMomentReport,
    UniformMoments, MAX_SECOND_MOMENT_LAMBDA,
};
pub use singmaster::{singmaster_average, singmaster_scan, SingmasterPoint, MAX_SINGMASTER_N};
pub use trend::{loglog_slope, quantiles, spearman};

use crate::gf::IntervalSums;

/// `Σ_n (Θ̃(k,n)², n·Θ̃(k,n), Θ̃(k,n))` over `I_λ` for any `k`, using
/// `Θ̃(k, n) = n + 1` past the stored range.
fn partial_sums_at(sums: &IntervalSums, k: i64) -> (u128, u128, u128) {
    if k < 0 {
        return (0, 0, 0);
    }
    match usize::try_from(k).ok().filter(|&k| k < sums.cum.len()) {
        Some(k) => (sums.cum_sq[k], sums.n_cum[k], sums.cum[k]),
        None => {
            let (s1, s2) = power_sums(sums.lambda);
            let count = 1u128 << sums.lambda;
            (s2 + 2 * s1 + count, s2 + s1, s1 + count)
        }
    }
}

/// `(Σ n, Σ n²)` over `n ∈ I_λ`, `λ ≤ 40`.
fn power_sums(lambda: u32) -> (u128, u128) {
    let below = |m: u128| (m * (m - 1) / 2, (m - 1) * m * (2 * m - 1) / 6);
    let (a1, a2) = below(1 << lambda);
    let (b1, b2) = below(1 << (lambda + 1));
    (b1 - a1, b2 - a2)
}
