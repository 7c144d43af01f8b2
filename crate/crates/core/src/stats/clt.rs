//! Distance between a row's normalized partial sums and the Gaussian CDF.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::normal::phi;
use super::trend::quantiles;
use crate::error::{guard, Error, Result};
use crate::rows::{fold_interval, tilde_row, MAX_INTERVAL_LAMBDA};

/// Largest `λ` for a full scan of `I_λ`.
pub const MAX_FULL_SCAN_LAMBDA: u32 = 22;
/// Largest `λ` for sampling; `n` must fit in a `u64`.
pub const MAX_SAMPLE_LAMBDA: u32 = 62;

/// Denominator applied to the partial sums `Θ̃(k, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `Θ̃ / (n + 1)`, so the step function ends at 1.
    #[default]
    NPlusOne,
    /// `Θ̃ / n`.
    N,
}

impl Normalization {
    fn denominator(self, n: u64) -> f64 {
        match self {
            Self::NPlusOne => n as f64 + 1.0,
            Self::N => n as f64,
        }
    }
}

pub(crate) fn check_interval(n: u64, lambda: u32) -> Result<()> {
    if lambda == 0 || lambda > 63 || n >> lambda != 1 {
        return Err(Error::OutsideInterval { n, lambda });
    }
    Ok(())
}

/// `Φ((k − λ)/√λ)` for `k = 0..len`.
fn phi_grid(lambda: u32, len: usize) -> Vec<f64> {
    let root = f64::from(lambda).sqrt();
    (0..len)
        .map(|k| phi((k as f64 - f64::from(lambda)) / root))
        .collect()
}

/// Supremum over the step function with values `counts` (dense in `k`),
/// read against the grid `Φ((k − λ)/√λ)`.
fn sup_dense(counts: &[u128], denom: f64, lambda: u32, grid: &[f64]) -> f64 {
    let root = f64::from(lambda).sqrt();
    let g = |k: usize| match grid.get(k) {
        Some(&v) => v,
        None => phi((k as f64 - f64::from(lambda)) / root),
    };
    let mut sup = 0.0f64;
    let mut running = 0u128;
    let mut started = false;
    for (k, &c) in counts.iter().enumerate() {
        if c != 0 && !started {
            started = true;
            // step 0 on (−∞, k); worst at the right end
            sup = sup.max(g(k));
        }
        running += c;
        if started {
            let v = running as f64 / denom;
            sup = sup.max((v - g(k)).abs()).max((v - g(k + 1)).abs());
        }
    }
    sup
}

/// `sup_u |Θ̃(λ+u, n)/(n+1) − Φ(u/√λ)|` for `n ∈ I_λ`, `λ ≥ 1`.
pub fn sup_distance(n: u64, lambda: u32) -> Result<f64> {
    sup_distance_with(n, lambda, Normalization::NPlusOne)
}

pub fn sup_distance_with(n: u64, lambda: u32, norm: Normalization) -> Result<f64> {
    check_interval(n, lambda)?;
    let row = tilde_row(n);
    let len = row.max_key().map_or(0, |k| k as usize + 1);
    let mut dense = vec![0u128; len];
    for &(k, c) in row.entries() {
        dense[k as usize] = c;
    }
    Ok(sup_dense(&dense, norm.denominator(n), lambda, &phi_grid(lambda, len + 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    Full,
    Sample { count: u64, seed: u64 },
}

/// Bad-set statistics for one `(λ, ε)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltReport {
    pub lambda: u32,
    pub epsilon: f64,
    /// `"full"` or `"sample"`.
    pub mode: &'static str,
    pub seed: Option<u64>,
    /// Number of rows examined.
    pub size: u64,
    pub bad_count: u64,
    #[serde(serialize_with = "crate::format::serialize_rational")]
    pub fraction: BigRational,
    pub fraction_sqrtlambda: f64,
    /// Sup distances at the quantiles [`QUANTILE_LEVELS`].
    pub sup_distance_quantiles: Vec<f64>,
}

pub const QUANTILE_LEVELS: [f64; 4] = [0.5, 0.9, 0.99, 1.0];

impl CltReport {
    pub const CSV_HEADER: &'static str =
        "lambda,epsilon,mode,size,bad_count,fraction,fraction_sqrtlambda";

    pub fn to_csv_row(&self) -> String {
        use crate::format::{float, rational};
        format!(
            "{},{},{},{},{},{},{}",
            self.lambda,
            float(self.epsilon),
            self.mode,
            self.size,
            self.bad_count,
            rational(&self.fraction),
            float(self.fraction_sqrtlambda)
        )
    }
}

/// Draws `n ∈ I_λ` as a leading 1 followed by `λ` uniform bits.
pub fn sample_interval(lambda: u32, count: u64, seed: u64) -> Result<Vec<u64>> {
    guard("lambda", u64::from(lambda), u64::from(MAX_SAMPLE_LAMBDA))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = (1u64 << lambda) - 1;
    Ok((0..count)
        .map(|_| (1u64 << lambda) | (rng.random::<u64>() & mask))
        .collect())
}

/// Counts `n ∈ I_λ` with `sup_distance(n, λ) ≥ ε`.
pub fn clt_scan(lambda: u32, epsilon: f64, mode: ScanMode) -> Result<CltReport> {
    if lambda == 0 {
        return Err(Error::InvalidArgument("clt_scan needs lambda >= 1".into()));
    }
    let grid = phi_grid(lambda, 2 * lambda as usize + 4);
    let (mut distances, seed) = match mode {
        ScanMode::Full => {
            guard("lambda", u64::from(lambda), u64::from(MAX_FULL_SCAN_LAMBDA))?;
            let d = fold_interval(
                lambda,
                Vec::new,
                |acc: &mut Vec<f64>, n, cur, _| acc.push(sup_dense(cur, n as f64 + 1.0, lambda, &grid)),
                |mut a, b| {
                    a.extend(b);
                    a
                },
            )?;
            (d, None)
        }
        ScanMode::Sample { count, seed } => {
            guard("sample count", count, 1 << MAX_FULL_SCAN_LAMBDA)?;
            let d = sample_interval(lambda, count, seed)?
                .into_iter()
                .map(|n| sup_distance(n, lambda))
                .collect::<Result<Vec<_>>>()?;
            (d, Some(seed))
        }
    };
    let size = distances.len() as u64;
    let bad_count = distances.iter().filter(|&&d| d >= epsilon).count() as u64;
    let fraction = BigRational::new(BigInt::from(bad_count), BigInt::from(size.max(1)));
    let fraction_sqrtlambda = fraction.to_f64().unwrap_or(f64::NAN) * f64::from(lambda).sqrt();
    Ok(CltReport {
        lambda,
        epsilon,
        mode: if seed.is_some() { "sample" } else { "full" },
        seed,
        size,
        bad_count,
        fraction,
        fraction_sqrtlambda,
        sup_distance_quantiles: quantiles(&mut distances, &QUANTILE_LEVELS),
    })
}

/// Bad fraction over `[1, 2^Λ)` aggregated from the intervals `I_λ`, `1 ≤ λ < Λ`
/// (`n = 1` has no Gaussian comparison and is counted as good).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrefixReport {
    pub lambda_total: u32,
    pub epsilon: f64,
    pub bad_count: u64,
    #[serde(serialize_with = "crate::format::serialize_rational")]
    pub fraction: BigRational,
    /// `fraction · √(log₂ N)` with `N = 2^Λ`.
    pub fraction_sqrtlog: f64,
}

pub fn prefix_scan(lambda_total: u32, epsilon: f64) -> Result<Vec<PrefixReport>> {
    guard("lambda", u64::from(lambda_total), u64::from(MAX_FULL_SCAN_LAMBDA) + 1)?;
    let mut out = Vec::new();
    let mut bad = 0u64;
    for big in 2..=lambda_total {
        bad += clt_scan(big - 1, epsilon, ScanMode::Full)?.bad_count;
        let fraction = BigRational::new(BigInt::from(bad), BigInt::from(1u64 << big));
        out.push(PrefixReport {
            lambda_total: big,
            epsilon,
            bad_count: bad,
            fraction_sqrtlog: fraction.to_f64().unwrap_or(f64::NAN) * f64::from(big).sqrt(),
            fraction,
        });
    }
    Ok(out)
}

const _: () = assert!(MAX_FULL_SCAN_LAMBDA <= MAX_INTERVAL_LAMBDA);
