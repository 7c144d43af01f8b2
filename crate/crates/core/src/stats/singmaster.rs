//! Averages `(1/N) Σ_{n<N} Θ_p(j, n)/(n + 1)`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{guard, Error, Result};
use crate::rows::theta_partial;

pub const MAX_SINGMASTER_N: u64 = 1 << 20;

fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            for m in (i * i..=n).step_by(i) {
                composite[m] = true;
            }
        }
    }
    out
}

/// Exact average over `0 ≤ n < N`.
///
/// Summed over the common denominator `L = lcm(1, …, N)`; the result is
/// reduced by dividing out the primes of `L·N` directly, which avoids a
/// big-integer gcd.
pub fn singmaster_average(n_total: u64, j: u32, p: u64) -> Result<BigRational> {
    if n_total == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    guard("N", n_total, MAX_SINGMASTER_N)?;
    let primes = primes_up_to(n_total);
    let mut lcm = BigUint::from(1u8);
    let mut exponents = Vec::with_capacity(primes.len());
    for &q in &primes {
        let mut e = 0u32;
        let mut power = q;
        while power <= n_total {
            lcm *= q;
            e += 1;
            power = power.saturating_mul(q);
        }
        let mut rest = n_total;
        while rest.is_multiple_of(q) {
            rest /= q;
            e += 1;
        }
        exponents.push(e);
    }

    let mut numerator = BigUint::zero();
    for n in 0..n_total {
        let count = theta_partial(i64::from(j), n, p)?;
        numerator += (&lcm / (n + 1)) * BigUint::from(count);
    }
    let mut denominator = lcm * n_total;

    for (&q, &e) in primes.iter().zip(&exponents) {
        for _ in 0..e {
            if (&numerator % q).is_zero() {
                numerator /= q;
                denominator /= q;
            } else {
                break;
            }
        }
    }
    Ok(BigRational::new_raw(BigInt::from(numerator), BigInt::from(denominator)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingmasterPoint {
    pub lambda: u32,
    pub n_total: u64,
    pub j: u32,
    pub p: u64,
    pub average: f64,
    #[serde(skip)]
    pub exact: BigRational,
}

/// Averages along `N = 2^λ`.
pub fn singmaster_scan(lambdas: &[u32], j: u32, p: u64) -> Result<Vec<SingmasterPoint>> {
    lambdas
        .iter()
        .map(|&lambda| {
            guard("lambda", u64::from(lambda), u64::from(MAX_SINGMASTER_N.ilog2()))?;
            let n_total = 1u64 << lambda;
            let exact = singmaster_average(n_total, j, p)?;
            Ok(SingmasterPoint {
                lambda,
                n_total,
                j,
                p,
                average: exact.to_f64().unwrap_or(f64::NAN),
                exact,
            })
        })
        .collect()
}
