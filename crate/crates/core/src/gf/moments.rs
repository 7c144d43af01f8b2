//! Interval moments computed by direct summation over `n ∈ [2^λ, 2^{λ+1})`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{guard, Result};
use crate::rows::fold_interval;

pub const MAX_BIVARIATE_LAMBDA: u32 = 14;
pub const MAX_TRIVARIATE_LAMBDA: u32 = 9;

/// Exact integer sums over one interval, indexed by `k ≤ k_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSums {
    pub lambda: u32,
    pub k_max: u32,
    /// `Σ ϑ̃(k, n)`
    pub theta: Vec<u128>,
    /// `Σ n·ϑ̃(k, n)`
    pub n_theta: Vec<u128>,
    /// `Σ ϑ̃(k, n)²`
    pub theta_sq: Vec<u128>,
    /// `Σ Θ̃(k, n)`
    pub cum: Vec<u128>,
    /// `Σ n·Θ̃(k, n)`
    pub n_cum: Vec<u128>,
    /// `Σ Θ̃(k, n)²`
    pub cum_sq: Vec<u128>,
    /// `a`, `b`, `c` flattened row-major as `[k·(k_max+1) + ℓ]`, when requested.
    pub products: Option<[Vec<u128>; 3]>,
}

impl IntervalSums {
    fn empty(lambda: u32, k_max: u32, trivariate: bool) -> Self {
        let len = k_max as usize + 1;
        Self {
            lambda,
            k_max,
            theta: vec![0; len],
            n_theta: vec![0; len],
            theta_sq: vec![0; len],
            cum: vec![0; len],
            n_cum: vec![0; len],
            cum_sq: vec![0; len],
            products: trivariate.then(|| std::array::from_fn(|_| vec![0; len * len])),
        }
    }

    fn merge(mut self, other: Self) -> Self {
        let pairs = [
            (&mut self.theta, &other.theta),
            (&mut self.n_theta, &other.n_theta),
            (&mut self.theta_sq, &other.theta_sq),
            (&mut self.cum, &other.cum),
            (&mut self.n_cum, &other.n_cum),
            (&mut self.cum_sq, &other.cum_sq),
        ];
        for (a, b) in pairs {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        if let (Some(mine), Some(theirs)) = (self.products.as_mut(), other.products.as_ref()) {
            for (a, b) in mine.iter_mut().zip(theirs) {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            }
        }
        self
    }

    fn add_row(&mut self, n: u64, cur: &[u128], pred: &[u128]) {
        let n = u128::from(n);
        let mut running = 0u128;
        for k in 0..=self.k_max as usize {
            let t = cur.get(k).copied().unwrap_or(0);
            running += t;
            self.theta[k] += t;
            self.n_theta[k] += n * t;
            self.theta_sq[k] += t * t;
            self.cum[k] += running;
            self.n_cum[k] += n * running;
            self.cum_sq[k] += running * running;
        }
        let Some([a, b, c]) = self.products.as_mut() else {
            return;
        };
        let width = self.k_max as usize + 1;
        let nonzero = |row: &[u128]| -> Vec<(usize, u128)> {
            row.iter()
                .enumerate()
                .take(width)
                .filter(|(_, &v)| v != 0)
                .map(|(i, &v)| (i, v))
                .collect()
        };
        let cur_nz = nonzero(cur);
        let pred_nz = nonzero(pred);
        for &(k, tk) in &cur_nz {
            for &(l, tl) in &cur_nz {
                a[k * width + l] += tk * tl;
            }
            for &(l, pl) in &pred_nz {
                b[k * width + l] += tk * pl;
                c[l * width + k] += pl * tk;
            }
        }
    }

    fn product(&self, which: usize, k: u32, l: u32) -> u128 {
        let width = self.k_max as usize + 1;
        self.products.as_ref().expect("trivariate sums")[which][k as usize * width + l as usize]
    }
}

/// Direct sums over `I_λ` for all `k ≤ 2λ + 4`.
pub fn interval_sums(lambda: u32, trivariate: bool) -> Result<IntervalSums> {
    let k_max = 2 * lambda + 4;
    fold_interval(
        lambda,
        || IntervalSums::empty(lambda, k_max, trivariate),
        |acc, n, cur, pred| acc.add_row(n, cur, pred),
        IntervalSums::merge,
    )
}

/// Interval moments `m, 𝔪, m′, 𝔪′, m⁽²⁾, 𝔪⁽²⁾` (each `(1/2^λ)·Σ_{n∈I_λ} …`)
/// and, for small `λ`, the unnormalized trivariate sums `a, b, c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentTable {
    pub lambda: u32,
    pub k_max: u32,
    pub m: Vec<BigRational>,
    pub frak_m: Vec<BigRational>,
    pub m_prime: Vec<BigRational>,
    pub frak_m_prime: Vec<BigRational>,
    pub m2: Vec<BigRational>,
    pub frak_m2: Vec<BigRational>,
    pub trivariate: Option<TrivariateSums>,
}

/// `a_{λ,k,ℓ} = Σ ϑ̃(k,n)ϑ̃(ℓ,n)`, `b = Σ ϑ̃(k,n)ϑ̃(ℓ,n−1)`, `c = Σ ϑ̃(k,n−1)ϑ̃(ℓ,n)`,
/// indexed `[k][ℓ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivariateSums {
    pub a: Vec<Vec<BigInt>>,
    pub b: Vec<Vec<BigInt>>,
    pub c: Vec<Vec<BigInt>>,
}

impl MomentTable {
    /// Value of a bivariate family at `k`, zero beyond the table or for `k < 0`.
    pub fn get(family: &[BigRational], k: i64) -> BigRational {
        usize::try_from(k)
            .ok()
            .and_then(|k| family.get(k).cloned())
            .unwrap_or_else(|| BigRational::from_integer(0.into()))
    }
}

impl TrivariateSums {
    pub fn get(table: &[Vec<BigInt>], k: i64, l: i64) -> BigInt {
        match (usize::try_from(k), usize::try_from(l)) {
            (Ok(k), Ok(l)) => table
                .get(k)
                .and_then(|row| row.get(l))
                .cloned()
                .unwrap_or_default(),
            _ => BigInt::default(),
        }
    }
}

fn dyadic(values: &[u128], lambda: u32) -> Vec<BigRational> {
    let den = BigInt::from(1u8) << lambda;
    values
        .iter()
        .map(|&v| BigRational::new(BigInt::from(v), den.clone()))
        .collect()
}

pub(crate) fn table_from_sums(sums: &IntervalSums) -> MomentTable {
    let lambda = sums.lambda;
    let trivariate = sums.products.as_ref().map(|_| {
        let range = 0..=sums.k_max;
        let grid = |which| {
            range
                .clone()
                .map(|k| {
                    range
                        .clone()
                        .map(|l| BigInt::from(sums.product(which, k, l)))
                        .collect()
                })
                .collect()
        };
        TrivariateSums {
            a: grid(0),
            b: grid(1),
            c: grid(2),
        }
    });
    MomentTable {
        lambda,
        k_max: sums.k_max,
        m: dyadic(&sums.theta, lambda),
        frak_m: dyadic(&sums.cum, lambda),
        m_prime: dyadic(&sums.n_theta, lambda),
        frak_m_prime: dyadic(&sums.n_cum, lambda),
        m2: dyadic(&sums.theta_sq, lambda),
        frak_m2: dyadic(&sums.cum_sq, lambda),
        trivariate,
    }
}

/// Exact moment tables for one `λ ≤ 14`; the trivariate sums are included
/// when `λ ≤ 9`.
pub fn moments_direct(lambda: u32) -> Result<MomentTable> {
    guard("lambda", u64::from(lambda), u64::from(MAX_BIVARIATE_LAMBDA))?;
    let sums = interval_sums(lambda, lambda <= MAX_TRIVARIATE_LAMBDA)?;
    Ok(table_from_sums(&sums))
}
