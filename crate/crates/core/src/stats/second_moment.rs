//! Second moments `E_n (Θ̃(λ+u, n) − v·n − w)²` over `I_λ`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::clt::Normalization;
use super::normal::phi;
use super::{partial_sums_at, power_sums};
use crate::error::{guard, Error, Result};
use crate::gf::interval_sums;

pub const MAX_SECOND_MOMENT_LAMBDA: u32 = 20;

/// Fixed-point scale applied to `v` and `w` before the exact accumulation.
const SCALE_BITS: u32 = 64;

/// How the centering `v` is chosen for a given `(λ, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CenteringRule {
    /// `Φ(u/√λ) + shift`.
    Phi { shift: f64 },
    Constant(f64),
}

impl CenteringRule {
    fn value(self, lambda: u32, u: i64) -> f64 {
        match self {
            Self::Phi { shift } => phi(u as f64 / f64::from(lambda).sqrt()) + shift,
            Self::Constant(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondMomentConfig {
    pub v: CenteringRule,
    pub w: f64,
    /// `N` centers on `v·n`, `NPlusOne` on `v·(n + 1)`.
    pub centering: Normalization,
}

impl Default for SecondMomentConfig {
    fn default() -> Self {
        Self {
            v: CenteringRule::Phi { shift: 0.0 },
            w: 0.0,
            centering: Normalization::N,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondMomentReport {
    pub lambda: u32,
    pub u: i64,
    pub v: f64,
    pub w: f64,
    #[serde(rename = "E")]
    pub second_moment: f64,
    #[serde(rename = "E_exact", serialize_with = "crate::format::serialize_rational")]
    pub exact: BigRational,
    /// `E·√λ / 4^λ`.
    pub normalized: f64,
}

impl SecondMomentReport {
    pub const CSV_HEADER: &'static str = "lambda,u,v,w,E,normalized";

    pub fn to_csv_row(&self) -> String {
        use crate::format::float;
        format!(
            "{},{},{},{},{},{}",
            self.lambda,
            self.u,
            float(self.v),
            float(self.w),
            float(self.second_moment),
            float(self.normalized)
        )
    }
}

fn fixed_point(x: f64) -> Result<BigInt> {
    if !x.is_finite() || x.abs() >= 1e9 {
        return Err(Error::InvalidArgument(format!("centering value {x} out of range")));
    }
    let scaled = (x * 2f64.powi(SCALE_BITS as i32)).round();
    Ok(BigInt::from(scaled as i128))
}

/// Exact second moments for each `u`, with `v`, `w` rounded to multiples of `2^-64`.
pub fn second_moment_scan(
    lambda: u32,
    us: &[i64],
    config: &SecondMomentConfig,
) -> Result<Vec<SecondMomentReport>> {
    if lambda == 0 {
        return Err(Error::InvalidArgument("second moments need lambda >= 1".into()));
    }
    guard("lambda", u64::from(lambda), u64::from(MAX_SECOND_MOMENT_LAMBDA))?;
    let sums = interval_sums(lambda, false)?;
    let (s1, s2) = power_sums(lambda);
    let (s1, s2) = (BigInt::from(s1), BigInt::from(s2));
    let count = BigInt::from(1u64 << lambda);
    let one = BigInt::from(1u8) << SCALE_BITS;
    let denominator = BigInt::from(1u8) << (2 * SCALE_BITS + lambda);
    us.iter()
        .map(|&u| {
            let v = config.v.value(lambda, u);
            let big_v = fixed_point(v)?;
            let mut big_w = fixed_point(config.w)?;
            if config.centering == Normalization::NPlusOne {
                big_w += &big_v;
            }
            let (tt, tn, t) = partial_sums_at(&sums, i64::from(lambda) + u);
            let (tt, tn, t) = (BigInt::from(tt), BigInt::from(tn), BigInt::from(t));
            // Σ (T·2^64 − V·n − W)²
            let total = &one * &one * tt - 2 * &one * &big_v * tn - 2 * &one * &big_w * t
                + &big_v * &big_v * &s2
                + 2 * &big_v * &big_w * &s1
                + &big_w * &big_w * &count;
            let exact = BigRational::new(total, denominator.clone());
            let e = exact.to_f64().unwrap_or(f64::NAN);
            Ok(SecondMomentReport {
                lambda,
                u,
                v,
                w: config.w,
                second_moment: e,
                exact,
                normalized: e * f64::from(lambda).sqrt() / 4f64.powi(lambda as i32),
            })
        })
        .collect()
}

/// `E(n)` and `E(n²)` over `I_λ` in closed form and by direct summation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformMoments {
    pub lambda: u32,
    #[serde(serialize_with = "crate::format::serialize_rational")]
    pub mean_closed: BigRational,
    #[serde(serialize_with = "crate::format::serialize_rational")]
    pub mean_direct: BigRational,
    #[serde(serialize_with = "crate::format::serialize_rational")]
    pub square_closed: BigRational,
    #[serde(serialize_with = "crate::format::serialize_rational")]
    pub square_direct: BigRational,
}

impl UniformMoments {
    pub fn agrees(&self) -> bool {
        self.mean_closed == self.mean_direct && self.square_closed == self.square_direct
    }
}

/// Rows up to this `λ` are summed one by one; beyond it the direct side
/// uses Faulhaber's sums.
const UNIFORM_LOOP_LAMBDA: u32 = 24;

pub fn uniform_moments(lambda: u32) -> UniformMoments {
    let q = |a: BigInt, b: BigInt| BigRational::new(a, b);
    let pow2 = BigInt::from(1u8) << lambda;
    let pow4 = &pow2 * &pow2;
    let int = |x: i64| BigInt::from(x);
    let mean_closed = q(int(3) * &pow2 - 1, int(2));
    let square_closed = q(int(14) * &pow4 - int(9) * &pow2 + 1, int(6));

    let (sum, sum_sq) = if lambda <= UNIFORM_LOOP_LAMBDA {
        let (mut a, mut b) = (0u128, 0u128);
        for n in (1u128 << lambda)..(1u128 << (lambda + 1)) {
            a += n;
            b += n * n;
        }
        (BigInt::from(a), BigInt::from(b))
    } else {
        let below = |m: &BigInt| {
            let m1 = m - 1;
            (m * &m1 / 2, &m1 * m * (2 * m - 1) / 6)
        };
        let (a1, a2) = below(&pow2);
        let (b1, b2) = below(&(2 * &pow2));
        (b1 - a1, b2 - a2)
    };
    UniformMoments {
        lambda,
        mean_direct: q(sum, pow2.clone()),
        square_direct: q(sum_sq, pow2),
        mean_closed,
        square_closed,
    }
}
