//! Coefficient-by-coefficient comparison of the closed-form generating
//! functions and the one-step recurrences against direct summation.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::closed_forms::{self, abc_system};
use super::moments::{
    interval_sums, table_from_sums, MomentTable, TrivariateSums, MAX_BIVARIATE_LAMBDA,
    MAX_TRIVARIATE_LAMBDA,
};
use super::series::{Polynomial, TruncatedSeries};
use crate::error::{guard, Result};
use crate::format::serialize_rational;

/// One coefficient where two routes disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub family: String,
    pub lambda: u32,
    pub k: u32,
    pub l: Option<u32>,
    #[serde(serialize_with = "serialize_rational")]
    pub expected: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub got: BigRational,
}

#[derive(Debug, Clone, Default)]
pub struct GfReport {
    /// Number of coefficient comparisons performed.
    pub checked: u64,
    pub discrepancies: Vec<Discrepancy>,
}

impl GfReport {
    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }

    fn compare(&mut self, family: &str, lambda: u32, k: u32, l: Option<u32>, expected: BigRational, got: BigRational) {
        self.checked += 1;
        if expected != got {
            self.discrepancies.push(Discrepancy {
                family: family.to_string(),
                lambda,
                k,
                l,
                expected,
                got,
            });
        }
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn pow2(e: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(1u8) << e)
}

fn delta(a: i64, b: i64) -> BigRational {
    int(i64::from(a == b))
}

fn k_range(lambda: u32) -> std::ops::RangeInclusive<u32> {
    0..=2 * lambda + 4
}

/// Verifies the bivariate closed forms and recurrences for `λ ≤ lambda_max`
/// and the trivariate system for `λ ≤ min(lambda_max, 8)`.
pub fn verify_gf_identities(lambda_max: u32) -> Result<GfReport> {
    verify_gf_identities_with(lambda_max, lambda_max.min(8))
}

pub fn verify_gf_identities_with(bivariate_max: u32, trivariate_max: u32) -> Result<GfReport> {
    guard("lambda", u64::from(bivariate_max), u64::from(MAX_BIVARIATE_LAMBDA))?;
    guard("trivariate lambda", u64::from(trivariate_max), u64::from(MAX_TRIVARIATE_LAMBDA))?;
    let tables: Vec<MomentTable> = (0..=bivariate_max.max(trivariate_max))
        .map(|lambda| {
            interval_sums(lambda, lambda <= trivariate_max).map(|s| table_from_sums(&s))
        })
        .collect::<Result<_>>()?;
    let mut report = GfReport::default();
    check_bivariate(&mut report, &tables[..=bivariate_max as usize])?;
    check_trivariate(&mut report, &tables[..=trivariate_max as usize])?;
    Ok(report)
}

fn check_bivariate(report: &mut GfReport, tables: &[MomentTable]) -> Result<()> {
    let top = tables.len() as u32 - 1;
    let bounds = [top, 2 * top + 4, 0];
    let families: [(&str, _, fn(&MomentTable) -> &Vec<BigRational>); 4] = [
        ("M", closed_forms::m_gf(), |t| &t.m),
        ("frak_M", closed_forms::frak_m_gf(), |t| &t.frak_m),
        ("M_prime", closed_forms::m_prime_gf(), |t| &t.m_prime),
        ("frak_M_prime", closed_forms::frak_m_prime_gf(), |t| &t.frak_m_prime),
    ];
    let mut m_series = None;
    for (name, gf, pick) in families {
        let series = gf.expand(2, bounds)?;
        for t in tables {
            for k in k_range(t.lambda) {
                report.compare(
                    name,
                    t.lambda,
                    k,
                    None,
                    pick(t)[k as usize].clone(),
                    series.coefficient([t.lambda, k, 0]),
                );
            }
        }
        if name == "M" {
            m_series = Some(series);
        }
    }

    // 𝔐 = M/(1−y): partial sums of the expanded M against the direct 𝔪.
    let partial = m_series.expect("M expanded").partial_sums(1)?;
    for t in tables {
        for k in k_range(t.lambda) {
            report.compare("frak_M_partial", t.lambda, k, None, t.frak_m[k as usize].clone(), partial.coefficient([t.lambda, k, 0]));
        }
    }

    for t in tables {
        let lambda = i64::from(t.lambda);
        for k in k_range(t.lambda) {
            let ki = i64::from(k);
            let (m_pred, mp_pred) = if t.lambda == 0 {
                (int(2) * delta(ki, 1), int(2) * delta(ki, 1))
            } else {
                let prev = &tables[t.lambda as usize - 1];
                let m = |j| MomentTable::get(&prev.m, j);
                let mp = |j| MomentTable::get(&prev.m_prime, j);
                let half = BigRational::new(1.into(), 2.into());
                let m_next = &half * (m(ki - 2) + int(2) * m(ki - 1) + m(ki))
                    + &half * delta(lambda, ki - 1)
                    - delta(lambda, ki - 2);
                let mp_next = mp(ki) + int(2) * mp(ki - 1) + mp(ki - 2) + m(ki - 1) + m(ki - 2)
                    + pow2(t.lambda - 1) * delta(lambda, ki - 1)
                    - pow2(t.lambda + 1) * delta(lambda, ki - 2);
                (m_next, mp_next)
            };
            report.compare("m_rec", t.lambda, k, None, t.m[k as usize].clone(), m_pred);
            report.compare("m_prime_rec", t.lambda, k, None, t.m_prime[k as usize].clone(), mp_pred);
        }
    }
    Ok(())
}

fn check_trivariate(report: &mut GfReport, tables: &[MomentTable]) -> Result<()> {
    let top = tables.len() as u32 - 1;
    let side = 2 * top + 4;
    let bounds = [top, side, side];
    let poly = |s: &str| Polynomial::parse(3, s).expect("fixed polynomial");

    let a = closed_forms::a_gf().expand(3, bounds)?;
    let sys = abc_system();
    // B and C from their closed forms in terms of A.
    let b = sys
        .b_const
        .expand(3, bounds)?
        .add(&a.mul_polynomial(&poly(sys.b_from_a))?)?
        .div_polynomial(&(&Polynomial::one(3) - &poly(sys.b_from_b)))?;
    let c = sys
        .c_const
        .expand(3, bounds)?
        .add(&a.mul_polynomial(&poly(sys.c_from_a))?)?
        .div_polynomial(&(&Polynomial::one(3) - &poly(sys.c_from_c)))?;
    let a_double = closed_forms::a_double_partial_gf().expand(3, bounds)?;

    let series: [(&str, &TruncatedSeries, fn(&TrivariateSums) -> &Vec<Vec<BigInt>>); 3] =
        [("A", &a, |s| &s.a), ("B", &b, |s| &s.b), ("C", &c, |s| &s.c)];
    for t in tables {
        let sums = t.trivariate.as_ref().expect("trivariate sums for small lambda");
        for (name, s, pick) in series {
            for k in k_range(t.lambda) {
                for l in k_range(t.lambda) {
                    let direct = BigRational::from_integer(pick(sums)[k as usize][l as usize].clone());
                    report.compare(name, t.lambda, k, Some(l), direct, s.coefficient([t.lambda, k, l]));
                }
            }
        }
        let scale = pow2(t.lambda).recip();
        for k in k_range(t.lambda) {
            report.compare("M2", t.lambda, k, None, t.m2[k as usize].clone(), a.yz_diagonal(t.lambda, k) * &scale);
            report.compare(
                "frak_M2",
                t.lambda,
                k,
                None,
                t.frak_m2[k as usize].clone(),
                a_double.yz_diagonal(t.lambda, k) * &scale,
            );
        }
    }

    // A must satisfy its own functional equation given the B and C above.
    let rhs = sys
        .a_const
        .expand(3, bounds)?
        .add(&a.mul_polynomial(&poly(sys.a_from_a))?)?
        .add(&b.mul_polynomial(&poly(sys.a_from_b))?)?
        .add(&c.mul_polynomial(&poly(sys.a_from_c))?)?;
    for t in tables {
        for k in k_range(t.lambda) {
            for l in k_range(t.lambda) {
                let e = [t.lambda, k, l];
                report.compare("A_system", t.lambda, k, Some(l), a.coefficient(e), rhs.coefficient(e));
            }
        }
    }

    for t in tables {
        check_abc_recurrence(report, t, tables);
    }
    Ok(())
}

fn check_abc_recurrence(report: &mut GfReport, t: &MomentTable, tables: &[MomentTable]) {
    let sums = t.trivariate.as_ref().expect("trivariate sums");
    let lambda = i64::from(t.lambda);
    let four = |e: i64| BigInt::from(1u8) << (2 * e as usize);
    for k in k_range(t.lambda) {
        for l in k_range(t.lambda) {
            let (ki, li) = (i64::from(k), i64::from(l));
            let d = |a: i64, b: i64| BigInt::from(i32::from(a == b));
            let (a_pred, b_pred, c_pred) = if t.lambda == 0 {
                // n = 1 with predecessor 0: ϑ̃(·,1) = 2δ_{·,1}, ϑ̃(·,0) = δ_{·,0}
                (
                    BigInt::from(4) * d(ki, 1) * d(li, 1),
                    BigInt::from(2) * d(ki, 1) * d(li, 0),
                    BigInt::from(2) * d(ki, 0) * d(li, 1),
                )
            } else {
                let prev = tables[t.lambda as usize - 1].trivariate.as_ref().expect("previous sums");
                let a = |k, l| TrivariateSums::get(&prev.a, k, l);
                let b = |k, l| TrivariateSums::get(&prev.b, k, l);
                let c = |k, l| TrivariateSums::get(&prev.c, k, l);
                let a_next = a(ki, li) + b(ki, li - 2) + c(ki - 2, li) + a(ki - 2, li - 2)
                    + 4 * a(ki - 1, li - 1)
                    + four(lambda - 1) * d(ki - 1, lambda) * d(li - 1, lambda)
                    - four(lambda) * d(ki - 2, lambda) * d(li - 2, lambda);
                let b_next = 2 * (b(ki, li - 1) + a(ki - 2, li - 1) + a(ki - 1, li) + b(ki - 1, li - 2))
                    + 2 * four(lambda - 1) * d(ki - 1, lambda) * d(li, lambda)
                    - 2 * four(lambda) * d(ki - 2, lambda) * d(li - 1, lambda);
                let c_next = 2 * (c(ki - 1, li) + a(ki - 1, li - 2) + a(ki, li - 1) + c(ki - 2, li - 1))
                    + 2 * four(lambda - 1) * d(ki, lambda) * d(li - 1, lambda)
                    - 2 * four(lambda) * d(ki - 1, lambda) * d(li - 2, lambda);
                (a_next, b_next, c_next)
            };
            let (ku, lu) = (k as usize, l as usize);
            let whole = BigRational::from_integer;
            report.compare("a_rec", t.lambda, k, Some(l), whole(sums.a[ku][lu].clone()), whole(a_pred));
            report.compare("b_rec", t.lambda, k, Some(l), whole(sums.b[ku][lu].clone()), whole(b_pred));
            report.compare("c_rec", t.lambda, k, Some(l), whole(sums.c[ku][lu].clone()), whole(c_pred));
        }
    }
}
