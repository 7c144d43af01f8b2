use std::ops::{Add, Div, Mul, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use super::series::{Monomial, Polynomial, TruncatedSeries};
use crate::error::{Error, Result};

/// A rational generating function `numerator / denominator` with
/// `denominator(0, …, 0) ≠ 0`, so that it has a power series expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalGF {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl RationalGF {
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self> {
        if denominator.constant_term().is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }

    pub fn polynomial(p: Polynomial) -> Self {
        let arity = p.arity();
        Self {
            numerator: p,
            denominator: Polynomial::one(arity),
        }
    }

    /// Shorthand for `parse(num) / parse(den)`; panics on malformed input.
    pub(crate) fn parse(arity: usize, num: &str, den: &str) -> Self {
        Self::new(
            Polynomial::parse(arity, num).expect("valid numerator"),
            Polynomial::parse(arity, den).expect("valid denominator"),
        )
        .expect("denominator with nonzero constant term")
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn arity(&self) -> usize {
        self.numerator.arity().max(self.denominator.arity())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            numerator: self.numerator.scale(c),
            denominator: self.denominator.clone(),
        }
    }

    /// Quotient of two generating functions; `rhs` must be invertible as a
    /// power series.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Self::new(
            &self.numerator * &rhs.denominator,
            &self.denominator * &rhs.numerator,
        )
    }

    /// Power series expansion truncated to `bounds` in the given arity.
    pub fn expand(&self, arity: usize, bounds: Monomial) -> Result<TruncatedSeries> {
        if arity < self.arity() {
            return Err(Error::Shape(format!(
                "cannot expand a {}-variable function in {arity} variables",
                self.arity()
            )));
        }
        let numerator = &Polynomial::zero(arity) + &self.numerator;
        TruncatedSeries::from_polynomial(&numerator, bounds)?.div_polynomial(&self.denominator)
    }
}

impl Add for &RationalGF {
    type Output = RationalGF;
    fn add(self, rhs: &RationalGF) -> RationalGF {
        if self.denominator == rhs.denominator {
            return RationalGF {
                numerator: &self.numerator + &rhs.numerator,
                denominator: self.denominator.clone(),
            };
        }
        RationalGF {
            numerator: &(&self.numerator * &rhs.denominator) + &(&rhs.numerator * &self.denominator),
            denominator: &self.denominator * &rhs.denominator,
        }
    }
}

impl Sub for &RationalGF {
    type Output = RationalGF;
    fn sub(self, rhs: &RationalGF) -> RationalGF {
        self + &RationalGF {
            numerator: -&rhs.numerator,
            denominator: rhs.denominator.clone(),
        }
    }
}

impl Mul for &RationalGF {
    type Output = RationalGF;
    fn mul(self, rhs: &RationalGF) -> RationalGF {
        RationalGF {
            numerator: &self.numerator * &rhs.numerator,
            denominator: &self.denominator * &rhs.denominator,
        }
    }
}

impl Div for &RationalGF {
    type Output = RationalGF;
    /// Panics if `rhs` has a zero constant term; see [`RationalGF::checked_div`].
    fn div(self, rhs: &RationalGF) -> RationalGF {
        self.checked_div(rhs).expect("divisor invertible as a power series")
    }
}

/// `numerator / denominator` expanded as a power series, truncated to `bounds`.
pub fn expand_gf(gf: &RationalGF, arity: usize, bounds: Monomial) -> Result<TruncatedSeries> {
    gf.expand(arity, bounds)
}
