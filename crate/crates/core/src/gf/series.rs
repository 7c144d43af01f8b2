//! Exact polynomials and truncated power series in up to three variables
//! `x, y, z` over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exponent vector `(e_x, e_y, e_z)`; unused variables carry exponent 0.
pub type Monomial = [u32; 3];

const VARS: [char; 3] = ['x', 'y', 'z'];

fn check_arity(arity: usize) -> Result<()> {
    if (1..=3).contains(&arity) {
        Ok(())
    } else {
        Err(Error::Shape(format!("arity must be 1, 2 or 3, got {arity}")))
    }
}

/// A polynomial with a finite map of nonzero rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Self {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: BigRational) -> Self {
        Self::monomial(arity, [0; 3], c)
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, BigRational::one())
    }

    pub fn monomial(arity: usize, exps: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(exps, c);
        p
    }

    fn add_term(&mut self, exps: Monomial, c: BigRational) {
        debug_assert!(exps[self.arity..].iter().all(|&e| e == 0));
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    /// Parses an expanded sum such as `"4 - 3xy - 2xy^2"` or `"1 - 1/2x"`: each
    /// term is an optional rational coefficient followed by variables with an
    /// optional `^exponent`.
    pub fn parse(arity: usize, text: &str) -> Result<Self> {
        check_arity(arity)?;
        let bad = |msg: &str| Error::InvalidArgument(format!("polynomial {text:?}: {msg}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut poly = Self::zero(arity);
        let mut chars = compact.chars().peekable();
        while chars.peek().is_some() {
            let mut sign = BigRational::one();
            while let Some(&c) = chars.peek() {
                match c {
                    '+' => {}
                    '-' => sign = -sign,
                    _ => break,
                }
                chars.next();
            }
            let read_int = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
                let mut digits = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        digits.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                digits
            };
            let num = read_int(&mut chars);
            let mut coeff = if num.is_empty() {
                BigRational::one()
            } else {
                BigRational::from_integer(num.parse::<BigInt>().map_err(|_| bad("coefficient"))?)
            };
            if chars.peek() == Some(&'/') {
                chars.next();
                let den = read_int(&mut chars);
                let den: BigInt = den.parse().map_err(|_| bad("denominator"))?;
                if den.is_zero() {
                    return Err(bad("zero denominator"));
                }
                coeff /= BigRational::from_integer(den);
            }
            let mut exps = [0u32; 3];
            let mut any_var = false;
            while let Some(&c) = chars.peek() {
                let Some(v) = VARS.iter().position(|&name| name == c) else {
                    break;
                };
                if v >= arity {
                    return Err(bad("variable outside arity"));
                }
                chars.next();
                any_var = true;
                let mut e = 1u32;
                if chars.peek() == Some(&'^') {
                    chars.next();
                    e = read_int(&mut chars).parse().map_err(|_| bad("exponent"))?;
                }
                exps[v] += e;
            }
            if num.is_empty() && !any_var {
                return Err(bad("empty term"));
            }
            poly.add_term(exps, sign * coeff);
        }
        Ok(poly)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: Monomial) -> BigRational {
        self.terms.get(&exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient([0; 3])
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.arity);
        for (e, v) in &self.terms {
            out.add_term(*e, v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.arity), |acc, _| &acc * self)
    }

    fn lift(&self, arity: usize) -> Self {
        Self {
            arity: arity.max(self.arity),
            terms: self.terms.clone(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "{}", VARS[v])?,
                    _ => write!(f, "{}^{k}", VARS[v])?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.lift(rhs.arity);
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.lift(rhs.arity);
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.arity.max(rhs.arity));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// Truncated power series: all coefficients of `x^i y^j z^k` with each
/// exponent at most its bound, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    arity: usize,
    bounds: Monomial,
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// The zero series. Bounds of variables beyond `arity` are forced to 0.
    pub fn zero(arity: usize, bounds: Monomial) -> Result<Self> {
        check_arity(arity)?;
        let mut bounds = bounds;
        for b in bounds.iter_mut().skip(arity) {
            *b = 0;
        }
        let size = bounds.iter().map(|&b| b as usize + 1).product();
        Ok(Self {
            arity,
            bounds,
            coeffs: vec![BigRational::zero(); size],
        })
    }

    /// Truncation of a polynomial.
    pub fn from_polynomial(p: &Polynomial, bounds: Monomial) -> Result<Self> {
        let mut s = Self::zero(p.arity, bounds)?;
        for (e, c) in p.terms() {
            if let Some(i) = s.index(*e) {
                s.coeffs[i] = c.clone();
            }
        }
        Ok(s)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bounds(&self) -> Monomial {
        self.bounds
    }

    fn index(&self, e: Monomial) -> Option<usize> {
        if e.iter().zip(&self.bounds).any(|(x, b)| x > b) {
            return None;
        }
        let (by, bz) = (self.bounds[1] as usize + 1, self.bounds[2] as usize + 1);
        Some((e[0] as usize * by + e[1] as usize) * bz + e[2] as usize)
    }

    fn monomial_at(&self, i: usize) -> Monomial {
        let (by, bz) = (self.bounds[1] as usize + 1, self.bounds[2] as usize + 1);
        [(i / (by * bz)) as u32, ((i / bz) % by) as u32, (i % bz) as u32]
    }

    /// Coefficient of `x^e0 y^e1 z^e2`; zero outside the bounds.
    pub fn coefficient(&self, e: Monomial) -> BigRational {
        self.index(e)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Nonzero coefficients in lexicographic exponent order.
    pub fn nonzero(&self) -> impl Iterator<Item = (Monomial, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.monomial_at(i), c))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity || self.bounds != other.bounds {
            return Err(Error::Shape(format!(
                "arity {} bounds {:?} vs arity {} bounds {:?}",
                self.arity, self.bounds, other.arity, other.bounds
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            arity: self.arity,
            bounds: self.bounds,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            arity: self.arity,
            bounds: self.bounds,
            coeffs,
        })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            arity: self.arity,
            bounds: self.bounds,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Truncated product of two series with identical shape.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.arity, self.bounds)?;
        let rhs: Vec<(Monomial, &BigRational)> = other.nonzero().collect();
        for (ea, ca) in self.nonzero() {
            for (eb, cb) in &rhs {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                if let Some(i) = out.index(e) {
                    out.coeffs[i] += ca * *cb;
                }
            }
        }
        Ok(out)
    }

    /// Truncated product with a polynomial.
    pub fn mul_polynomial(&self, p: &Polynomial) -> Result<Self> {
        if p.arity > self.arity {
            return Err(Error::Shape(format!(
                "polynomial of arity {} times series of arity {}",
                p.arity, self.arity
            )));
        }
        let mut out = Self::zero(self.arity, self.bounds)?;
        for (ea, ca) in self.nonzero() {
            for (eb, cb) in p.terms() {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                if let Some(i) = out.index(e) {
                    out.coeffs[i] += ca * cb;
                }
            }
        }
        Ok(out)
    }

    /// Partial sums along variable `var`, i.e. multiplication by `1/(1 − v)`.
    pub fn partial_sums(&self, var: usize) -> Result<Self> {
        if var >= self.arity {
            return Err(Error::Shape(format!("no variable {var} in arity {}", self.arity)));
        }
        let mut out = self.clone();
        for i in 0..out.coeffs.len() {
            let mut e = out.monomial_at(i);
            if e[var] == 0 {
                continue;
            }
            e[var] -= 1;
            let prev = out.index(e).expect("lower exponent is in range");
            let add = out.coeffs[prev].clone();
            out.coeffs[i] += add;
        }
        Ok(out)
    }
}

impl TruncatedSeries {
    /// The series `s` with `d·s ≡ self` up to the bounds, by the recurrence
    /// `s_e = (self_e − Σ_{f≠0} d_f s_{e−f}) / d_0` in lexicographic order.
    pub fn div_polynomial(&self, d: &Polynomial) -> Result<Self> {
        if d.arity() > self.arity {
            return Err(Error::Shape(format!(
                "polynomial of arity {} divides series of arity {}",
                d.arity(),
                self.arity
            )));
        }
        let d0 = d.constant_term();
        if d0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv_d0 = d0.recip();
        let others: Vec<(Monomial, &BigRational)> =
            d.terms().filter(|(e, _)| **e != [0; 3]).map(|(e, c)| (*e, c)).collect();
        let mut s = Self::zero(self.arity, self.bounds)?;
        for i in 0..s.coeffs.len() {
            let e = s.monomial_at(i);
            let mut acc = self.coeffs[i].clone();
            for (f, c) in &others {
                if f.iter().zip(&e).all(|(a, b)| a <= b) {
                    let j = s.index([e[0] - f[0], e[1] - f[1], e[2] - f[2]]).expect("in range");
                    if !s.coeffs[j].is_zero() {
                        acc -= *c * &s.coeffs[j];
                    }
                }
            }
            if !acc.is_zero() {
                s.coeffs[i] = acc * &inv_d0;
            }
        }
        Ok(s)
    }

    /// Coefficients `[x^λ y^k z^k]`, the diagonal in the last two variables.
    pub fn yz_diagonal(&self, lambda: u32, k: u32) -> BigRational {
        self.coefficient([lambda, k, k])
    }
}

/// `s` with `d·s ≡ 1` up to `bounds`.
pub fn series_inverse(d: &Polynomial, bounds: Monomial) -> Result<TruncatedSeries> {
    let one = TruncatedSeries::from_polynomial(&Polynomial::one(d.arity()), bounds)?;
    one.div_polynomial(d)
}
