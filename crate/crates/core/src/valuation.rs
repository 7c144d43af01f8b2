//! Base-p digit expansions, digit sums, block counts and p-adic valuations
//! of factorials and binomial coefficients.

use std::fmt;

use crate::error::{Error, Result};

/// Base-`p` expansion of a nonnegative integer, least significant digit first.
///
/// Zero is the empty sequence; otherwise the last digit is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    digits: Vec<u64>,
    base: u64,
}

impl DigitString {
    /// Builds a digit string from raw digits, dropping most-significant zeros.
    pub fn from_digits(mut digits: Vec<u64>, base: u64) -> Result<Self> {
        check_base(base)?;
        if let Some(&digit) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidDigit { digit, base });
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(Self { digits, base })
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// Number of digits `ν`; zero for the value 0.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit `i`, with implicit zeros above the top digit.
    pub fn digit(&self, i: usize) -> u64 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    /// Reconstructs `Σ digits[i]·pⁱ`, or `None` if it does not fit in a `u64`.
    pub fn value(&self) -> Option<u64> {
        self.digits
            .iter()
            .rev()
            .try_fold(0u64, |acc, &d| acc.checked_mul(self.base)?.checked_add(d))
    }

    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().sum()
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return write!(f, "(0)_{}", self.base);
        }
        write!(f, "(")?;
        for (i, d) in self.digits.iter().rev().enumerate() {
            if i > 0 && self.base > 10 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")_{}", self.base)
    }
}

/// A finite word over `{0, …, p−1}` containing at least one nonzero symbol.
///
/// Symbols are stored in reading order, most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockWord {
    symbols: Vec<u64>,
    base: u64,
}

impl BlockWord {
    pub fn new(symbols: Vec<u64>, base: u64) -> Result<Self> {
        check_base(base)?;
        if let Some(&digit) = symbols.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidDigit { digit, base });
        }
        if symbols.iter().all(|&s| s == 0) {
            return Err(Error::DegenerateWord);
        }
        Ok(Self { symbols, base })
    }

    /// Parses a binary word such as `"110"`.
    pub fn binary(word: &str) -> Result<Self> {
        let symbols = word
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidArgument(format!(
                    "binary word contains {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols, 2)
    }

    pub fn symbols(&self) -> &[u64] {
        &self.symbols
    }

    pub fn base(&self) -> u64 {
        self.base
    }
}

impl fmt::Display for BlockWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

fn check_base(p: u64) -> Result<()> {
    if p < 2 {
        Err(Error::InvalidBase(p))
    } else {
        Ok(())
    }
}

/// Trial-division primality test.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    check_base(p)?;
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Canonical base-`p` expansion of `n`.
pub fn digits(n: u64, p: u64) -> Result<DigitString> {
    check_base(p)?;
    let mut out = Vec::new();
    let mut m = n;
    while m > 0 {
        out.push(m % p);
        m /= p;
    }
    Ok(DigitString {
        digits: out,
        base: p,
    })
}

/// Sum of the base-`p` digits, `s_p(n)`.
pub fn digit_sum(n: u64, p: u64) -> Result<u64> {
    check_base(p)?;
    if p == 2 {
        return Ok(u64::from(n.count_ones()));
    }
    let mut sum = 0;
    let mut m = n;
    while m > 0 {
        sum += m % p;
        m /= p;
    }
    Ok(sum)
}

/// `ν_p(n!) = (n − s_p(n)) / (p − 1)` (Legendre).
pub fn nu_factorial(n: u64, p: u64) -> Result<u64> {
    check_prime(p)?;
    Ok((n - digit_sum(n, p)?) / (p - 1))
}

fn check_binomial(n: u64, t: i64) -> Result<u64> {
    match u64::try_from(t) {
        Ok(t) if t <= n => Ok(t),
        _ => Err(Error::BinomialIndex { n, t }),
    }
}

/// `ν_p(C(n, t))`, counted as the number of borrows in the base-`p`
/// subtraction `n − t` (Kummer).
pub fn nu_binomial(n: u64, t: i64, p: u64) -> Result<u64> {
    check_prime(p)?;
    let t = check_binomial(n, t)?;
    let (mut a, mut b) = (n, t);
    let mut borrow = 0u64;
    let mut borrows = 0u64;
    while b > 0 || borrow > 0 {
        let da = a % p;
        let db = b % p + borrow;
        borrow = u64::from(da < db);
        borrows += borrow;
        a /= p;
        b /= p;
    }
    Ok(borrows)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(p)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// `C(a, b) mod p` for single digits `0 ≤ b ≤ a < p`, `p` prime.
fn small_binomial_mod(a: u64, b: u64, p: u64) -> u64 {
    let b = b.min(a - b);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num = mul_mod(num, a - i, p);
        den = mul_mod(den, i + 1, p);
    }
    mul_mod(num, pow_mod(den, p - 2, p), p)
}

/// `C(n, t) mod p` as the product of digitwise binomials (Lucas).
pub fn lucas_residue(n: u64, t: i64, p: u64) -> Result<u64> {
    check_prime(p)?;
    let t = check_binomial(n, t)?;
    let (mut a, mut b) = (n, t);
    let mut acc = 1 % p;
    while b > 0 {
        let (na, tb) = (a % p, b % p);
        if tb > na {
            return Ok(0);
        }
        acc = mul_mod(acc, small_binomial_mod(na, tb, p), p);
        a /= p;
        b /= p;
    }
    Ok(acc)
}

/// Number of (possibly overlapping) occurrences of `w` in the base-`p`
/// expansion of `n` written without leading zeros, where `p` is the base of `w`.
pub fn block_count(n: u64, w: &BlockWord) -> u64 {
    let mut expansion = digits(n, w.base)
        .map(|d| d.digits)
        .unwrap_or_default();
    expansion.reverse();
    let k = w.symbols.len();
    if expansion.len() < k {
        return 0;
    }
    expansion
        .windows(k)
        .filter(|window| *window == w.symbols.as_slice())
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_examples() {
        assert!(digits(0, 2).unwrap().is_empty());
        assert_eq!(digits(12, 2).unwrap().digits(), &[0, 0, 1, 1]);
        assert_eq!(digits(5, 3).unwrap().digits(), &[2, 1]);
        assert_eq!(digits(5, 1), Err(Error::InvalidBase(1)));
        assert_eq!(digits(12, 2).unwrap().to_string(), "(1100)_2");
    }

    #[test]
    fn digit_sum_examples() {
        assert_eq!(digit_sum(0, 2).unwrap(), 0);
        assert_eq!(digit_sum(12, 2).unwrap(), 2);
        assert_eq!(digit_sum(22, 2).unwrap(), 3);
        assert_eq!(digit_sum(5, 3).unwrap(), 3);
    }

    #[test]
    fn factorial_valuation() {
        assert_eq!(nu_factorial(0, 2).unwrap(), 0);
        // 12! = 479001600 = 2^10 · 467775
        assert_eq!(nu_factorial(12, 2).unwrap(), 10);
        assert_eq!(nu_factorial(10, 3).unwrap(), 4);
    }

    #[test]
    fn binomial_valuation() {
        assert_eq!(nu_binomial(12, 0, 2).unwrap(), 0);
        assert_eq!(nu_binomial(12, 5, 2).unwrap(), 3);
        assert_eq!(nu_binomial(4, 2, 2).unwrap(), 1);
        assert_eq!(nu_binomial(u64::MAX, 1, 2).unwrap(), 0);
        assert!(nu_binomial(4, 5, 2).is_err());
        assert!(nu_binomial(4, -1, 2).is_err());
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_residue(7, 3, 2).unwrap(), 1);
        assert_eq!(lucas_residue(5, 2, 2).unwrap(), 0);
        for p in [2, 3, 5, 7, 1_000_000_007] {
            assert_eq!(lucas_residue(123_456, 0, p).unwrap(), 1);
        }
        // C(10, 3) = 120 ≡ 1 mod 7
        assert_eq!(lucas_residue(10, 3, 7).unwrap(), 1);
        assert_eq!(lucas_residue(10, 3, 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn block_count_examples() {
        let w10 = BlockWord::binary("10").unwrap();
        assert_eq!(block_count(22, &w10), 2);
        assert_eq!(block_count(12, &BlockWord::binary("110").unwrap()), 1);
        assert_eq!(block_count(0, &BlockWord::binary("1").unwrap()), 0);
        assert_eq!(block_count(0b1111, &BlockWord::binary("11").unwrap()), 3);
        assert_eq!(BlockWord::binary("00"), Err(Error::DegenerateWord));
        assert_eq!(BlockWord::binary(""), Err(Error::DegenerateWord));
        assert!(BlockWord::binary("12").is_err());
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }
}
