use num_bigint::BigInt;
use num_rational::BigRational;

use super::tilde_row;
use crate::error::{Error, Result};
use crate::valuation::{block_count, BlockWord};

fn count(n: u64, word: &str) -> BigRational {
    let w = BlockWord::binary(word).expect("fixed nonzero binary word");
    BigRational::from_integer(BigInt::from(block_count(n, &w)))
}

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Howard's block-count polynomial for `ϑ₂(j, n) / ϑ₂(0, n)`, `j ∈ {1, 2, 3}`.
pub fn howard_ratio(n: u64, j: u32) -> Result<BigRational> {
    let b10 = count(n, "10");
    let value = match j {
        1 => q(1, 2) * b10,
        2 => {
            q(-1, 8) * &b10
                + q(1, 8) * &b10 * &b10
                + count(n, "100")
                + q(1, 4) * count(n, "110")
        }
        3 => {
            let b100 = count(n, "100");
            let b110 = count(n, "110");
            q(1, 24) * &b10 - q(1, 16) * &b10 * &b10 - q(1, 2) * &b100 - q(1, 8) * &b110
                + q(1, 48) * &b10 * &b10 * &b10
                + q(1, 2) * &b10 * &b100
                + q(1, 8) * &b10 * &b110
                + q(2, 1) * count(n, "1000")
                + q(1, 2) * count(n, "1010")
                + q(1, 2) * count(n, "1100")
                + q(1, 8) * count(n, "1110")
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "Howard formulas exist for j in 1..=3, got {j}"
            )))
        }
    };
    Ok(value)
}

/// Returns `(formula value, ϑ₂(j, n) / ϑ₂(0, n))`; the two should agree.
pub fn howard_check(n: u64, j: u32) -> Result<(BigRational, BigRational)> {
    if n == 0 {
        return Err(Error::InvalidArgument("Howard check needs n >= 1".into()));
    }
    let formula = howard_ratio(n, j)?;
    let row = tilde_row(n);
    let ratio = BigRational::new(
        BigInt::from(row.theta(i64::from(j))),
        BigInt::from(row.theta(0)),
    );
    Ok((formula, ratio))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_twelve() {
        let (f, r) = howard_check(12, 1).unwrap();
        assert_eq!(f, q(1, 2));
        assert_eq!(r, q(1, 2));
        let (f, r) = howard_check(12, 2).unwrap();
        assert_eq!(f, q(5, 4));
        assert_eq!(r, q(5, 4));
    }

    #[test]
    fn powers_of_two() {
        for m in 1..40 {
            let (f, r) = howard_check(1 << m, 1).unwrap();
            assert_eq!(f, q(1, 2));
            assert_eq!(r, q(1, 2));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(howard_check(0, 1).is_err());
        assert!(howard_check(5, 4).is_err());
        assert!(howard_check(5, 0).is_err());
    }
}
