//! Ratios of interval moments to their Gaussian approximations.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::normal::phi;
use super::partial_sums_at;
use super::trend::loglog_slope;
use crate::error::{guard, Error, Result};
use crate::gf::interval_sums;

pub const MAX_LEMMA_LAMBDA: u32 = 22;

/// An offset `u`, either fixed or a multiple of `⌊√λ⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UPoint {
    Fixed(i64),
    Sqrt(i64),
}

impl UPoint {
    pub fn resolve(self, lambda: u32) -> i64 {
        match self {
            Self::Fixed(u) => u,
            Self::Sqrt(c) => c * i64::from(lambda).isqrt(),
        }
    }
}

/// `"3"` is fixed, `"s"`, `"-s"`, `"2s"` are multiples of `⌊√λ⌋`.
impl FromStr for UPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("bad u value {s:?}"));
        match s.strip_suffix('s') {
            Some(c) => {
                let c = match c {
                    "" | "+" => 1,
                    "-" => -1,
                    c => c.parse().map_err(|_| bad())?,
                };
                Ok(Self::Sqrt(c))
            }
            None => s.parse().map(Self::Fixed).map_err(|_| bad()),
        }
    }
}

impl fmt::Display for UPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fixed(u) => write!(f, "{u}"),
            Self::Sqrt(1) => write!(f, "s"),
            Self::Sqrt(-1) => write!(f, "-s"),
            Self::Sqrt(c) => write!(f, "{c}s"),
        }
    }
}

impl Serialize for UPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaRow {
    /// `frak_m`, `frak_m_prime` or `frak_m2`.
    pub family: &'static str,
    pub lambda: u32,
    pub u: i64,
    pub u_point: UPoint,
    pub ratio: f64,
    pub deviation: f64,
}

impl LemmaRow {
    pub const CSV_HEADER: &'static str = "family,lambda,u,ratio,deviation";

    pub fn to_csv_row(&self) -> String {
        use crate::format::float;
        format!(
            "{},{},{},{},{}",
            self.family,
            self.lambda,
            self.u,
            float(self.ratio),
            float(self.deviation)
        )
    }
}

/// Least-squares slope of `ln |ratio − 1|` against `ln λ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub family: &'static str,
    pub u_point: UPoint,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaTable {
    pub rows: Vec<LemmaRow>,
    pub slopes: Vec<SlopeFit>,
}

impl LemmaTable {
    pub fn row(&self, family: &str, lambda: u32, u_point: UPoint) -> Option<&LemmaRow> {
        self.rows
            .iter()
            .find(|r| r.family == family && r.lambda == lambda && r.u_point == u_point)
    }

    pub fn slope(&self, family: &str, u_point: UPoint) -> Option<f64> {
        self.slopes
            .iter()
            .find(|s| s.family == family && s.u_point == u_point)
            .map(|s| s.slope)
    }
}

pub const FAMILIES: [&str; 3] = ["frak_m", "frak_m_prime", "frak_m2"];

/// Ratios `𝔪/((3/2)2^λΦ)`, `𝔪′/((7/3)4^λΦ)` and `𝔪⁽²⁾/((7/3)4^λΦ²)` at
/// `k = λ + u`, `Φ = Φ(u/√λ)`.
pub fn lemma_ratio_checks(lambdas: &[u32], us: &[UPoint]) -> Result<LemmaTable> {
    let mut rows = Vec::new();
    for &lambda in lambdas {
        if lambda == 0 {
            return Err(Error::InvalidArgument("lemma ratios need lambda >= 1".into()));
        }
        guard("lambda", u64::from(lambda), u64::from(MAX_LEMMA_LAMBDA))?;
        let sums = interval_sums(lambda, false)?;
        let size = 2f64.powi(lambda as i32);
        for &point in us {
            let u = point.resolve(lambda);
            let (sq, weighted, plain) = partial_sums_at(&sums, i64::from(lambda) + u);
            let g = phi(u as f64 / f64::from(lambda).sqrt());
            let ratios = [
                plain as f64 / size / (1.5 * size * g),
                weighted as f64 / size / (7.0 / 3.0 * size * size * g),
                sq as f64 / size / (7.0 / 3.0 * size * size * g * g),
            ];
            for (family, ratio) in FAMILIES.into_iter().zip(ratios) {
                rows.push(LemmaRow {
                    family,
                    lambda,
                    u,
                    u_point: point,
                    ratio,
                    deviation: (ratio - 1.0).abs(),
                });
            }
        }
    }
    let mut slopes = Vec::new();
    for family in FAMILIES {
        for &point in us {
            let (x, y): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|r| r.family == family && r.u_point == point)
                .map(|r| (f64::from(r.lambda), r.deviation))
                .unzip();
            if x.len() >= 2 {
                slopes.push(SlopeFit {
                    family,
                    u_point: point,
                    slope: loglog_slope(&x, &y),
                });
            }
        }
    }
    Ok(LemmaTable { rows, slopes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rows::theta_tilde;

    #[test]
    fn parses_points() {
        for (text, point) in [
            ("0", UPoint::Fixed(0)),
            ("-3", UPoint::Fixed(-3)),
            ("s", UPoint::Sqrt(1)),
            ("-s", UPoint::Sqrt(-1)),
            ("2s", UPoint::Sqrt(2)),
            ("-2s", UPoint::Sqrt(-2)),
        ] {
            assert_eq!(text.parse::<UPoint>().unwrap(), point);
            assert_eq!(point.to_string(), text);
        }
        assert!("x".parse::<UPoint>().is_err());
        assert_eq!(UPoint::Sqrt(2).resolve(17), 8);
    }

    #[test]
    fn first_family_matches_rows() {
        let lambda = 7u32;
        let t = lemma_ratio_checks(&[lambda], &[UPoint::Fixed(1)]).unwrap();
        let direct: u128 = (128u64..256).map(|n| theta_tilde(8, n)).sum();
        let expected = direct as f64 / 128.0 / (1.5 * 128.0 * phi(1.0 / 7f64.sqrt()));
        let got = t.row("frak_m", lambda, UPoint::Fixed(1)).unwrap().ratio;
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn cumulative_in_u() {
        let us: Vec<UPoint> = (-6..=6).map(UPoint::Fixed).collect();
        let t = lemma_ratio_checks(&[10], &us).unwrap();
        let values: Vec<f64> = t
            .rows
            .iter()
            .filter(|r| r.family == "frak_m")
            .map(|r| r.ratio * 1.5 * 1024.0 * phi(r.u as f64 / 10f64.sqrt()))
            .collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1] + 1e-9));
    }
}
