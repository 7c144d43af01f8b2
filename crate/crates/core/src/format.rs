//! Stable text forms used by the CSV and JSON reports.

use num_rational::BigRational;
use serde::Serializer;

/// Exact rational as `p/q`, always with an explicit denominator.
pub fn rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Float rounded to 15 significant digits, printed in shortest form.
pub fn float(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".to_string()
    } else {
        rounded.to_string()
    }
}

pub(crate) fn serialize_rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational(r))
}
