//! Exact generating-function machinery for the interval moments of the row
//! counts.

pub mod closed_forms;
mod moments;
mod rational_gf;
mod series;
mod verify;

pub use moments::{
    interval_sums, moments_direct, IntervalSums, MomentTable, TrivariateSums,
    MAX_BIVARIATE_LAMBDA, MAX_TRIVARIATE_LAMBDA,
};
pub use rational_gf::{expand_gf, RationalGF};
pub use series::{series_inverse, Monomial, Polynomial, TruncatedSeries};
pub use verify::{verify_gf_identities, verify_gf_identities_with, Discrepancy, GfReport};
