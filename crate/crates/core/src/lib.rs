//! Divisibility of binomial coefficients by prime powers.
//!
//! * [`valuation`]: digit expansions, Kummer/Legendre valuations, Lucas residues, block counts.
//! * [`rows`]: exact row counts `ϑ_p(j, n)` by brute force and by digit DP.
//! * [`gf`]: exact truncated power series and the moment generating functions.
//! * [`stats`]: Gaussian comparison of rows, second moments and interval averages.
//! * [`cli`]: the `binodiv` command line front end.

pub mod cli;
pub mod error;
pub mod format;
pub mod gf;
pub mod rows;
pub mod stats;
pub mod valuation;

pub use error::{Error, Result};
pub use num_rational::BigRational as ExactRational;
