//! Closed forms of the moment generating functions.
//!
//! Bivariate functions are in `x` (marks `λ`) and `y` (marks `k`); the
//! trivariate system adds `z` (marks `ℓ`).

use super::rational_gf::RationalGF;

fn gf(arity: usize, num: &str, den: &str) -> RationalGF {
    RationalGF::parse(arity, num, den)
}

/// `(1 − xy)(1 − x(1+y)²/2)`.
fn first_moment_denominator() -> RationalGF {
    &gf(2, "1", "1 - xy") * &gf(2, "1", "1 - 1/2x - xy - 1/2xy^2")
}

/// `M(x, y) = (y/2)(4 − 3xy − 2xy²) / ((1 − xy)(1 − x(1+y)²/2))`, the
/// generating function of `m_{λ,k}`.
pub fn m_gf() -> RationalGF {
    &gf(2, "2y - 3/2xy^2 - xy^3", "1") * &first_moment_denominator()
}

/// `𝔐 = M / (1 − y)`, for the partial sums `𝔪_{λ,k}`.
pub fn frak_m_gf() -> RationalGF {
    &m_gf() * &gf(2, "1", "1 - y")
}

/// `M′ = (2y + xy²(1+y)/2 · (4 − 3xy − 2xy²)/((1 − xy)(1 − x(1+y)²/2))
///        + xy²(1 − 4y)/(1 − 2xy)) / (1 − x(1+y)²)`.
pub fn m_prime_gf() -> RationalGF {
    let weighted = &gf(2, "1/2xy^2 + 1/2xy^3", "1")
        * &(&gf(2, "4 - 3xy - 2xy^2", "1") * &first_moment_denominator());
    let corrections = gf(2, "xy^2 - 4xy^3", "1 - 2xy");
    let inner = &(&gf(2, "2y", "1") + &weighted) + &corrections;
    &inner * &gf(2, "1", "1 - x - 2xy - xy^2")
}

/// `𝔐′ = M′ / (1 − y)`.
pub fn frak_m_prime_gf() -> RationalGF {
    &m_prime_gf() * &gf(2, "1", "1 - y")
}

/// `(1 − 4yz) / (1 − 4xyz)`, the shape of the boundary corrections.
fn boundary() -> RationalGF {
    gf(3, "1 - 4yz", "1 - 4xyz")
}

/// `1 − 2xz(1 + yz)`.
fn d1() -> RationalGF {
    gf(3, "1 - 2xz - 2xyz^2", "1")
}

/// `1 − 2xy(1 + yz)`.
fn d2() -> RationalGF {
    gf(3, "1 - 2xy - 2xy^2z", "1")
}

/// Part of `B` not proportional to `A`: `(2y + 2xy²z·(1−4yz)/(1−4xyz)) / (1 − 2xz(1+yz))`.
fn b_inhomogeneous() -> RationalGF {
    &(&gf(3, "2y", "1") + &(&gf(3, "2xy^2z", "1") * &boundary())) / &d1()
}

fn c_inhomogeneous() -> RationalGF {
    &(&gf(3, "2z", "1") + &(&gf(3, "2xyz^2", "1") * &boundary())) / &d2()
}

/// Numerator `G` of `A = G / H`.
pub fn a_numerator() -> RationalGF {
    let mut g = gf(3, "4yz", "1");
    g = &g + &(&gf(3, "xz^2", "1") * &b_inhomogeneous());
    g = &g + &(&gf(3, "xy^2", "1") * &c_inhomogeneous());
    &g + &(&gf(3, "xy^2z^2", "1") * &boundary())
}

/// Denominator `H = 1 − x(1+yz)² − xyz/(1−2xz(1+yz)) − xyz/(1−2xy(1+yz))`.
pub fn a_denominator() -> RationalGF {
    let xyz = gf(3, "xyz", "1");
    let h = gf(3, "1 - x - 2xyz - xy^2z^2", "1");
    &(&h - &(&xyz / &d1())) - &(&xyz / &d2())
}

/// `A(x, y, z) = Σ a_{λ,k,ℓ} x^λ y^k z^ℓ` with `a = Σ_n ϑ̃(k,n)ϑ̃(ℓ,n)`.
pub fn a_gf() -> RationalGF {
    &a_numerator() / &a_denominator()
}

/// `B = b_inhom + 2xy(1+yz)/(1−2xz(1+yz)) · A`, for `b = Σ_n ϑ̃(k,n)ϑ̃(ℓ,n−1)`.
pub fn b_gf() -> RationalGF {
    let coupling = &gf(3, "2xy + 2xy^2z", "1") / &d1();
    &b_inhomogeneous() + &(&coupling * &a_gf())
}

/// `C = c_inhom + 2xz(1+yz)/(1−2xy(1+yz)) · A`, for `c = Σ_n ϑ̃(k,n−1)ϑ̃(ℓ,n)`.
pub fn c_gf() -> RationalGF {
    let coupling = &gf(3, "2xz + 2xyz^2", "1") / &d2();
    &c_inhomogeneous() + &(&coupling * &a_gf())
}

/// `A / ((1 − y)(1 − z))`: its diagonal `k = ℓ`, divided by `2^λ`, is `𝔪^{(2)}`.
pub fn a_double_partial_gf() -> RationalGF {
    &a_gf() * &gf(3, "1", "1 - y - z + yz")
}

/// The right-hand sides of the linear system satisfied by `A`, `B`, `C`,
/// as polynomial coefficients and inhomogeneous terms.
pub(crate) struct AbcSystem {
    pub a_from_a: &'static str,
    pub a_from_b: &'static str,
    pub a_from_c: &'static str,
    pub a_const: RationalGF,
    pub b_from_a: &'static str,
    pub b_from_b: &'static str,
    pub b_const: RationalGF,
    pub c_from_a: &'static str,
    pub c_from_c: &'static str,
    pub c_const: RationalGF,
}

pub(crate) fn abc_system() -> AbcSystem {
    AbcSystem {
        a_from_a: "x + 4xyz + xy^2z^2",
        a_from_b: "xz^2",
        a_from_c: "xy^2",
        a_const: &gf(3, "4yz", "1") + &(&gf(3, "xy^2z^2", "1") * &boundary()),
        b_from_a: "2xy + 2xy^2z",
        b_from_b: "2xz + 2xyz^2",
        b_const: &gf(3, "2y", "1") + &(&gf(3, "2xy^2z", "1") * &boundary()),
        c_from_a: "2xz + 2xyz^2",
        c_from_c: "2xy + 2xy^2z",
        c_const: &gf(3, "2z", "1") + &(&gf(3, "2xyz^2", "1") * &boundary()),
    }
}
