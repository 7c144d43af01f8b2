use std::f64::consts::FRAC_1_SQRT_2;

/// Standard normal CDF `Φ(x) = ½·erfc(−x/√2)`, clamped to `[0, 1]`.
pub fn phi(x: f64) -> f64 {
    (0.5 * libm::erfc(-x * FRAC_1_SQRT_2)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Adaptive Simpson on `∫_0^x e^{−t²/2} dt / √(2π)`, plus `½`.
    fn phi_quadrature(x: f64) -> f64 {
        fn f(t: f64) -> f64 {
            (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt()
        }
        fn simpson(a: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        }
        fn adapt(a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (l, r) = (simpson(a, m), simpson(m, b));
            if depth == 0 || (l + r - whole).abs() <= 15.0 * tol {
                l + r + (l + r - whole) / 15.0
            } else {
                adapt(a, m, l, tol / 2.0, depth - 1) + adapt(m, b, r, tol / 2.0, depth - 1)
            }
        }
        0.5 + adapt(0.0, x, simpson(0.0, x), 1e-15, 50)
    }

    #[test]
    fn matches_quadrature() {
        assert!((phi(1.0) - 0.841_344_746_068_543).abs() < 1e-12);
        for i in -80..=80 {
            let x = f64::from(i) / 10.0;
            assert!((phi(x) - phi_quadrature(x)).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn symmetry_and_monotonicity() {
        assert_eq!(phi(0.0), 0.5);
        let mut last = 0.0;
        for i in -4000..=4000 {
            let x = f64::from(i) / 400.0;
            assert!((phi(x) + phi(-x) - 1.0).abs() <= 1e-12);
            assert!(phi(x) >= last);
            last = phi(x);
        }
        assert_eq!(phi(f64::NEG_INFINITY), 0.0);
        assert_eq!(phi(f64::INFINITY), 1.0);
    }
}
