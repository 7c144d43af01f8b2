//! End-to-end acceptance run: one line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed. The
//! process fails when the set of failing criteria differs from
//! `KNOWN_FAILURES`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use binodiv_core::gf::{closed_forms, moments_direct, verify_gf_identities, MomentTable};
use binodiv_core::rows::{howard_ratio, mu_n, row_bruteforce, tilde_row, tilde_row_general};
use binodiv_core::stats::{
    clt_scan, lemma_ratio_checks, second_moment_scan, singmaster_average, spearman,
    uniform_moments, CenteringRule, ScanMode, SecondMomentConfig, UPoint,
};
use binodiv_core::valuation::{nu_binomial, nu_factorial};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Criteria that cannot hold at the tested sizes.
///
/// 8: at ε = 0.05 the sup distance is at least half a Gaussian step,
///    about 1/(2√(2πλ)) ≈ 0.047 at λ = 18, before any genuine error; the
///    smallest observed value on I₁₈ is 0.084, so every row is bad,
///    f_λ = 1 and f_λ·√λ = √λ increases.
/// 9: the miscentered control grows like 0.01·(7/3)·√λ, a factor of at
///    most √(18/10) ≈ 1.34 between λ = 10 and 18, never 2.
const KNOWN_FAILURES: [u32; 2] = [8, 9];

// Frozen baselines from the full-enumeration oracle.
/// max over λ ∈ 10..=18 of f_λ·√λ at ε = 0.05 (= √18).
const CLT_BASELINE_MAX: f64 = 4.242_640_687_119_3;
/// max over λ ∈ 10..=18, |u| ≤ 2√λ of E·√λ/4^λ.
const SECOND_MOMENT_BASELINE_MAX: f64 = 0.115;
/// Window for μ_n − log₂(n+1) + s₂(n) over n ∈ [2^10, 2^14).
const FLUCTUATION_WINDOW: (f64, f64) = (-0.415, 1e-12);

// Pinned tolerances.
const SLOPE_TARGET: f64 = -0.5;
const SLOPE_TOLERANCE: f64 = 0.25;
const SPEARMAN_TOLERANCE: f64 = 1e-12;
const CONTROL_GROWTH: f64 = 2.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn table_one() -> Vec<Vec<(u64, u128)>> {
    vec![
        vec![(0, 1)],
        vec![(1, 2)],
        vec![(1, 2), (2, 1)],
        vec![(2, 4)],
        vec![(1, 2), (2, 1), (3, 2)],
        vec![(2, 4), (3, 2)],
        vec![(2, 4), (3, 2), (4, 1)],
        vec![(3, 8)],
        vec![(1, 2), (2, 1), (3, 2), (4, 4)],
        vec![(2, 4), (3, 2), (4, 4)],
        vec![(2, 4), (3, 4), (4, 1), (5, 2)],
        vec![(3, 8), (4, 4)],
        vec![(2, 4), (3, 2), (4, 5), (5, 2)],
        vec![(3, 8), (4, 4), (5, 2)],
        vec![(3, 8), (4, 4), (5, 2), (6, 1)],
        vec![(4, 16)],
        vec![(1, 2), (2, 1), (3, 2), (4, 4), (5, 8)],
        vec![(2, 4), (3, 2), (4, 4), (5, 8)],
    ]
}

fn table_reproduction() -> Outcome {
    let table = table_one();
    let bad: Vec<usize> = (0..table.len())
        .filter(|&n| tilde_row(n as u64).entries() != table[n].as_slice())
        .collect();
    outcome(bad.is_empty(), format!("columns n = 0..=17, mismatches {bad:?}"))
}

fn oracle_equivalence() -> Outcome {
    let binary = (0..=4096u64)
        .filter(|&n| tilde_row(n) != row_bruteforce(n, 2).unwrap())
        .count();
    let mut general = 0;
    for p in [3u64, 5] {
        general += (0..=2048u64)
            .filter(|&n| tilde_row_general(n, p).unwrap() != row_bruteforce(n, p).unwrap())
            .count();
    }
    outcome(
        binary == 0 && general == 0,
        format!("p=2 n<=4096: {binary} mismatches; p=3,5 n<=2048: {general} mismatches"),
    )
}

fn nu_int(mut m: u64, p: u64) -> i64 {
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    e
}

fn valuation_triple() -> Outcome {
    let mut bad = 0u64;
    let mut checked = 0u64;
    for p in [2u64, 3, 5] {
        for n in 0..=512u64 {
            // C(n, t) = Π_{i=1}^{t} (n − i + 1)/i, factor by factor
            let mut direct = 0i64;
            for t in 0..=n {
                if t > 0 {
                    direct += nu_int(n - t + 1, p) - nu_int(t, p);
                }
                let kummer = nu_binomial(n, t as i64, p).unwrap() as i64;
                let legendre = nu_factorial(n, p).unwrap() as i64
                    - nu_factorial(t, p).unwrap() as i64
                    - nu_factorial(n - t, p).unwrap() as i64;
                checked += 1;
                if kummer != legendre || kummer != direct {
                    bad += 1;
                }
            }
        }
    }
    outcome(bad == 0, format!("{checked} triples, {bad} disagreements"))
}

fn block_count(n: u64, word: &str) -> i64 {
    let bits = format!("{n:b}");
    (0..bits.len().saturating_sub(word.len() - 1))
        .filter(|&i| &bits[i..i + word.len()] == word)
        .count() as i64
}

fn howard_oracle(n: u64, j: u32) -> BigRational {
    let b = |w: &str| BigRational::from_integer(block_count(n, w).into());
    let b10 = b("10");
    match j {
        1 => q(1, 2) * &b10,
        2 => q(-1, 8) * &b10 + q(1, 8) * &b10 * &b10 + b("100") + q(1, 4) * b("110"),
        _ => {
            q(1, 24) * &b10 - q(1, 16) * &b10 * &b10 - q(1, 2) * b("100") - q(1, 8) * b("110")
                + q(1, 48) * &b10 * &b10 * &b10
                + q(1, 2) * &b10 * b("100")
                + q(1, 8) * &b10 * b("110")
                + q(2, 1) * b("1000")
                + q(1, 2) * b("1010")
                + q(1, 2) * b("1100")
                + q(1, 8) * b("1110")
        }
    }
}

fn howard_formulas() -> Outcome {
    let mut mismatches: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
    for n in 1..=4096u64 {
        let row = tilde_row(n);
        for j in 1..=3u32 {
            let ratio = BigRational::new(
                BigInt::from(row.theta(i64::from(j))),
                BigInt::from(row.theta(0)),
            );
            if howard_oracle(n, j) != ratio || howard_ratio(n, j).unwrap() != ratio {
                mismatches.entry(j).or_default().push(n);
            }
        }
    }
    let summary: Vec<String> = mismatches
        .iter()
        .map(|(j, ns)| format!("j={j}: {} rows, first n={}", ns.len(), ns[0]))
        .collect();
    outcome(
        mismatches.is_empty(),
        format!("n = 1..=4096, j = 1..=3; mismatches [{}]", summary.join("; ")),
    )
}

fn gf_coefficients() -> Outcome {
    let report = verify_gf_identities(12).unwrap();
    // an independent pass over M: expand and compare with direct sums
    let lambda_max = 12u32;
    let series = closed_forms::m_gf()
        .expand(2, [lambda_max, 2 * lambda_max + 4, 0])
        .unwrap();
    let mut m_bad = 0;
    for lambda in 0..=lambda_max {
        let t = moments_direct(lambda).unwrap();
        for k in 0..=2 * lambda + 4 {
            if series.coefficient([lambda, k, 0]) != MomentTable::get(&t.m, i64::from(k)) {
                m_bad += 1;
            }
        }
    }
    let base_ok = (0..=4).all(|k| series.coefficient([0, k, 0]) == q(if k == 1 { 2 } else { 0 }, 1));
    outcome(
        report.is_clean() && m_bad == 0 && base_ok,
        format!(
            "{} coefficients, {} discrepancies; M re-expanded: {m_bad} mismatches; m_0,k = 2δ: {base_ok}",
            report.checked,
            report.discrepancies.len()
        ),
    )
}

fn uniform_closed_forms() -> Outcome {
    let mut bad = Vec::new();
    for lambda in 0..=20u32 {
        let m = uniform_moments(lambda);
        let (mut s1, mut s2) = (0u128, 0u128);
        for n in (1u128 << lambda)..(1u128 << (lambda + 1)) {
            s1 += n;
            s2 += n * n;
        }
        let size = BigInt::from(1u64 << lambda);
        let ok = m.agrees()
            && m.mean_closed == BigRational::new(BigInt::from(s1), size.clone())
            && m.square_closed == BigRational::new(BigInt::from(s2), size);
        if !ok {
            bad.push(lambda);
        }
    }
    outcome(bad.is_empty(), format!("λ = 0..=20, mismatches {bad:?}"))
}

fn lemma_ratios() -> Outcome {
    let lambdas: Vec<u32> = (8..=22).collect();
    let points = [UPoint::Fixed(0), UPoint::Sqrt(1)];
    let t = lemma_ratio_checks(&lambdas, &points).unwrap();
    let mut notes = Vec::new();
    let mut pass = true;
    for point in points {
        for family in ["frak_m", "frak_m_prime", "frak_m2"] {
            let d9 = t.row(family, 9, point).unwrap().deviation;
            let d18 = t.row(family, 18, point).unwrap().deviation;
            pass &= d18 < d9;
            notes.push(format!("{family}@u={point}: {d9:.4}->{d18:.4}"));
        }
    }
    let slope = t.slope("frak_m", UPoint::Fixed(0)).unwrap();
    pass &= (slope - SLOPE_TARGET).abs() <= SLOPE_TOLERANCE;
    outcome(
        pass,
        format!("deviation λ=9->18 [{}]; first-moment slope at u=0 {slope:.4}", notes.join(", ")),
    )
}

fn theorem_one() -> Outcome {
    let lambdas: Vec<u32> = (10..=18).collect();
    let values: Vec<f64> = lambdas
        .iter()
        .map(|&l| clt_scan(l, 0.05, ScanMode::Full).unwrap().fraction_sqrtlambda)
        .collect();
    let x: Vec<f64> = lambdas.iter().map(|&l| f64::from(l)).collect();
    let rho = spearman(&x, &values);
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let pass = rho <= SPEARMAN_TOLERANCE && max <= CLT_BASELINE_MAX;
    let shown: Vec<String> = values.iter().map(|v| format!("{v:.4}")).collect();
    outcome(
        pass,
        format!("f·√λ = [{}], Spearman {rho:.3}, max {max:.4} (baseline {CLT_BASELINE_MAX:.4})", shown.join(", ")),
    )
}

/// Largest normalized second moment over the integers `|u| ≤ 2√λ`.
fn second_moment_max(lambda: u32, shift: f64) -> f64 {
    let bound = (2.0 * f64::from(lambda).sqrt()).floor() as i64;
    let us: Vec<i64> = (-bound..=bound).collect();
    let config = SecondMomentConfig {
        v: CenteringRule::Phi { shift },
        ..Default::default()
    };
    second_moment_scan(lambda, &us, &config)
        .unwrap()
        .iter()
        .map(|r| r.normalized)
        .fold(f64::MIN, f64::max)
}

fn proposition_one() -> Outcome {
    let lambdas: Vec<u32> = (10..=18).collect();
    let x: Vec<f64> = lambdas.iter().map(|&l| f64::from(l)).collect();
    let centered: Vec<f64> = lambdas.iter().map(|&l| second_moment_max(l, 0.0)).collect();
    let rho = spearman(&x, &centered);
    let max = centered.iter().copied().fold(f64::MIN, f64::max);
    let bounded = rho <= SPEARMAN_TOLERANCE && max <= SECOND_MOMENT_BASELINE_MAX;
    let growth = second_moment_max(18, 0.1) / second_moment_max(10, 0.1);
    let control = growth >= CONTROL_GROWTH;
    outcome(
        bounded && control,
        format!(
            "centered: max {max:.5} (baseline {SECOND_MOMENT_BASELINE_MAX}), Spearman {rho:.3} -> {}; \
             control v=Φ+0.1 growth λ=10->18 ×{growth:.3} (need ×{CONTROL_GROWTH}) -> {}",
            if bounded { "ok" } else { "fail" },
            if control { "ok" } else { "fail" },
        ),
    )
}

fn singmaster() -> Outcome {
    let spot = singmaster_average(4, 0, 2).unwrap() == q(11, 12);
    let mut notes = Vec::new();
    let mut pass = spot;
    for j in 0..=2u32 {
        let small = singmaster_average(1 << 8, j, 2).unwrap();
        let large = singmaster_average(1 << 16, j, 2).unwrap();
        pass &= large < small;
        notes.push(format!(
            "j={j}: {:.4} -> {:.4}",
            num_traits::ToPrimitive::to_f64(&small).unwrap(),
            num_traits::ToPrimitive::to_f64(&large).unwrap()
        ));
    }
    outcome(pass, format!("N=2^8 -> 2^16 [{}]; (4,0,2) = 11/12: {spot}", notes.join(", ")))
}

fn mean_valuation() -> Outcome {
    let disagree = (0..=4096u64).filter(|&n| !mu_n(n).agrees()).count();
    let spot = mu_n(12).from_counts == q(18, 13);
    let (mut lo, mut hi) = (f64::MAX, f64::MIN);
    for n in (1u64 << 10)..(1u64 << 14) {
        let f = mu_n(n).fluctuation;
        lo = lo.min(f);
        hi = hi.max(f);
    }
    let inside = lo >= FLUCTUATION_WINDOW.0 && hi <= FLUCTUATION_WINDOW.1;
    outcome(
        disagree == 0 && spot && inside,
        format!(
            "{disagree} disagreements for n <= 4096; μ₁₂ = 18/13: {spot}; fluctuation in [{lo:.5}, {hi:.5}] within {FLUCTUATION_WINDOW:?}"
        ),
    )
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 11] = [
        (1, "Table 1 reproduction", Duration::from_secs(1), table_reproduction),
        (2, "row DP equals brute force", Duration::from_secs(60), oracle_equivalence),
        (3, "Kummer = Legendre = direct", Duration::from_secs(60), valuation_triple),
        (4, "Howard formulas j = 1, 2, 3", Duration::from_secs(60), howard_formulas),
        (5, "GF coefficients and A/B/C system", Duration::from_secs(600), gf_coefficients),
        (6, "uniform moments on I_λ", Duration::from_secs(1), uniform_closed_forms),
        (7, "moment ratio convergence", Duration::from_secs(1800), lemma_ratios),
        (8, "bad-set fraction trend", Duration::from_secs(1800), theorem_one),
        (9, "second moments and control", Duration::from_secs(1800), proposition_one),
        (10, "interval average decreases", Duration::from_secs(300), singmaster),
        (11, "mean valuation formulas", Duration::from_secs(60), mean_valuation),
    ];
    let mut failing = Vec::new();
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let pass = result.pass && elapsed <= budget;
        if !pass {
            failing.push(id);
        }
        let status = match (pass, KNOWN_FAILURES.contains(&id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!(
            "criterion {id:>2} {status:<12} {name}: {} [{:.2?} of {:?}]",
            result.detail, elapsed, budget
        );
    }
    if failing != KNOWN_FAILURES {
        println!("failing criteria {failing:?}, expected {KNOWN_FAILURES:?}");
        std::process::exit(1);
    }
    println!(
        "{} of 11 criteria pass; known failures {KNOWN_FAILURES:?}",
        11 - failing.len()
    );
}
