use num_rational::Ratio;
use proptest::prelude::*;
use zplus::arith::is_prime;
use zplus::screener::{lambert_w, phi, screen_hopf, screen_quasi_hopf, screen_range, Outcome, Verdict, LAMBERT_TOLERANCE};

fn next_prime(mut n: u64) -> u64 {
    while !is_prime(n) {
        n += 1;
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lambert_inverts_w_exp_w(e in -6.0f64..300.0) {
        let x = 10f64.powf(e);
        let w = lambert_w(x).unwrap();
        // Compared in log form, which stays accurate for huge x.
        if w > 1.0 {
            prop_assert!(((w + w.ln()) - x.ln()).abs() <= LAMBERT_TOLERANCE * x.ln().abs().max(1.0));
        } else {
            prop_assert!((w * w.exp() - x).abs() <= LAMBERT_TOLERANCE * x);
        }
    }

    #[test]
    fn phi_is_increasing(a in 0.5f64..12.0, gap in 0.01f64..3.0) {
        let x = 10f64.powf(a);
        prop_assert!(phi(x).unwrap() < phi(x * 10f64.powf(gap)).unwrap());
    }

    #[test]
    fn exclusion_is_monotone_in_the_characteristic(p_seed in 3u64..5000, q1_seed in 3u64..400, gap in 1u64..400) {
        let p = next_prime(p_seed);
        let q1 = next_prime(q1_seed);
        let q2 = next_prime(q1 + gap);
        prop_assume!(q1 != p && q2 != p);
        let v1 = screen_hopf(p, q1, Some(4)).unwrap().verdict;
        let v2 = screen_hopf(p, q2, Some(4)).unwrap().verdict;
        if v1 == Verdict::Excluded {
            prop_assert_eq!(v2, Verdict::Excluded);
        }
    }

    #[test]
    fn nine_halves_is_exact(p_seed in 3u64..10_000, q_seed in 3u64..3000) {
        let p = next_prime(p_seed);
        let q = next_prime(q_seed);
        prop_assume!(q != p);
        let report = screen_hopf(p, q, Some(4)).unwrap();
        let check = report.checks.iter().find(|c| c.name == "nine_halves").unwrap();
        prop_assert!(check.exact);
        prop_assert_eq!(check.outcome == Outcome::Fires, Ratio::new(p, q + 2) <= Ratio::new(14, 3));
    }
}

#[test]
fn quasi_hopf_threshold() {
    for p in (3..200u64).filter(|&p| is_prime(p)) {
        let excluded = screen_quasi_hopf(p, None).unwrap().verdict == Verdict::Excluded;
        assert_eq!(excluded, p <= 31, "p = {p}");
    }
}

#[test]
fn range_screen_is_ordered_and_pointwise() {
    let reports = screen_range(3, 400, 11, None).unwrap();
    let primes: Vec<u64> = (3..=400).filter(|&p| is_prime(p)).collect();
    assert_eq!(reports.iter().map(|r| r.p).collect::<Vec<_>>(), primes);
    for r in &reports {
        assert_eq!(r, &screen_hopf(r.p, 11, None).unwrap());
    }
}
