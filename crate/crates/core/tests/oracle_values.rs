//! Values frozen from an independent arbitrary-precision integer oracle.

use num_bigint::BigInt;

use ostrowski_core::discrepancy::{discrepancy_exact, DEFAULT_CAP};
use ostrowski_core::sums::{cot_remainder, recip_sum, t_sum_closed, t_sum_naive};
use ostrowski_core::verify::{
    caps, hardy_littlewood_scan, lemma_ost_check, sinai_ulcigrai_check, suite, theorem_bound, DEFAULT_BUDGET,
};
use ostrowski_core::{convergents, Alpha, AlphaSpec, Verdict};

fn alpha(spec: AlphaSpec) -> Alpha {
    Alpha::new(spec).unwrap()
}

fn t_abs_at(a: &Alpha, n: usize) -> f64 {
    t_sum_closed(a, a.cf().q_u64(n).unwrap()).unwrap().t.norm()
}

fn close(got: f64, want: f64, tol: f64) {
    assert!((got - want).abs() <= tol * want.abs().max(1.0), "got {got}, want {want}");
}

#[test]
fn sqrt2_convergents() {
    let qs: Vec<BigInt> = [1, 2, 2, 2, 2].iter().map(|&a| BigInt::from(a)).collect();
    let got: Vec<(i64, i64)> = convergents(&qs)
        .unwrap()
        .into_iter()
        .map(|(p, q)| (p.try_into().unwrap(), q.try_into().unwrap()))
        .collect();
    assert_eq!(got, [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)]);
}

#[test]
fn golden_fracs() {
    let a = alpha(suite::phi());
    close(a.frac_exact(1).unwrap().approx, -0.3819660112501051, 1e-15);
    close(a.frac_exact(2).unwrap().approx, 0.2360679774997898, 1e-15);
    close(a.frac_exact(89).unwrap().approx, 0.00502499874064149, 1e-12);
    assert!(a.frac_exact(0).is_err());
}

#[test]
fn cot_remainder_quarter() {
    close(cot_remainder(0.25).unwrap(), std::f64::consts::FRAC_PI_4 - 1.0, 1e-15);
}

#[test]
fn golden_t_sums() {
    let a = alpha(suite::phi());
    for (n, want) in [
        (2, 1.1806551922058024),
        (5, 1.3649346055829017),
        (10, 1.4186554385361587),
        (20, 1.4243385399937691),
        (30, 1.4243847484070082),
    ] {
        close(t_abs_at(&a, n), want, 1e-9);
    }
    let t = t_sum_closed(&a, a.cf().q_u64(30).unwrap()).unwrap().t;
    close(t.re, 1.3190961470376485, 1e-9);
    close(t.im, -0.5374544318962552, 1e-9);
}

#[test]
fn sqrt2_t_sums() {
    let a = alpha(suite::sqrt2());
    for (n, want) in [(1, 1.10121556540796), (5, 1.3067586566295923), (10, 1.3131562344389573), (16, 1.3132316283191217)] {
        close(t_abs_at(&a, n), want, 1e-9);
    }
}

#[test]
fn stress_spec_t_sums() {
    let g = alpha(suite::growing());
    close(t_abs_at(&g, 2), 1.139846490607361, 1e-9);
    assert_eq!(g.cf().q_u64(9), Some(740785));
    close(t_abs_at(&g, 9), 1.1169477542678128, 1e-9);
    for n in 0..=20 {
        assert_eq!(theorem_bound(g.cf(), n).unwrap(), 1.0, "n = {n}");
    }
    let s = alpha(suite::spike());
    close(t_abs_at(&s, 2), 1.3228753127569, 1e-9);
    close(t_abs_at(&s, 3), 0.9999997984685599, 1e-9);
}

#[test]
fn naive_agrees_with_closed() {
    for (_, spec) in suite::bounded() {
        let a = alpha(spec);
        for m in [3, 8, 21, 60] {
            let d = (t_sum_naive(&a, m).unwrap() - t_sum_closed(&a, m).unwrap().t).norm();
            assert!(d < 1e-12, "m = {m}: {d}");
        }
    }
}

#[test]
fn reciprocal_sum_golden() {
    let a = alpha(suite::phi());
    close(recip_sum(&a, 2).unwrap().value, 1.618033988749895, 1e-12);
}

#[test]
fn discrepancy_values() {
    let table: [(AlphaSpec, [f64; 7]); 3] = [
        (
            suite::phi(),
            [
                1.360679774997897,
                1.9148550549911671,
                1.4421998891764511,
                2.6917696247160903,
                3.1071487129602335,
                1.4467603998318346,
                1.4471066373062353,
            ],
        ),
        (
            suite::sqrt2(),
            [
                1.284271247461901,
                1.3238097667514535,
                2.7405358916149103,
                2.5007051205459345,
                1.3526865733285762,
                2.4558936386969927,
                3.8964631851250404,
            ],
        ),
        (
            suite::sqrt3(),
            [
                1.679491924311227,
                1.9230484541326376,
                3.066443659585222,
                2.79121828035516,
                3.4616295600529248,
                3.2679354638745313,
                4.687699444385178,
            ],
        ),
    ];
    for (spec, wants) in table {
        let a = alpha(spec);
        for (n, want) in [5, 12, 89, 100, 408, 987, 4181].into_iter().zip(wants) {
            let d = discrepancy_exact(&a, n, DEFAULT_CAP).unwrap();
            assert!(d.lo - 1e-12 <= want && want <= d.hi + 1e-12, "N = {n}: [{}, {}] vs {want}", d.lo, d.hi);
        }
    }
}

#[test]
fn eps_alpha_estimates() {
    for (spec, want) in [
        (suite::phi(), 0.38196601125010515),
        (suite::sqrt2(), 0.3431457505076198),
        (suite::sqrt3(), 0.2679491924311227),
        (AlphaSpec::quotients(&[0], Some(&[1, 10])), 0.08392021690038395),
    ] {
        close(alpha(spec).eps_alpha_estimate(10).unwrap(), want, 1e-12);
    }
}

#[test]
fn hardy_littlewood_golden() {
    let r = hardy_littlewood_scan(&alpha(suite::phi()), 100_000, caps::HL_PHI).unwrap();
    assert_eq!(r.argmax, 75026);
    close(r.max_abs, 0.5490576553701038, 1e-9);
    assert_eq!(r.verdict(), Verdict::Pass);
}

#[test]
fn ostrowski_sum_ratios() {
    let cases = [
        (suite::phi(), 15, 987, 714, 0.9723552985503106),
        (AlphaSpec::quotients(&[0], Some(&[1, 10])), 10, 221651, 110825, 0.9807286377167853),
        (suite::sqrt2(), 12, 33461, 16730, 1.0681756723297837),
        (suite::sqrt3(), 14, 7953, 3976, 1.322252545706435),
    ];
    for (spec, n, q, argmax, want) in cases {
        let r = lemma_ost_check(&alpha(spec), n, None, caps::LEMMA_OST, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.q_n, q);
        assert_eq!(r.argmax, argmax);
        close(r.max_ratio, want, 1e-9);
        assert_eq!(r.verdict(), Verdict::Pass);
    }
}

#[test]
fn sinai_golden_and_sqrt2() {
    let r = sinai_ulcigrai_check(&alpha(suite::phi()), 0..=30, caps::SINAI_PHI, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.verdict(), Verdict::Pass);
    close(r.max_ratio, 1.4243847484070082, 1e-9);
    let r = sinai_ulcigrai_check(&alpha(suite::sqrt2()), 0..=18, caps::SINAI_SQRT2, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.verdict(), Verdict::Pass);
    assert!(r.max_ratio > 1.3132 && r.max_ratio < 1.3133);
}
