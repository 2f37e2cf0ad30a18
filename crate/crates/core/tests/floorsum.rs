use num_traits::ToPrimitive;
use polya_core::besseloracle;
use polya_core::exactnum::{int, rat, Rational};
use polya_core::floorsum::{self, p, p_bar, tfs, tfs_f64, FloorSumError};
use proptest::prelude::*;

fn cubic(c: [i64; 4], den: i64) -> impl Fn(i64) -> Rational {
    move |m| {
        let x = int(m);
        (int(c[0]) + int(c[1]) * &x + int(c[2]) * &x * &x + int(c[3]) * &x * &x * &x) / int(den)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn additivity(c0 in -50i64..50, c1 in -50i64..50, c2 in -9i64..9, c3 in -3i64..3,
                  den in 1i64..40, a in -30i64..30, l1 in 1i64..30, l2 in 1i64..30) {
        let g = cubic([c0, c1, c2, c3], den);
        let (b, c) = (a + l1, a + l1 + l2);
        let left = tfs(a, b, &g).unwrap().value + tfs(b, c, &g).unwrap().value;
        prop_assert_eq!(left, tfs(a, c, &g).unwrap().value);
    }

    #[test]
    fn exact_and_float_sums_agree(c0 in -50i64..50, c1 in -50i64..50, den in 1i64..40,
                                  a in -30i64..30, len in 1i64..40) {
        let g = cubic([c0, c1, 0, 0], den);
        let exact = tfs(a, a + len, &g).unwrap();
        // exact floors are recovered from doubles away from integer values
        let float = tfs_f64(a, a + len, |m| (c0 + c1 * m) as f64 / den as f64 + 1e-9).unwrap();
        prop_assert_eq!(&exact.value, &float.value);
        prop_assert_eq!(exact.recompute(), exact.value.clone());
        prop_assert!(exact.twice() == (&exact.value * int(2)).to_integer());
    }

    #[test]
    fn counts_lattice_points(c0 in 0i64..200, c1 in 0i64..20, den in 1i64..10, len in 1i64..30) {
        let g = cubic([c0, c1, 0, 0], den);
        let t = tfs(0, len, &g).unwrap().value;
        let mut twice = 0i64;
        for m in 0..=len {
            let w = if m == 0 || m == len { 1 } else { 2 };
            twice += w * (1..).take_while(|&n| int(n) <= g(m)).count() as i64;
        }
        prop_assert_eq!(t, rat(twice, 2));
    }
}

#[test]
fn empty_interval_rejected() {
    assert!(matches!(
        tfs(3, 3, |_| int(0)),
        Err(FloorSumError::EmptyInterval { .. })
    ));
    assert!(matches!(
        tfs_f64(0, 2, |m| if m == 1 { f64::NAN } else { 0.0 }),
        Err(FloorSumError::NonFinite(1))
    ));
}

/// `N(r, λ) = 2T(γ_{λ,rλ}, 0, ⌊λ⌋ + 1)` with `γ` built from Bessel phases.
#[test]
fn annulus_count_is_twice_phase_floor_sum() {
    for j in 1..=9 {
        let r = j as f64 / 10.0;
        for i in 1..=60 {
            let lambda = i as f64 / 2.0;
            let n = lambda.floor() as i64 + 1;
            let sum = tfs_f64(0, n, |m| {
                besseloracle::gamma(lambda, r * lambda, m as f64).unwrap()
            })
            .unwrap();
            let count = besseloracle::count_annulus(r, lambda).unwrap();
            assert_eq!(
                sum.twice().to_u64().unwrap(),
                count,
                "r = {r}, lambda = {lambda}"
            );
        }
    }
}

#[test]
fn count_below_majorants() {
    for (ln, ld, mn, md) in [
        (5, 2, 1, 2),
        (10, 1, 3, 1),
        (33, 2, 12, 1),
        (30, 1, 26, 1),
        (40, 1, 0, 1),
        (24, 1, 21, 1),
    ] {
        let (lq, mq) = (rat(ln, ld), rat(mn, md));
        let (l, m) = (ln as f64 / ld as f64, mn as f64 / md as f64);
        let pf = p(l, m);
        for k in [8, 12, 20] {
            let pb = p_bar(&lq, &mq, k).unwrap().to_i64().unwrap();
            assert!(pf <= pb, "P = {pf} > P-bar = {pb} at ({l}, {m}), k = {k}");
        }
        if m > 0.0 {
            let n = besseloracle::count_annulus(m / l, l).unwrap() as i64;
            assert!(n <= pf, "N = {n} > P = {pf} at ({l}, {m})");
        }
    }
}

#[test]
fn majorant_monotone_in_both_arguments() {
    let at = |l: i64, m: i64| p_bar(&rat(l, 4), &rat(m, 4), 12).unwrap();
    for l in (20..=120).step_by(20) {
        for m in (0..l - 4).step_by(8) {
            assert!(at(l, m) <= at(l + 4, m), "lambda at ({l}/4, {m}/4)");
            assert!(at(l, m + 4) <= at(l, m), "mu at ({l}/4, {m}/4)");
        }
    }
}

#[test]
fn majorant_report_matches_value() {
    let ev = polya_core::boundfns::Evaluator::new(12).unwrap();
    let (l, m) = (rat(77, 4), rat(9, 2));
    let report = floorsum::p_bar_report(&ev, &l, &m).unwrap();
    assert_eq!(report.terms.len(), 21);
    assert_eq!(report.twice(), floorsum::p_bar_with(&ev, &l, &m).unwrap());
    assert!(floorsum::p_bar(&m, &l, 12).is_err());
}
