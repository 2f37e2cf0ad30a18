use std::cmp::Ordering;
use std::f64::consts::PI;

use polya_core::besseloracle;
use polya_core::exactnum::{int, rat, to_f64, Rational};
use polya_core::regions::*;

fn q(x: f64) -> Rational {
    Rational::from_float(x).unwrap()
}

#[test]
fn eta_jumps_up_at_each_break() {
    let breaks = r_breaks();
    for j in 1..5 {
        let r = to_f64(&breaks[j]);
        let below = eta_ii(r - 1e-12);
        let at = eta_ii(r);
        let edge = PI * r.sqrt() / (1.0 - r);
        assert!((below - j as f64 * edge).abs() < 1e-6 * edge);
        assert!((at - (j + 1) as f64 * edge).abs() < 1e-9 * edge);
    }
    // increasing on each branch
    for i in 1..999 {
        let r = i as f64 / 1000.0;
        assert!(eta_ii(r + 1e-3) > eta_ii(r));
    }
}

/// Exact membership against the float boundary curves, away from the curves.
#[test]
fn membership_matches_boundaries() {
    let gap = 1e-6;
    for i in 1..=800 {
        let lambda = i as f64 / 2.0;
        for j in 0..i {
            let mu = j as f64 / 2.0;
            let (l, m) = (rat(i, 2), rat(j, 2));
            let set = classify(&l, &m).unwrap();
            let near = |b: f64| (mu - b).abs() < gap;
            let zi = zeta_i(lambda);
            if !near(zi) {
                assert_eq!(
                    set.contains(RegionLabel::I),
                    mu > 0.0 && (lambda * lambda <= 8.0 || mu > zi),
                    "I at ({lambda}, {mu})"
                );
            }
            let z2 = zeta_ii(lambda);
            if !near(z2) && mu > 0.0 {
                assert_eq!(
                    set.contains(RegionLabel::II),
                    mu > z2,
                    "II at ({lambda}, {mu})"
                );
            }
            if lambda > 10.0 && !near(zeta_iii(lambda)) {
                assert_eq!(
                    set.contains(RegionLabel::III),
                    mu > 0.0 && mu < zeta_iii(lambda),
                    "III at ({lambda}, {mu})"
                );
            }
            if lambda >= 578.0 / 45.0 && !near(zeta_iv_plus(lambda)) && !near(zeta_iv_minus(lambda))
            {
                let inside = mu > zeta_iv_minus(lambda) && mu < zeta_iv_plus(lambda);
                assert_eq!(
                    set.contains(RegionLabel::IV),
                    inside,
                    "IV at ({lambda}, {mu})"
                );
            }
            if lambda > 16.0 * PI {
                let (lo, hi) = zeta_v(lambda);
                if !near(lo) && !near(hi) {
                    assert_eq!(
                        set.contains(RegionLabel::V),
                        mu > lo && mu < hi,
                        "V at ({lambda}, {mu})"
                    );
                }
            } else {
                assert!(!set.contains(RegionLabel::V));
            }
            assert_eq!(set.contains(RegionLabel::Comp), in_comp(&l, &m));
        }
    }
}

#[test]
fn region_one_is_where_the_bound_is_trivial() {
    // below the first eigenvalue the count is zero
    for (l, m) in [(2.0, 0.5), (2.8, 1.0), (10.0, 9.7), (40.0, 39.95)] {
        let set = classify(&q(l), &q(m)).unwrap();
        assert!(set.contains(RegionLabel::I), "({l}, {m})");
        assert_eq!(
            besseloracle::count_annulus(m / l, l).unwrap(),
            0,
            "({l}, {m})"
        );
    }
}

/// Every theory-labelled grid point with λ <= 40 satisfies the bound.
#[test]
fn theory_points_satisfy_the_bound() {
    let mut checked = 0;
    for i in 1..=160 {
        for j in 1..i {
            let (l, m) = (rat(i, 4), rat(j, 4));
            if !classify(&l, &m).unwrap().has_theory() {
                continue;
            }
            let (lf, mf) = (i as f64 / 4.0, j as f64 / 4.0);
            let n = besseloracle::count_annulus(mf / lf, lf).unwrap() as f64;
            assert!(n < (lf * lf - mf * mf) / 4.0, "N = {n} at ({lf}, {mf})");
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn cylinder_cases_are_positive() {
    let want = [0.0548, 2.4016, 1.7635, 0.1459];
    for ((j, r, tau), w) in cylinder_cases().into_iter().zip(want) {
        let s = s_poly(j, &r, &tau).unwrap();
        assert_eq!(s.sign, Ordering::Greater);
        assert!((s.to_f64() - w).abs() < 1e-3);
        assert_eq!(r, r_breaks()[j]);
    }
    // an even split does not work on the second branch
    let s = s_poly(2, &rat(4, 5), &[rat(1, 2), rat(1, 2)]).unwrap();
    assert_eq!(s.sign, Ordering::Less);
    assert!(s_poly(1, &int(1), &[int(1)]).is_err());
    assert!(s_poly(2, &rat(1, 2), &[int(0), int(1)]).is_err());
}

#[test]
fn boundary_ratios() {
    assert!((ratio_iv_v_at_150() - 1.01126).abs() < 1e-4);
    assert!((ratio_v_comp_beyond_150() - 1.03148).abs() < 1e-4);
    let (lo, _) = zeta_v(150.0);
    assert!((zeta_iv_plus(150.0) / lo - ratio_iv_v_at_150()).abs() < 1e-12);
    for lambda in [150.0, 151.0, 300.0, 1e4] {
        assert!(orderings_at(lambda), "lambda = {lambda}");
        let (_, hi) = zeta_v(lambda);
        assert!(hi / zeta_comp(lambda) >= ratio_v_comp_beyond_150() - 1e-12);
    }
}

#[test]
fn coverage_on_a_coarse_grid() {
    let report = coverage_check(&rat(1, 2), &int(250)).unwrap();
    assert!(report.passed(), "{:?}", report.uncovered.first());
    assert_eq!(report.points, 500 * 499 / 2);
    assert_eq!(
        report.points,
        report.theory_points + report.comp_only_points
    );
}

#[test]
fn order_is_enforced() {
    assert!(classify(&int(5), &int(6)).is_err());
    assert!(classify(&int(5), &int(-1)).is_err());
    assert!(classify(&int(5), &int(0)).is_ok());
}
