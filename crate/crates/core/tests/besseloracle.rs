use std::f64::consts::PI;

use polya_core::besseloracle::*;
use proptest::prelude::*;

extern "C" {
    fn jn(n: i32, x: f64) -> f64;
    fn yn(n: i32, x: f64) -> f64;
}

fn libm_jy(n: u32, x: f64) -> (f64, f64) {
    unsafe { (jn(n as i32, x), yn(n as i32, x)) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3_000))]

    #[test]
    fn agrees_with_libm(n in 0u32..40, x in 0.5f64..120.0) {
        let (j, y) = libm_jy(n, x);
        let ours = bessel_jy(n as f64, x);
        let (oj, oy) = (ours.j_value(), ours.y_value());
        // compare against the modulus, which is what the phase depends on
        let m = j.hypot(y);
        prop_assume!(m.is_finite());
        prop_assert!((oj - j).abs() <= 1e-9 * m, "J_{n}({x}): {oj} vs {j}");
        prop_assert!((oy - y).abs() <= 1e-9 * m, "Y_{n}({x}): {oy} vs {y}");
    }

    #[test]
    fn wronskian(nu in 0.0f64..30.0, x in 0.5f64..150.0) {
        let a = bessel_jy(nu, x);
        let b = bessel_jy(nu + 1.0, x);
        // J_{ν+1}Y_ν - J_νY_{ν+1} = 2/(πx), with exponents kept apart
        let w = b.j * a.y * (b.je + a.ye).exp() - a.j * b.y * (a.je + b.ye).exp();
        let want = 2.0 / (PI * x);
        let scale = (a.ln_modulus_sq() / 2.0 + b.ln_modulus_sq() / 2.0).exp();
        prop_assert!((w - want).abs() <= 1e-10 * scale.max(want), "nu = {nu}, x = {x}: {w} vs {want}");
    }

    #[test]
    fn theta_increases(nu in 0.0f64..40.0, x in 0.2f64..100.0, dx in 0.01f64..5.0) {
        let (a, b) = (theta(nu, x).unwrap(), theta(nu, x + dx).unwrap());
        // far below the turning point θ_ν + π/2 underflows and θ_ν is flat in doubles
        prop_assert!(a <= b);
        if x >= 0.8 * nu {
            prop_assert!(a < b, "nu = {nu}: {a} vs {b}");
        }
    }
}

#[test]
fn half_order_phase_is_linear() {
    // J_{1/2} + iY_{1/2} = sqrt(2/(πx)) e^{i(x - π/2)}
    for i in 1..=400 {
        let x = i as f64 / 4.0;
        assert!(
            (theta(0.5, x).unwrap() - (x - PI / 2.0)).abs() < 1e-10,
            "x = {x}"
        );
    }
}

/// `θ_ν' = 2/(πxM²)`, integrated with Simpson's rule, reproduces the phase.
#[test]
fn phase_solves_its_ode() {
    for nu in [0.0, 1.0, 2.5, 7.0, 15.0] {
        let rate = |x: f64| 2.0 / (PI * x * bessel_jy(nu, x).ln_modulus_sq().exp());
        let (a, b) = (nu + 1.0, nu + 40.0);
        let n = 4000;
        let h = (b - a) / n as f64;
        let mut s = rate(a) + rate(b);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * rate(a + h * i as f64);
        }
        let integral = s * h / 3.0;
        let diff = theta(nu, b).unwrap() - theta(nu, a).unwrap();
        assert!(
            (integral - diff).abs() < 1e-8,
            "nu = {nu}: {integral} vs {diff}"
        );
    }
}

#[test]
fn phase_at_zeros() {
    // θ_ν(j_{ν,k}) = (k - 1/2)π
    for (nu, zeros) in [
        (0.0, [2.404825557695773, 5.520078110286311]),
        (1.0, [3.831705970207512, 7.015586669815619]),
    ] {
        for (k, z) in zeros.into_iter().enumerate() {
            assert!((theta(nu, z).unwrap() - (k as f64 + 0.5) * PI).abs() < 1e-9);
            assert_eq!(count_j_zeros(nu, z + 1e-6).unwrap(), k as u64 + 1);
            assert_eq!(count_j_zeros(nu, z - 1e-6).unwrap(), k as u64);
        }
    }
}

#[test]
fn branch_and_crossproduct_counts_agree() {
    for r in [0.1, 0.3, 0.5, 0.75, 0.9] {
        for m in [0u32, 1, 4, 11] {
            for lambda in [12.5, 27.0, 40.0] {
                if lambda <= m as f64 {
                    continue;
                }
                let a = branch_count(r, m, lambda).unwrap();
                let b = count_zeros_crossproduct(r, m, lambda).unwrap();
                assert_eq!(a, b, "r = {r}, m = {m}, lambda = {lambda}");
            }
        }
    }
}

#[test]
fn crossproduct_zeros_are_roots() {
    for z in crossproduct_zeros(0.5, 2, 30.0).unwrap() {
        assert!(
            (Theta(0.5, 2, z).unwrap() / PI - (Theta(0.5, 2, z).unwrap() / PI).round()).abs()
                < 1e-6
        );
    }
}

#[test]
fn disk_counts() {
    // 2.405, 3.832 (x2), 5.136 (x2), 5.520, 6.380 (x2)
    assert_eq!(count_disk(3.0).unwrap(), 1);
    assert_eq!(count_disk(4.0).unwrap(), 3);
    assert_eq!(count_disk(5.3).unwrap(), 5);
    assert_eq!(count_disk(6.0).unwrap(), 6);
    assert_eq!(count_disk(6.5).unwrap(), 8);
}

#[test]
fn cylinder_count_brute_force() {
    for h in [0.2, 0.7, 1.3, 2.9] {
        for lambda in [1.0, 4.5, 11.0, 30.0] {
            let l2 = lambda * lambda;
            let mut brute = 0;
            for n in 1..200i64 {
                for m in -40i64..=40 {
                    if (m * m) as f64 + (PI * n as f64 / h).powi(2) <= l2 {
                        brute += 1;
                    }
                }
            }
            assert_eq!(
                count_cylinder(h, lambda),
                brute,
                "h = {h}, lambda = {lambda}"
            );
        }
    }
}

#[test]
fn gamma_is_phase_difference() {
    let (l, m, z) = (20.0, 7.0, 3.0);
    let g = gamma(l, m, z).unwrap();
    assert!((g - (theta(z, l).unwrap() - theta(z, m).unwrap()) / PI).abs() < 1e-14);
    assert!((gamma(l, 0.0, z).unwrap() - (theta(z, l).unwrap() + PI / 2.0) / PI).abs() < 1e-14);
    assert!(gamma(l, -1.0, z).is_err());
    assert!(Theta(1.0, 0, 3.0).is_err());
}
