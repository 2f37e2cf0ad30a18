//! Floating-point ground truth for the annulus spectrum.
//!
//! The Dirichlet eigenvalues of the annulus `{r < |x| < 1}` at frequency
//! `λ` are the zeros of the cross products
//! `L_{r,m}(x) = J_m(x)Y_m(rx) - Y_m(x)J_m(rx)`. They are counted here
//! through the Bessel phase `θ_ν`, defined by `J_ν + iY_ν = M e^{iθ_ν}` with
//! `θ_ν(0+) = -π/2`, and independently by scanning for sign changes.
//! Nothing in this module is rigorous; it exists to test the bounds.

pub mod bessel;

use std::f64::consts::PI;

use rayon::prelude::*;
use thiserror::Error;

pub use bessel::{bessel_j, bessel_jy, bessel_y, ScaledJY};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("argument must be positive, got {0}")]
    NonPositive(f64),
    #[error("order must be non-negative, got {0}")]
    NegativeOrder(f64),
    #[error("inner radius must lie in (0, 1), got {0}")]
    Radius(f64),
}

fn check_nu_x(nu: f64, x: f64) -> Result<(), OracleError> {
    if !(x > 0.0) {
        return Err(OracleError::NonPositive(x));
    }
    if !(nu >= 0.0) {
        return Err(OracleError::NegativeOrder(nu));
    }
    Ok(())
}

fn check_r(r: f64) -> Result<(), OracleError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(OracleError::Radius(r));
    }
    Ok(())
}

/// Number of sign changes of `J_ν` on `(0, x]`, together with the values at
/// `x`. All zeros of `J_ν` exceed `ν` and are more than `π` apart, so a unit
/// scan from `ν` sees each one.
fn j_zero_count(nu: f64, x: f64) -> (u64, ScaledJY) {
    let at_x = bessel_jy(nu, x);
    if x <= nu {
        return (0, at_x);
    }
    let steps = (x - nu).ceil().max(1.0) as u64;
    let h = (x - nu) / steps as f64;
    let mut count = 0;
    // J_ν > 0 on (0, j_{ν,1}) and j_{ν,1} > ν
    let mut prev = true;
    for i in 1..=steps {
        let jy = if i == steps {
            at_x
        } else {
            bessel_jy(nu, nu + h * i as f64)
        };
        let pos = jy.j >= 0.0;
        if pos != prev {
            count += 1;
        }
        prev = pos;
    }
    (count, at_x)
}

/// Number of zeros of `J_ν` in `(0, x]`.
pub fn count_j_zeros(nu: f64, x: f64) -> Result<u64, OracleError> {
    check_nu_x(nu, x)?;
    Ok(j_zero_count(nu, x).0)
}

/// Continuous Bessel phase `θ_ν(x)`.
pub fn theta(nu: f64, x: f64) -> Result<f64, OracleError> {
    check_nu_x(nu, x)?;
    let (k, jy) = j_zero_count(nu, x);
    let phi = jy.angle();
    // θ lies in [(k - 1/2)π, (k + 1/2)π), and θ ≡ φ (mod 2π)
    let target = k as f64 * PI;
    Ok(phi + 2.0 * PI * ((target - phi) / (2.0 * PI)).round())
}

/// `θ_ν(x)` extended by its limit `-π/2` at `x = 0`.
fn theta0(nu: f64, x: f64) -> Result<f64, OracleError> {
    if x == 0.0 {
        return Ok(-PI / 2.0);
    }
    theta(nu, x)
}

/// Phase difference `Θ_{r,m}(x) = θ_m(x) - θ_m(rx)`.
#[allow(non_snake_case)]
pub fn Theta(r: f64, m: u32, x: f64) -> Result<f64, OracleError> {
    check_r(r)?;
    check_nu_x(m as f64, x)?;
    Ok(theta(m as f64, x)? - theta(m as f64, r * x)?)
}

/// `γ_{λ,μ}(z) = (θ_z(λ) - θ_z(μ)) / π`, with `θ_z(0) = -π/2`.
pub fn gamma(lambda: f64, mu: f64, z: f64) -> Result<f64, OracleError> {
    check_nu_x(z, lambda)?;
    if mu < 0.0 {
        return Err(OracleError::NonPositive(mu));
    }
    Ok((theta(z, lambda)? - theta0(z, mu)?) / PI)
}

/// Sign of `L_{r,m}(x)` computed from scaled values.
fn cross_sign(r: f64, m: u32, x: f64) -> f64 {
    let a = bessel_jy(m as f64, x);
    let b = bessel_jy(m as f64, r * x);
    // J(x)Y(rx) - Y(x)J(rx)
    let e1 = a.je + b.ye;
    let e2 = a.ye + b.je;
    let e = e1.max(e2);
    let v = a.j * b.y * (e1 - e).exp() - a.y * b.j * (e2 - e).exp();
    v.signum()
}

/// Scan step for sign changes of `L_{r,m}`: its zeros are roughly
/// `π/(1-r)` apart.
fn cross_step(r: f64) -> f64 {
    (0.5f64).min((1.0 - r) / 4.0)
}

fn refine(r: f64, m: u32, mut lo: f64, mut hi: f64) -> f64 {
    let slo = cross_sign(r, m, lo);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if cross_sign(r, m, mid) == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Zeros of `L_{r,m}` in `(0, λ]`, located by a sign-change scan and
/// bisection.
pub fn crossproduct_zeros(r: f64, m: u32, lambda: f64) -> Result<Vec<f64>, OracleError> {
    check_r(r)?;
    check_nu_x(m as f64, lambda)?;
    let h = cross_step(r);
    // Θ_{r,m} < π on (0, m], so the scan can start there
    let start = h.max(m as f64);
    if lambda <= start {
        return Ok(Vec::new());
    }
    let steps = ((lambda - start) / h).ceil() as u64;
    let hh = (lambda - start) / steps as f64;
    let mut zeros = Vec::new();
    let mut xprev = start;
    let mut sprev = cross_sign(r, m, start);
    for i in 1..=steps {
        let x = if i == steps {
            lambda
        } else {
            start + hh * i as f64
        };
        let s = cross_sign(r, m, x);
        if s == 0.0 {
            zeros.push(x);
        } else if sprev != 0.0 && s != sprev {
            zeros.push(refine(r, m, xprev, x));
        }
        xprev = x;
        sprev = s;
    }
    Ok(zeros)
}

/// Number of zeros of `L_{r,m}` in `(0, λ]`.
pub fn count_zeros_crossproduct(r: f64, m: u32, lambda: f64) -> Result<u64, OracleError> {
    Ok(crossproduct_zeros(r, m, lambda)?.len() as u64)
}

/// `⌊Θ_{r,m}(λ)/π⌋`, the number of eigenvalue branches of angular index
/// `m` below `λ²`.
pub fn branch_count(r: f64, m: u32, lambda: f64) -> Result<u64, OracleError> {
    let t = Theta(r, m, lambda)?;
    Ok((t / PI).floor().max(0.0) as u64)
}

fn kappa(m: u32) -> u64 {
    if m == 0 {
        1
    } else {
        2
    }
}

/// Dirichlet eigenvalue count of the annulus `A_r` below `λ²`.
pub fn count_annulus(r: f64, lambda: f64) -> Result<u64, OracleError> {
    check_r(r)?;
    check_nu_x(0.0, lambda)?;
    let top = lambda.floor() as u32;
    (0..=top)
        .into_par_iter()
        .map(|m| branch_count(r, m, lambda).map(|n| kappa(m) * n))
        .sum()
}

/// Dirichlet eigenvalue count of the unit disk below `λ²`.
pub fn count_disk(lambda: f64) -> Result<u64, OracleError> {
    check_nu_x(0.0, lambda)?;
    let top = lambda.floor() as u32;
    (0..=top)
        .into_par_iter()
        .map(|m| count_j_zeros(m as f64, lambda).map(|n| kappa(m) * n))
        .sum()
}

/// Dirichlet eigenvalue count below `λ²` of the flat cylinder of height `h`:
/// `#{(n, m) ∈ ℕ×ℤ : m² + π²n²/h² <= λ²}`.
pub fn count_cylinder(h: f64, lambda: f64) -> u64 {
    assert!(
        h > 0.0 && lambda > 0.0,
        "count_cylinder needs h, lambda > 0"
    );
    let l2 = lambda * lambda;
    let mut total = 0;
    let mut n = 1u64;
    loop {
        let t = PI * n as f64 / h;
        let rest = l2 - t * t;
        if rest < 0.0 {
            return total;
        }
        let mut m = rest.sqrt().floor() as u64;
        while ((m + 1) * (m + 1)) as f64 <= rest {
            m += 1;
        }
        while m > 0 && (m * m) as f64 > rest {
            m -= 1;
        }
        total += 2 * m + 1;
        n += 1;
    }
}

/// Height of the comparison cylinder for inner radius `r`.
pub fn cylinder_height(r: f64) -> f64 {
    (1.0 - r) / r.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalisation_near_zero() {
        assert!((theta(5.0, 0.01).unwrap() + PI / 2.0).abs() < 1e-6);
        assert!(theta(0.0, 0.0).is_err());
    }

    #[test]
    fn first_cross_zero_for_half_radius() {
        assert_eq!(count_zeros_crossproduct(0.5, 0, 6.0).unwrap(), 0);
        assert_eq!(count_zeros_crossproduct(0.5, 0, 6.5).unwrap(), 1);
        assert!(Theta(0.5, 0, 6.0).unwrap() < PI);
        assert!(Theta(0.5, 0, 6.5).unwrap() > PI);
        assert_eq!(count_annulus(0.5, 6.0).unwrap(), 0);
    }

    #[test]
    fn disk_examples() {
        assert_eq!(count_disk(2.0).unwrap(), 0);
        assert_eq!(count_disk(2.5).unwrap(), 1);
    }

    #[test]
    fn cylinder_examples() {
        assert_eq!(count_cylinder(PI, 1.5), 3);
        assert_eq!(count_cylinder(2.0, PI / 2.0 - 1e-9), 0);
    }
}
