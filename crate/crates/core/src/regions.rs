//! Regions of the `(λ, μ)` plane where the Pólya inequality
//! `N(λ) < (λ² - μ²)/4` for the annulus of radii `μ/λ` and `1` is settled
//! analytically, and the computational region left to the certifier.
//!
//! Membership is decided exactly for rational inputs. Boundaries that
//! involve π are compared through π enclosures refined until the sign is
//! certain.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactnum::{int, pi_poly_sign, rat, to_f64, ExactError, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("need 0 <= mu < lambda, got lambda = {lambda}, mu = {mu}")]
    Order { lambda: Rational, mu: Rational },
    #[error("invalid tau vector: {0}")]
    Tau(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionLabel {
    I,
    II,
    III,
    IV,
    V,
    Comp,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 6] = [
        RegionLabel::I,
        RegionLabel::II,
        RegionLabel::III,
        RegionLabel::IV,
        RegionLabel::V,
        RegionLabel::Comp,
    ];

    pub fn is_theory(self) -> bool {
        self != RegionLabel::Comp
    }

    pub fn name(self) -> &'static str {
        match self {
            RegionLabel::I => "I",
            RegionLabel::II => "II",
            RegionLabel::III => "III",
            RegionLabel::IV => "IV",
            RegionLabel::V => "V",
            RegionLabel::Comp => "COMP",
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The set of regions containing a point; regions overlap.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegionSet(BTreeSet<RegionLabel>);

impl RegionSet {
    pub fn contains(&self, l: RegionLabel) -> bool {
        self.0.contains(&l)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn has_theory(&self) -> bool {
        self.0.iter().any(|l| l.is_theory())
    }

    pub fn labels(&self) -> impl Iterator<Item = RegionLabel> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for RegionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("NONE");
        }
        let names: Vec<&str> = self.0.iter().map(|l| l.name()).collect();
        f.write_str(&names.join(","))
    }
}

/// Breakpoints `r_0, ..., r_5` of the cylinder-comparison region.
pub fn r_breaks() -> [Rational; 6] {
    [
        int(0),
        rat(2, 3),
        rat(4, 5),
        rat(17, 20),
        rat(22, 25),
        int(1),
    ]
}

const R_BREAKS_F64: [f64; 6] = [0.0, 2.0 / 3.0, 0.8, 0.85, 0.88, 1.0];

/// Index `j` with `r_j <= r < r_{j+1}`.
fn r_branch(r: &Rational) -> usize {
    let b = r_breaks();
    (0..5).rev().find(|&j| r >= &b[j]).unwrap_or(0)
}

fn check_order(lambda: &Rational, mu: &Rational) -> Result<(), RegionError> {
    if mu.is_negative() || mu >= lambda {
        return Err(RegionError::Order {
            lambda: lambda.clone(),
            mu: mu.clone(),
        });
    }
    Ok(())
}

fn in_i(lambda: &Rational, mu: &Rational) -> bool {
    let l2 = lambda * lambda;
    mu.is_positive() && (l2 <= int(8) || l2 - int(8) <= mu * mu)
}

fn in_ii(lambda: &Rational, mu: &Rational) -> Result<bool, ExactError> {
    if !mu.is_positive() {
        return Ok(false);
    }
    let r = mu / lambda;
    let j = r_branch(&r) as i64;
    // λ(1 - r) < (j+1)π sqrt(r), squared
    let lhs = lambda * lambda * (int(1) - &r) * (int(1) - &r);
    let a2 = int((j + 1) * (j + 1)) * &r;
    Ok(pi_poly_sign(&a2, &int(0), &-lhs)? == Ordering::Greater)
}

fn in_iii(lambda: &Rational, mu: &Rational) -> bool {
    lambda > &int(10) && mu.is_positive() && mu * mu <= lambda / int(5) - int(2)
}

fn in_iv(lambda: &Rational, mu: &Rational) -> bool {
    lambda >= &rat(578, 45) && mu >= &rat(64, 225) && mu <= &(lambda / int(10) - int(1))
}

fn in_v(lambda: &Rational, mu: &Rational) -> Result<bool, ExactError> {
    // ζ_{V,-} < μ < ζ_{V,+} with λ > 16π is μ(λ - μ) > 4πλ
    let gap = mu * (lambda - mu);
    Ok(pi_poly_sign(&int(0), &(int(4) * lambda), &-gap)? == Ordering::Less)
}

/// Membership in the computational region `5/2 <= λ <= 150`,
/// `0 <= μ <= 22λ/25`.
pub fn in_comp(lambda: &Rational, mu: &Rational) -> bool {
    lambda >= &rat(5, 2)
        && lambda <= &int(150)
        && !mu.is_negative()
        && mu <= &(rat(22, 25) * lambda)
}

pub fn in_region(
    label: RegionLabel,
    lambda: &Rational,
    mu: &Rational,
) -> Result<bool, RegionError> {
    check_order(lambda, mu)?;
    Ok(match label {
        RegionLabel::I => in_i(lambda, mu),
        RegionLabel::II => in_ii(lambda, mu)?,
        RegionLabel::III => in_iii(lambda, mu),
        RegionLabel::IV => in_iv(lambda, mu),
        RegionLabel::V => in_v(lambda, mu)?,
        RegionLabel::Comp => in_comp(lambda, mu),
    })
}

/// Every region containing `(λ, μ)`.
pub fn classify(lambda: &Rational, mu: &Rational) -> Result<RegionSet, RegionError> {
    check_order(lambda, mu)?;
    let mut set = BTreeSet::new();
    for l in RegionLabel::ALL {
        if in_region(l, lambda, mu)? {
            set.insert(l);
        }
    }
    Ok(RegionSet(set))
}

/// Upper end of the cylinder-comparison region in the `(r, λ)` plane.
pub fn eta_ii(r: f64) -> f64 {
    let j = (0..5).rev().find(|&j| r >= R_BREAKS_F64[j]).unwrap_or(0);
    (j as f64 + 1.0) * PI * r.sqrt() / (1.0 - r)
}

/// Lower boundary `ζ_II(λ)` of the cylinder-comparison region in the
/// `(λ, μ)` plane.
pub fn zeta_ii(lambda: f64) -> f64 {
    let edge = |i: usize, r: f64| i as f64 * PI * r.sqrt() / (1.0 - r);
    for i in 1..=5 {
        let lo = edge(i, R_BREAKS_F64[i - 1]);
        let hi = if i == 5 {
            f64::INFINITY
        } else {
            edge(i, R_BREAKS_F64[i])
        };
        if lo <= lambda && lambda < hi {
            let ip = i as f64 * PI;
            return lambda - ip / (2.0 * lambda) * ((4.0 * lambda * lambda + ip * ip).sqrt() - ip);
        }
        if i < 5 {
            let top = edge(i + 1, R_BREAKS_F64[i]);
            if hi <= lambda && lambda < top {
                return R_BREAKS_F64[i] * lambda;
            }
        }
    }
    0.0
}

pub fn zeta_i(lambda: f64) -> f64 {
    (lambda * lambda - 8.0).max(0.0).sqrt()
}

pub fn zeta_iii(lambda: f64) -> f64 {
    (lambda / 5.0 - 2.0).sqrt()
}

pub fn zeta_iv_minus(_lambda: f64) -> f64 {
    64.0 / 225.0
}

pub fn zeta_iv_plus(lambda: f64) -> f64 {
    lambda / 10.0 - 1.0
}

/// `(ζ_{V,-}(λ), ζ_{V,+}(λ))` for `λ >= 16π`.
pub fn zeta_v(lambda: f64) -> (f64, f64) {
    let s = (lambda * (lambda - 16.0 * PI)).sqrt();
    ((lambda - s) / 2.0, (lambda + s) / 2.0)
}

pub fn zeta_comp(lambda: f64) -> f64 {
    22.0 * lambda / 25.0
}

/// `S_j(r; τ)` as the pair `(a, b)` standing for `aπ² + b`, with its
/// certified sign.
#[derive(Clone, Debug, PartialEq)]
pub struct SValue {
    pub a: Rational,
    pub b: Rational,
    pub sign: Ordering,
}

impl SValue {
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) * PI * PI + to_f64(&self.b)
    }
}

/// `S_j(r; τ) = (Σ n²τ_n)π² r(1+r)² - 16Σ 1/τ_n - 4j(1 - r²)`.
pub fn s_poly(j: usize, r: &Rational, tau: &[Rational]) -> Result<SValue, RegionError> {
    if tau.len() != j || j == 0 {
        return Err(RegionError::Tau(format!(
            "expected {j} entries, got {}",
            tau.len()
        )));
    }
    if tau.iter().any(|t| !t.is_positive() || t > &Rational::one()) {
        return Err(RegionError::Tau("entries must lie in (0, 1]".into()));
    }
    if tau.iter().sum::<Rational>() != Rational::one() {
        return Err(RegionError::Tau("entries must sum to 1".into()));
    }
    if !r.is_positive() || r >= &int(1) {
        return Err(RegionError::Tau(format!("r = {r} outside (0, 1)")));
    }
    let weighted: Rational = tau
        .iter()
        .enumerate()
        .map(|(n, t)| int(((n + 1) * (n + 1)) as i64) * t)
        .sum();
    let inv: Rational = tau.iter().map(|t| t.recip()).sum();
    let a = weighted * r * (int(1) + r) * (int(1) + r);
    let b = -int(16) * inv - int(4 * j as i64) * (int(1) - r * r);
    let sign = pi_poly_sign(&a, &Rational::zero(), &b)?;
    Ok(SValue { a, b, sign })
}

/// The four `(j, r_j, τ)` choices that settle the cylinder comparison.
pub fn cylinder_cases() -> Vec<(usize, Rational, Vec<Rational>)> {
    vec![
        (1, rat(2, 3), vec![int(1)]),
        (2, rat(4, 5), vec![rat(3, 8), rat(5, 8)]),
        (3, rat(17, 20), vec![rat(1, 4), rat(1, 4), rat(1, 2)]),
        (
            4,
            rat(22, 25),
            vec![rat(1, 6), rat(1, 6), rat(1, 5), rat(7, 15)],
        ),
    ]
}

/// Lower bound at `λ = 150` of the ratio `ζ_{IV,+}/ζ_{V,-}`.
pub fn ratio_iv_v_at_150() -> f64 {
    7.0 * ((3.0 * (75.0 - 8.0 * PI)).sqrt() + 15.0) / (60.0 * PI)
}

/// Lower bound for `λ > 150` of the ratio
/// `ζ_{V,+}/ζ_comp = (25/44)(1 + sqrt(1 - 16π/λ))`.
pub fn ratio_v_comp_beyond_150() -> f64 {
    25.0 / 44.0 * (1.0 + (1.0 - 8.0 * PI / 75.0).sqrt())
}

/// Result of the grid coverage check.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    pub points: u64,
    pub theory_points: u64,
    pub comp_only_points: u64,
    /// Grid points with no label at all.
    pub uncovered: Vec<(Rational, Rational)>,
    /// Points with `λ > 150` missing every theory label.
    pub outside_comp_uncovered: Vec<(Rational, Rational)>,
    /// Whether the boundary orderings hold at every sampled `λ > 150`.
    pub orderings_hold: bool,
    pub ratio_iv_v: f64,
    pub ratio_v_comp: f64,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.uncovered.is_empty()
            && self.outside_comp_uncovered.is_empty()
            && self.orderings_hold
            && self.ratio_iv_v > 1.0
            && self.ratio_v_comp > 1.0
    }
}

/// Boundary orderings for `λ > 150`:
/// `ζ_{IV,-} < ζ_III < ζ_{IV,+}`, `ζ_{V,-} < ζ_{IV,+}` and `ζ_comp < ζ_{V,+}`.
pub fn orderings_at(lambda: f64) -> bool {
    let (v_lo, v_hi) = zeta_v(lambda);
    zeta_iv_minus(lambda) < zeta_iii(lambda)
        && zeta_iii(lambda) < zeta_iv_plus(lambda)
        && v_lo < zeta_iv_plus(lambda)
        && zeta_comp(lambda) < v_hi
}

/// Classify every grid point `(i·step, j·step)` with `0 < μ < λ <= lambda_max`
/// and confirm each lies in a theory region or in the computational region.
pub fn coverage_check(
    step: &Rational,
    lambda_max: &Rational,
) -> Result<CoverageReport, RegionError> {
    assert!(step.is_positive(), "grid step must be positive");
    let n = (lambda_max / step).floor().to_integer();
    let n: i64 = num_traits::ToPrimitive::to_i64(&n).expect("grid too large");
    let rows: Vec<_> = (1..=n)
        .into_par_iter()
        .map(|i| -> Result<_, RegionError> {
            let lambda = step * int(i);
            let (mut pts, mut th, mut comp) = (0u64, 0u64, 0u64);
            let mut bad = Vec::new();
            let mut bad_outside = Vec::new();
            for j in 1..i {
                let mu = step * int(j);
                let set = classify(&lambda, &mu)?;
                pts += 1;
                if set.has_theory() {
                    th += 1;
                } else if set.contains(RegionLabel::Comp) {
                    comp += 1;
                } else {
                    bad.push((lambda.clone(), mu.clone()));
                }
                if !in_comp(&lambda, &mu) && !set.has_theory() {
                    bad_outside.push((lambda.clone(), mu.clone()));
                }
            }
            Ok((pts, th, comp, bad, bad_outside))
        })
        .collect::<Result<_, _>>()?;
    let mut report = CoverageReport {
        points: 0,
        theory_points: 0,
        comp_only_points: 0,
        uncovered: Vec::new(),
        outside_comp_uncovered: Vec::new(),
        orderings_hold: true,
        ratio_iv_v: ratio_iv_v_at_150(),
        ratio_v_comp: ratio_v_comp_beyond_150(),
    };
    for (p, t, c, bad, bad_out) in rows {
        report.points += p;
        report.theory_points += t;
        report.comp_only_points += c;
        report.uncovered.extend(bad);
        report.outside_comp_uncovered.extend(bad_out);
    }
    let top = to_f64(lambda_max).max(150.0);
    let samples = 4000;
    report.orderings_hold = (1..=samples)
        .all(|i| orderings_at(150.0 + (top + 250.0 - 150.0) * i as f64 / samples as f64));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(l: Rational, m: Rational) -> RegionSet {
        classify(&l, &m).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert!(labels(int(2), int(1)).contains(RegionLabel::I));
        assert!(labels(int(150), rat(1, 5)).contains(RegionLabel::III));
        assert!(labels(int(160), int(80)).contains(RegionLabel::V));
        assert!(labels(int(100), int(92)).contains(RegionLabel::II));
        assert!(classify(&int(3), &int(3)).is_err());
        assert_eq!(labels(int(40), int(20)).to_string(), "COMP");
    }

    #[test]
    fn comp_examples() {
        assert!(in_comp(&int(150), &int(132)));
        assert!(!in_comp(&int(2), &int(1)));
        assert!(!in_comp(&int(100), &int(89)));
    }

    #[test]
    fn s_values() {
        let want = [0.0548, 2.4016, 1.7635, 0.1459];
        let exact = [
            (rat(50, 27), rat(-492, 27)),
            (rat(23 * 243, 750), rat(-23 * 2320, 750)),
            (rat(535279, 32000), rat(-5226560, 32000)),
            (rat(17179393, 546875), rat(-169474000, 546875)),
        ];
        for (((j, r, tau), w), (a, b)) in cylinder_cases().into_iter().zip(want).zip(exact) {
            let s = s_poly(j, &r, &tau).unwrap();
            assert_eq!(s.sign, Ordering::Greater);
            assert_eq!((s.a.clone(), s.b.clone()), (a, b), "j = {j}");
            assert!((s.to_f64() - w).abs() < 5e-5, "j = {j}: {}", s.to_f64());
        }
        assert!(s_poly(2, &rat(4, 5), &[rat(1, 2), rat(1, 4)]).is_err());
    }

    #[test]
    fn constants() {
        assert!((ratio_iv_v_at_150() - 1.01126).abs() < 5e-6);
        assert!((ratio_v_comp_beyond_150() - 1.03148).abs() < 5e-6);
    }
}
