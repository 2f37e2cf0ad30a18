//! Trapezoidal floor sums and the lattice-count majorants `P` and `P̄`.
//!
//! For integers `a < b` the trapezoidal floor sum of `g` is
//! `T(g, a, b) = ½⌊g(a)⌋ + Σ_{a<m<b} ⌊g(m)⌋ + ½⌊g(b)⌋`.
//! For non-negative `g` it counts lattice points under the graph, with the two
//! end columns weighted by one half.

pub mod theorems;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::boundfns::{float, Evaluator};
use crate::exactnum::{floor_i64, int, rat_floor, ExactError, Precision, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FloorSumError {
    #[error("empty interval: need a < b, got a = {a}, b = {b}")]
    EmptyInterval { a: i64, b: i64 },
    #[error("sampled value at m = {0} is not finite")]
    NonFinite(i64),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Value of a trapezoidal floor sum together with the floors it was built
/// from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloorSumReport {
    /// `T(g, a, b)`, always a multiple of one half.
    pub value: Rational,
    /// `(m, ⌊g(m)⌋)` for `m = a..=b`.
    pub terms: Vec<(i64, BigInt)>,
}

impl FloorSumReport {
    fn from_terms(terms: Vec<(i64, BigInt)>) -> Self {
        let twice = twice_from_floors(terms.iter().map(|(_, f)| f));
        Self {
            value: Rational::new(twice, BigInt::from(2)),
            terms,
        }
    }

    /// Recompute the value from the recorded floors.
    pub fn recompute(&self) -> Rational {
        Rational::new(
            twice_from_floors(self.terms.iter().map(|(_, f)| f)),
            BigInt::from(2),
        )
    }

    /// `2T`, which is always an integer.
    pub fn twice(&self) -> BigInt {
        (&self.value * int(2)).to_integer()
    }
}

fn twice_from_floors<'a>(floors: impl ExactSizeIterator<Item = &'a BigInt>) -> BigInt {
    let n = floors.len();
    let mut acc = BigInt::zero();
    for (i, f) in floors.enumerate() {
        if i == 0 || i + 1 == n {
            acc += f;
        } else {
            acc += f * 2;
        }
    }
    acc
}

/// `T(g, a, b)` from a function returning `⌊g(m)⌋` directly.
pub fn tfs_floors(
    a: i64,
    b: i64,
    floor_at: impl Fn(i64) -> BigInt,
) -> Result<FloorSumReport, FloorSumError> {
    if a >= b {
        return Err(FloorSumError::EmptyInterval { a, b });
    }
    Ok(FloorSumReport::from_terms(
        (a..=b).map(|m| (m, floor_at(m))).collect(),
    ))
}

/// `T(g, a, b)` for an exactly sampled `g`.
pub fn tfs(a: i64, b: i64, g: impl Fn(i64) -> Rational) -> Result<FloorSumReport, FloorSumError> {
    tfs_floors(a, b, |m| rat_floor(&g(m)))
}

/// `T(g, a, b)` for a double-precision `g`.
pub fn tfs_f64(a: i64, b: i64, g: impl Fn(i64) -> f64) -> Result<FloorSumReport, FloorSumError> {
    if a >= b {
        return Err(FloorSumError::EmptyInterval { a, b });
    }
    let mut terms = Vec::with_capacity((b - a + 1) as usize);
    for m in a..=b {
        let v = g(m);
        if !v.is_finite() {
            return Err(FloorSumError::NonFinite(m));
        }
        terms.push((m, BigInt::from(v.floor() as i64)));
    }
    Ok(FloorSumReport::from_terms(terms))
}

fn check_pair(lambda: &Rational, mu: &Rational) -> Result<(), ExactError> {
    if mu < &int(0) || mu >= lambda {
        return Err(ExactError::Domain(format!(
            "need 0 <= mu < lambda, got mu = {mu}, lambda = {lambda}"
        )));
    }
    Ok(())
}

/// `P(λ, μ) = 2T(G_λ - F_μ, 0, ⌊λ⌋ + 1)` in double precision.
pub fn p(lambda: f64, mu: f64) -> i64 {
    assert!(0.0 <= mu && mu < lambda, "need 0 <= mu < lambda");
    let n = lambda.floor() as i64 + 1;
    let report = tfs_f64(0, n, |m| float::g_minus_f(lambda, mu, m as f64)).expect("finite samples");
    report.twice().to_i64().expect("small count")
}

/// Floor of the upper bound of `G_λ(m) - F_μ(m)`.
fn pbar_term(
    ev: &Evaluator,
    lambda: &Rational,
    mu: &Rational,
    m: i64,
) -> Result<BigInt, ExactError> {
    let z = int(m);
    let g = ev.g(lambda, &z, true)?;
    let f = ev.f(mu, &z, false)?;
    Ok(rat_floor(&ev.to_rational(&(g - f))))
}

/// The floor sum behind [`p_bar_with`], with the per-column floors.
pub fn p_bar_report(
    ev: &Evaluator,
    lambda: &Rational,
    mu: &Rational,
) -> Result<FloorSumReport, ExactError> {
    check_pair(lambda, mu)?;
    let n = floor_i64(lambda) + 1;
    let floors = (0..=n)
        .into_par_iter()
        .map(|m| pbar_term(ev, lambda, mu, m).map(|f| (m, f)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FloorSumReport::from_terms(floors))
}

/// Rigorous majorant `P̄(λ, μ) >= P(λ, μ)` built from upper bounds of `G_λ`
/// and lower bounds of `F_μ`. The value is an integer.
pub fn p_bar_with(ev: &Evaluator, lambda: &Rational, mu: &Rational) -> Result<BigInt, ExactError> {
    Ok(p_bar_report(ev, lambda, mu)?.twice())
}

/// [`p_bar_with`] at precision `k`.
pub fn p_bar(lambda: &Rational, mu: &Rational, k: Precision) -> Result<BigInt, ExactError> {
    p_bar_with(&Evaluator::new(k)?, lambda, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn tfs_examples() {
        let r = tfs(0, 4, |_| rat(5, 2)).unwrap();
        assert_eq!(r.value, int(8));
        let r = tfs(0, 3, int).unwrap();
        assert_eq!(r.value, rat(9, 2));
        let r = tfs(0, 4, |m| rat(-m, 2) + int(1)).unwrap();
        assert_eq!(r.value, int(-1));
        assert_eq!(r.recompute(), r.value);
        assert!(matches!(
            tfs(3, 3, int),
            Err(FloorSumError::EmptyInterval { .. })
        ));
    }

    #[test]
    fn p_small() {
        // G_1(0) = 1/π, F_{1/2}(0) = (1/2)/π - 1/(4π) ≈ 0.0796, so the
        // m = 0 floor is 0; at m = 1, 2 only G = 0 and F = -1/4 remain.
        assert_eq!(p(1.0, 0.5), 0);
        assert!(p(150.0, 0.0) < 5625);
    }

    #[test]
    fn p_bar_five_halves() {
        // Upper bounds of G_{5/2}(m) + 1/4 for m = 0..3:
        // 0.796+0.25, 0.360+0.25, 0.068+0.25, 0+0.25 -> floors 1, 0, 0, 0
        let v = p_bar(&rat(5, 2), &int(0), 12).unwrap();
        assert_eq!(v, BigInt::from(1));
        assert_eq!(p(2.5, 0.0), 1);
    }
}
