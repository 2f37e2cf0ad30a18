//! Exact rational arithmetic and directed-rounding enclosures.
//!
//! Everything on the certification path is computed with [`Rational`]
//! values. Irrational quantities (π, square roots, arccos) are never
//! represented directly; instead they are bracketed by a [`BoundPair`] whose
//! endpoints are rationals with a power-of-ten denominator.

mod fixed;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub(crate) use fixed::{ceil_div as fixed_ceil_div, FixedCtx};

/// Exact arbitrary-precision fraction, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Number of decimal digits requested for an enclosure (target width
/// `10^-k`).
pub type Precision = u32;

/// Decimal digits of π stored after the decimal point.
pub const PI_DIGITS: Precision = 60;

/// Precision used by the certification sweep unless configured otherwise.
pub const DEFAULT_PRECISION: Precision = 12;

// 3.14159... truncated after PI_DIGITS decimals.
const PI_TRUNCATED: &str = "3141592653589793238462643383279502884197169399375105820974944";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("precision {requested} exceeds the {available} stored digits")]
    PrecisionExceeded {
        requested: Precision,
        available: Precision,
    },
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("sign undecided at {0} digits of pi")]
    Undecided(Precision),
    #[error("enclosure postcondition failed: {0}")]
    Postcondition(String),
}

/// Rational enclosure `lo <= x <= hi` of an unknown real `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundPair {
    lo: Rational,
    hi: Rational,
}

impl BoundPair {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, ExactError> {
        if lo > hi {
            return Err(ExactError::Postcondition(format!("lo {lo} > hi {hi}")));
        }
        Ok(Self { lo, hi })
    }

    pub fn exact(value: Rational) -> Self {
        Self {
            lo: value.clone(),
            hi: value,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    /// Whether the closed interval contains the float `x` (compared exactly).
    pub fn contains_f64(&self, x: f64) -> bool {
        match Rational::from_float(x) {
            Some(q) => self.contains(&q),
            None => false,
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        to_f64(&((&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))))
    }

    /// Enclosure of `c * x` for an exact rational `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }
}

impl fmt::Display for BoundPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ten_pow(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// The unique integer `n` with `n <= q < n + 1`.
pub fn rat_floor(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub(crate) fn floor_i64(q: &Rational) -> i64 {
    rat_floor(q).to_i64().expect("floor does not fit in i64")
}

fn check_precision(k: Precision) -> Result<(), ExactError> {
    if k == 0 {
        return Err(ExactError::ZeroPrecision);
    }
    if k > PI_DIGITS {
        return Err(ExactError::PrecisionExceeded {
            requested: k,
            available: PI_DIGITS,
        });
    }
    Ok(())
}

fn digits_of_pi(k: Precision) -> BigInt {
    PI_TRUNCATED[..=k as usize]
        .parse()
        .expect("stored digits are numeric")
}

/// Enclosure of π of width `10^-k`, read from the stored expansion.
pub fn pi_bounds(k: Precision) -> Result<BoundPair, ExactError> {
    check_precision(k)?;
    let lo = digits_of_pi(k);
    let hi = &lo + 1;
    let den = ten_pow(k);
    Ok(BoundPair {
        lo: Rational::new(lo, den.clone()),
        hi: Rational::new(hi, den),
    })
}

/// Exact square root of `q` when numerator and denominator are both perfect
/// squares.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Enclosure of `sqrt(q)` of width at most `10^-k`.
pub fn sqrt_bounds(q: &Rational, k: Precision) -> Result<BoundPair, ExactError> {
    if q.is_negative() {
        return Err(ExactError::Domain(format!("sqrt of negative {q}")));
    }
    if k == 0 {
        return Err(ExactError::ZeroPrecision);
    }
    if let Some(r) = exact_sqrt(q) {
        return Ok(BoundPair::exact(r));
    }
    let den = ten_pow(k);
    let scaled = (q.numer() * &den * &den).div_floor(q.denom());
    let s = scaled.sqrt();
    let lo = Rational::new(s.clone(), den.clone());
    let hi = Rational::new(s + 1, den);
    if &lo * &lo > *q || &hi * &hi < *q {
        return Err(ExactError::Postcondition(format!("sqrt enclosure of {q}")));
    }
    Ok(BoundPair { lo, hi })
}

/// Enclosure of `arccos(q)` (radians) of width at most `10^-k`.
pub fn arccos_bounds(q: &Rational, k: Precision) -> Result<BoundPair, ExactError> {
    if q.is_negative() || q > &Rational::one() {
        return Err(ExactError::Domain(format!(
            "arccos argument {q} outside [0, 1]"
        )));
    }
    check_precision(k)?;
    if q.is_one() {
        return Ok(BoundPair::exact(Rational::zero()));
    }
    let target = Rational::new(BigInt::one(), ten_pow(k));
    let mut digits = k + 4;
    loop {
        let ctx = FixedCtx::new(digits.min(PI_DIGITS))?;
        let enc = ctx.arccos(q)?;
        let pair = ctx.to_bound_pair(&enc);
        if pair.width() <= target {
            return Ok(pair);
        }
        if digits >= PI_DIGITS {
            return Err(ExactError::PrecisionExceeded {
                requested: digits + 1,
                available: PI_DIGITS,
            });
        }
        digits += 4;
    }
}

/// Sign of `a2*pi^2 + a1*pi + a0`, refining the π enclosure until decided.
pub fn pi_poly_sign(a2: &Rational, a1: &Rational, a0: &Rational) -> Result<Ordering, ExactError> {
    if a2.is_zero() && a1.is_zero() {
        return Ok(a0.cmp(&Rational::zero()));
    }
    let mut k = 4;
    loop {
        let pi = pi_bounds(k)?;
        let sq = BoundPair {
            lo: pi.lo() * pi.lo(),
            hi: pi.hi() * pi.hi(),
        };
        let t2 = sq.scale(a2);
        let t1 = pi.scale(a1);
        let lo = t2.lo() + t1.lo() + a0;
        let hi = t2.hi() + t1.hi() + a0;
        if lo.is_positive() {
            return Ok(Ordering::Greater);
        }
        if hi.is_negative() {
            return Ok(Ordering::Less);
        }
        if k == PI_DIGITS {
            return Err(ExactError::Undecided(k));
        }
        k = (k * 2).min(PI_DIGITS);
    }
}

/// The rational with the smallest denominator in the closed interval
/// `[lo, hi]`, for `0 <= lo <= hi`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(
        !lo.is_negative() && lo <= hi,
        "simplest_between needs 0 <= lo <= hi"
    );
    let fl = Rational::from_integer(rat_floor(lo));
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    // Both endpoints share the integer part; recurse on reciprocals of the
    // fractional parts (the order flips).
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Render as `numerator/denominator`, always with an explicit denominator.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parse `p/q`, an integer, or a plain decimal (`1.25` is read as `125/100`).
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let err = || ExactError::Parse(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let digits = format!("{whole}{frac}");
    let n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| err())?
    };
    let q = Rational::new(n, ten_pow(frac.len() as u32));
    Ok(if neg { -q } else { q })
}

/// Strict parser for serialized certificates: only canonical `p/q`.
pub fn parse_canonical(s: &str) -> Result<Rational, ExactError> {
    let err = || ExactError::Parse(s.to_string());
    let (n, d) = s.split_once('/').ok_or_else(err)?;
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if !d.is_positive() {
        return Err(err());
    }
    let q = Rational::new(n.clone(), d.clone());
    if q.numer() != &n || q.denom() != &d {
        return Err(err());
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn machin_pi_digits(k: u32) -> BigInt {
        // pi = 16 atan(1/5) - 4 atan(1/239), evaluated in scaled integers
        // with 10 guard digits.
        fn atan_inv(n: i64, one: &BigInt) -> BigInt {
            let n2 = BigInt::from(n * n);
            let mut term = one / BigInt::from(n);
            let mut sum = term.clone();
            let mut i = 1i64;
            while !term.is_zero() {
                term /= &n2;
                let t = &term / BigInt::from(2 * i + 1);
                if i % 2 == 1 {
                    sum -= t;
                } else {
                    sum += t;
                }
                i += 1;
            }
            sum
        }
        let one = ten_pow(k + 10);
        let pi = atan_inv(5, &one) * 16 - atan_inv(239, &one) * 4;
        pi / ten_pow(10)
    }

    #[test]
    fn floor_examples() {
        assert_eq!(rat_floor(&rat(22, 7)), BigInt::from(3));
        assert_eq!(rat_floor(&rat(-1, 2)), BigInt::from(-1));
        assert_eq!(rat_floor(&rat(179, 82)), BigInt::from(179 / 82));
        assert_eq!(rat_floor(&rat(-4, 2)), BigInt::from(-2));
    }

    #[test]
    fn stored_pi_matches_machin() {
        assert_eq!(digits_of_pi(PI_DIGITS), machin_pi_digits(PI_DIGITS));
    }

    #[test]
    fn pi_bounds_examples() {
        let p2 = pi_bounds(2).unwrap();
        assert!(p2.lo() >= &rat(314, 100) && p2.hi() <= &rat(315, 100));
        let p6 = pi_bounds(6).unwrap();
        assert!(p6.width() <= rat(1, 1_000_000));
        assert!(p6.contains(&rat(31415926, 10_000_000)));
        let p7 = pi_bounds(7).unwrap();
        assert!(p7.lo() > &rat(333, 106));
        assert!(p7.hi() < &rat(355, 113));
        assert!(matches!(
            pi_bounds(61),
            Err(ExactError::PrecisionExceeded { .. })
        ));
        assert!(matches!(pi_bounds(0), Err(ExactError::ZeroPrecision)));
    }

    #[test]
    fn sqrt_examples() {
        for k in [1, 5, 12] {
            assert_eq!(sqrt_bounds(&int(4), k).unwrap(), BoundPair::exact(int(2)));
        }
        assert_eq!(sqrt_bounds(&int(0), 3).unwrap(), BoundPair::exact(int(0)));
        let s = sqrt_bounds(&int(2), 4).unwrap();
        assert!(s.lo() * s.lo() <= int(2) && s.hi() * s.hi() >= int(2));
        assert!(s.width() <= rat(1, 10_000));
        // isqrt oracle on the scaled integer: floor(sqrt(2 * 10^8)) = 14142
        assert_eq!(s.lo(), &rat(14142, 10_000));
        assert!(matches!(
            sqrt_bounds(&int(-1), 4),
            Err(ExactError::Domain(_))
        ));
    }

    #[test]
    fn arccos_examples() {
        let k = 8;
        let pi = pi_bounds(k + 2).unwrap();
        let a0 = arccos_bounds(&int(0), k).unwrap();
        let half_pi = pi.scale(&rat(1, 2));
        assert!(a0.lo() <= half_pi.hi() && half_pi.lo() <= a0.hi());
        assert_eq!(arccos_bounds(&int(1), k).unwrap(), BoundPair::exact(int(0)));
        let a = arccos_bounds(&rat(1, 2), 5).unwrap();
        assert!(a.width() <= rat(1, 100_000));
        let third = pi_bounds(20).unwrap().scale(&rat(1, 3));
        assert!(a.lo() <= third.lo() && third.hi() <= a.hi());
        assert!(arccos_bounds(&rat(3, 2), 5).is_err());
        assert!(arccos_bounds(&rat(-1, 2), 5).is_err());
    }

    #[test]
    fn simplest_between_examples() {
        assert_eq!(simplest_between(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_between(&rat(21, 10), &rat(23, 10)), rat(9, 4));
        assert_eq!(simplest_between(&rat(5, 2), &rat(5, 2)), rat(5, 2));
        assert_eq!(simplest_between(&rat(1, 2), &rat(3, 2)), int(1));
        let lo = rat(314159, 100000);
        let hi = rat(314160, 100000);
        let s = simplest_between(&lo, &hi);
        assert!(lo <= s && s <= hi);
        assert!(s.denom() <= &BigInt::from(1000));
    }

    #[test]
    fn pi_poly_sign_cases() {
        // pi^2 - 9.8696 > 0 ; pi - 22/7 < 0
        assert_eq!(
            pi_poly_sign(&int(1), &int(0), &rat(-98696, 10000)).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            pi_poly_sign(&int(0), &int(7), &int(-22)).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            pi_poly_sign(&int(0), &int(0), &int(0)).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("5/2").unwrap(), rat(5, 2));
        assert_eq!(parse_rational("2.5").unwrap(), rat(5, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("150").unwrap(), int(150));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert_eq!(format_rational(&int(150)), "150/1");
        assert!(parse_canonical("2/4").is_err());
        assert!(parse_canonical("150").is_err());
        assert_eq!(parse_canonical("-3/7").unwrap(), rat(-3, 7));
    }
}
