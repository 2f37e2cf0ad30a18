//! Scaled-integer arithmetic with explicit rounding direction.
//!
//! A value `v` stands for `v / 10^digits`. Enclosures carry a lower and an
//! upper scaled integer; every operation rounds the lower end down and the
//! upper end up.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{check_precision, digits_of_pi, ten_pow, BoundPair, ExactError, Precision, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Enclosure {
    pub lo: BigInt,
    pub hi: BigInt,
}

impl Enclosure {
    #[cfg(test)]
    pub fn exact(v: BigInt) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
        }
    }
}

pub(crate) fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

#[derive(Clone, Debug)]
pub(crate) struct FixedCtx {
    pub one: BigInt,
    pub pi: Enclosure,
    half_pi: Enclosure,
}

impl FixedCtx {
    pub fn new(digits: Precision) -> Result<Self, ExactError> {
        check_precision(digits)?;
        let one = ten_pow(digits);
        let lo = digits_of_pi(digits);
        let hi = &lo + 1;
        let two = BigInt::from(2);
        let half_pi = Enclosure {
            lo: lo.div_floor(&two),
            hi: ceil_div(&hi, &two),
        };
        Ok(Self {
            one,
            pi: Enclosure { lo, hi },
            half_pi,
        })
    }

    pub fn floor_rat(&self, q: &Rational) -> BigInt {
        (q.numer() * &self.one).div_floor(q.denom())
    }

    pub fn ceil_rat(&self, q: &Rational) -> BigInt {
        ceil_div(&(q.numer() * &self.one), q.denom())
    }

    pub fn to_rat(&self, v: &BigInt) -> Rational {
        Rational::new(v.clone(), self.one.clone())
    }

    pub fn to_bound_pair(&self, e: &Enclosure) -> BoundPair {
        BoundPair {
            lo: self.to_rat(&e.lo),
            hi: self.to_rat(&e.hi),
        }
    }

    /// Enclosure of `sqrt(q)` for rational `q >= 0`.
    pub fn sqrt(&self, q: &Rational) -> Result<Enclosure, ExactError> {
        if q.is_negative() {
            return Err(ExactError::Domain(format!("sqrt of negative {q}")));
        }
        let num = q.numer() * &self.one * &self.one;
        let (quot, rem) = num.div_mod_floor(q.denom());
        let s = quot.sqrt();
        let exact = rem.is_zero() && &s * &s == quot;
        let hi = if exact { s.clone() } else { &s + 1 };
        Ok(Enclosure { lo: s, hi })
    }

    /// Lower bound of `arcsin(x / one)` for scaled `0 <= x <= one/2`.
    fn arcsin_lo(&self, x: &BigInt) -> BigInt {
        let x2 = (x * x).div_floor(&self.one);
        let mut term = x.clone();
        let mut sum = x.clone();
        let mut n: u64 = 0;
        loop {
            let a = BigInt::from((2 * n + 1) * (2 * n + 1));
            let b = BigInt::from((2 * n + 2) * (2 * n + 3));
            term = (&term * &x2 * a).div_floor(&(&self.one * b));
            if term.is_zero() {
                return sum;
            }
            sum += &term;
            n += 1;
        }
    }

    /// Upper bound of `arcsin(x / one)` for scaled `0 <= x <= one/2`.
    fn arcsin_hi(&self, x: &BigInt) -> BigInt {
        let x2 = ceil_div(&(x * x), &self.one);
        let mut term = x.clone();
        let mut sum = x.clone();
        let mut n: u64 = 0;
        let two = BigInt::from(2);
        loop {
            let a = BigInt::from((2 * n + 1) * (2 * n + 1));
            let b = BigInt::from((2 * n + 2) * (2 * n + 3));
            term = ceil_div(&(&term * &x2 * a), &(&self.one * b));
            if term <= two {
                // consecutive term ratios stay below x^2, so the remaining
                // series is dominated by a geometric one
                sum += ceil_div(&(&term * &self.one), &(&self.one - &x2));
                return sum;
            }
            sum += &term;
            n += 1;
        }
    }

    fn check_unit(q: &Rational) -> Result<(), ExactError> {
        if q.is_negative() || q > &Rational::from_integer(1.into()) {
            return Err(ExactError::Domain(format!(
                "arccos argument {q} outside [0, 1]"
            )));
        }
        Ok(())
    }

    /// One end of an enclosure of `arccos(q)` for rational `0 <= q <= 1`.
    pub fn arccos_dir(&self, q: &Rational, upper: bool) -> Result<BigInt, ExactError> {
        Self::check_unit(q)?;
        let half = Rational::new(1.into(), 2.into());
        if q >= &half {
            // arccos q = 2 arcsin sqrt((1 - q) / 2)
            let t = (Rational::from_integer(1.into()) - q) * &half;
            let s = self.sqrt(&t)?;
            Ok(if upper {
                self.arcsin_hi(&s.hi) * 2
            } else {
                self.arcsin_lo(&s.lo) * 2
            })
        } else if upper {
            // arccos q = pi/2 - arcsin q
            Ok(&self.half_pi.hi - self.arcsin_lo(&self.floor_rat(q)))
        } else {
            Ok(&self.half_pi.lo - self.arcsin_hi(&self.ceil_rat(q)))
        }
    }

    /// Enclosure of `arccos(q)` for rational `0 <= q <= 1`.
    pub fn arccos(&self, q: &Rational) -> Result<Enclosure, ExactError> {
        Ok(Enclosure {
            lo: self.arccos_dir(q, false)?,
            hi: self.arccos_dir(q, true)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arcsin_brackets_float() {
        let ctx = FixedCtx::new(20).unwrap();
        for i in 0..=50 {
            let x = ctx.floor_rat(&Rational::new(i.into(), 100.into()));
            let lo = ctx.arcsin_lo(&x);
            let hi = ctx.arcsin_hi(&x);
            assert!(lo <= hi);
            let f = (i as f64 / 100.0).asin();
            let fl = super::super::to_f64(&ctx.to_rat(&lo));
            let fh = super::super::to_f64(&ctx.to_rat(&hi));
            assert!(fl <= f + 1e-15 && f - 1e-15 <= fh, "{i}: {fl} {f} {fh}");
            assert!(&hi - &lo < BigInt::from(200));
        }
    }

    #[test]
    fn sqrt_exact_detection() {
        let ctx = FixedCtx::new(6).unwrap();
        let e = ctx.sqrt(&Rational::new(9.into(), 4.into())).unwrap();
        assert_eq!(e, Enclosure::exact(BigInt::from(1_500_000)));
        let e = ctx.sqrt(&Rational::new(2.into(), 1.into())).unwrap();
        assert_eq!(&e.hi - &e.lo, BigInt::from(1));
    }
}
