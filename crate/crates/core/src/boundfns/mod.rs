//! The bounding functions `G`, `H`, `F` and `Φ`.
//!
//! `G_λ(z)` is the Weyl-type profile of the eigenvalue count of a disk of
//! radius one with frequency `λ`; `F_μ` is a lower bound for the phase
//! contribution of the inner boundary, with `H_μ` as its correction term.
//! Every function is available as a plain `f64` evaluation (see [`float`]) and
//! as a rigorous rational lower or upper bound.

pub mod float;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::exactnum::fixed_ceil_div as ceil_div;
use crate::exactnum::{int, to_f64, ExactError, FixedCtx, Precision, Rational, PI_DIGITS};

/// How a bound function is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    /// Plain double precision, no error control.
    Float,
    /// A rational no larger than the true value, accurate to about `10^-k`.
    VerifiedLower(Precision),
    /// A rational no smaller than the true value, accurate to about `10^-k`.
    VerifiedUpper(Precision),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Float(f64),
    Exact(Rational),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Float(x) => *x,
            Value::Exact(q) => to_f64(q),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Value::Exact(q) => Some(q),
            Value::Float(_) => None,
        }
    }
}

/// Guard digits added on top of the requested precision.
const GUARD: Precision = 6;

/// Directed evaluation at a fixed internal scale.
///
/// All results are scaled integers in units of `10^-digits`.
#[derive(Clone, Debug)]
pub struct Evaluator {
    ctx: FixedCtx,
}

impl Evaluator {
    /// Evaluator whose results are accurate to roughly `10^-k`.
    pub fn new(k: Precision) -> Result<Self, ExactError> {
        if k == 0 {
            return Err(ExactError::ZeroPrecision);
        }
        if k > PI_DIGITS {
            return Err(ExactError::PrecisionExceeded {
                requested: k,
                available: PI_DIGITS,
            });
        }
        Ok(Self {
            ctx: FixedCtx::new((k + GUARD).min(PI_DIGITS))?,
        })
    }

    pub fn one(&self) -> &BigInt {
        &self.ctx.one
    }

    pub fn to_rational(&self, v: &BigInt) -> Rational {
        self.ctx.to_rat(v)
    }

    /// Scaled floor of `-1/4`.
    pub fn quarter_lo(&self) -> BigInt {
        (-&self.ctx.one).div_floor(&BigInt::from(4))
    }

    fn quarter_hi(&self) -> BigInt {
        ceil_div(&-&self.ctx.one, &BigInt::from(4))
    }

    fn check_gz(lambda: &Rational, z: &Rational) -> Result<(), ExactError> {
        if !lambda.is_positive() {
            return Err(ExactError::Domain(format!(
                "G needs lambda > 0, got {lambda}"
            )));
        }
        if z.is_negative() {
            return Err(ExactError::Domain(format!("G needs z >= 0, got {z}")));
        }
        Ok(())
    }

    /// Directed bound of `G_λ(z)`.
    pub fn g(&self, lambda: &Rational, z: &Rational, upper: bool) -> Result<BigInt, ExactError> {
        Self::check_gz(lambda, z)?;
        if z >= lambda {
            return Ok(BigInt::zero());
        }
        let c = &self.ctx;
        let s = c.sqrt(&(lambda * lambda - z * z))?;
        let a = c.arccos_dir(&(z / lambda), !upper)?;
        // z * arccos, rounded against the requested direction
        let za = z.numer() * a;
        if upper {
            let za = za.div_floor(z.denom());
            let num = &s.hi - za;
            if !num.is_positive() {
                return Ok(BigInt::zero());
            }
            Ok(ceil_div(&(num * &c.one), &c.pi.lo))
        } else {
            let za = ceil_div(&za, z.denom());
            let num = &s.lo - za;
            if !num.is_positive() {
                return Ok(BigInt::zero());
            }
            Ok((num * &c.one).div_floor(&c.pi.hi))
        }
    }

    /// Directed bound of `H_μ(z)`; errors once `μ² - z²` is not safely
    /// positive.
    pub fn h(&self, mu: &Rational, z: &Rational, upper: bool) -> Result<BigInt, ExactError> {
        if z.is_negative() {
            return Err(ExactError::Domain(format!("H needs z >= 0, got {z}")));
        }
        let d = mu * mu - z * z;
        if !d.is_positive() || z >= mu {
            return Err(ExactError::Domain(format!(
                "H diverges: z = {z} >= mu = {mu}"
            )));
        }
        let n = int(3) * mu * mu + int(2) * z * z;
        let c = &self.ctx;
        let s = c.sqrt(&d)?;
        let (pi, root) = if upper {
            (&c.pi.lo, &s.lo)
        } else {
            (&c.pi.hi, &s.hi)
        };
        if root.is_zero() {
            return Err(ExactError::Domain(format!(
                "H too close to its pole at z = {z}"
            )));
        }
        let one3 = &c.one * &c.one * &c.one;
        let top = n.numer() * d.denom() * one3;
        let bottom = n.denom() * BigInt::from(24) * pi * root * d.numer();
        Ok(if upper {
            ceil_div(&top, &bottom)
        } else {
            top.div_floor(&bottom)
        })
    }

    /// Directed bound of `F_μ(z) = max(G_μ(z) - H_μ(z), -1/4)`.
    pub fn f(&self, mu: &Rational, z: &Rational, upper: bool) -> Result<BigInt, ExactError> {
        if mu.is_negative() || z.is_negative() {
            return Err(ExactError::Domain(format!(
                "F needs mu, z >= 0, got {mu}, {z}"
            )));
        }
        let floor = if upper {
            self.quarter_hi()
        } else {
            self.quarter_lo()
        };
        if z >= mu {
            return Ok(floor);
        }
        let g = self.g(mu, z, upper)?;
        let h = match self.h(mu, z, !upper) {
            Ok(h) => h,
            Err(_) if !upper => return Ok(floor),
            Err(e) => return Err(e),
        };
        Ok((g - h).max(floor))
    }

    /// Directed bound of `Φ_{λ,μ}(z) = G_λ(z) - G_μ(z)`.
    pub fn phi(
        &self,
        lambda: &Rational,
        mu: &Rational,
        z: &Rational,
        upper: bool,
    ) -> Result<BigInt, ExactError> {
        let a = self.g(lambda, z, upper)?;
        if mu.is_zero() {
            return Ok(a);
        }
        let b = self.g(mu, z, !upper)?;
        Ok(a - b)
    }
}

fn check_phi(lambda: &Rational, mu: &Rational) -> Result<(), ExactError> {
    if mu.is_negative() || mu >= lambda {
        return Err(ExactError::Domain(format!(
            "need 0 <= mu < lambda, got {mu}, {lambda}"
        )));
    }
    Ok(())
}

fn dispatch(
    mode: EvalMode,
    float: impl FnOnce() -> f64,
    exact: impl FnOnce(&Evaluator, bool) -> Result<BigInt, ExactError>,
) -> Result<Value, ExactError> {
    let (k, upper) = match mode {
        EvalMode::Float => return Ok(Value::Float(float())),
        EvalMode::VerifiedLower(k) => (k, false),
        EvalMode::VerifiedUpper(k) => (k, true),
    };
    let ev = Evaluator::new(k)?;
    let v = exact(&ev, upper)?;
    Ok(Value::Exact(ev.to_rational(&v)))
}

/// `G_λ(z) = (sqrt(λ² - z²) - z·arccos(z/λ)) / π` for `z <= λ`, and `0`
/// beyond.
pub fn g(lambda: &Rational, z: &Rational, mode: EvalMode) -> Result<Value, ExactError> {
    Evaluator::check_gz(lambda, z)?;
    dispatch(
        mode,
        || float::g(to_f64(lambda), to_f64(z)),
        |ev, up| ev.g(lambda, z, up),
    )
}

/// `H_μ(z) = (3μ² + 2z²) / (24π (μ² - z²)^{3/2})` for `0 <= z < μ`.
pub fn h(mu: &Rational, z: &Rational, mode: EvalMode) -> Result<Value, ExactError> {
    if z.is_negative() || z >= mu {
        return Err(ExactError::Domain(format!(
            "H needs 0 <= z < mu, got z = {z}, mu = {mu}"
        )));
    }
    dispatch(
        mode,
        || float::h(to_f64(mu), to_f64(z)),
        |ev, up| ev.h(mu, z, up),
    )
}

/// `F_μ(z) = max(G_μ(z) - H_μ(z), -1/4)` for `z < μ`, and `-1/4` beyond.
pub fn f(mu: &Rational, z: &Rational, mode: EvalMode) -> Result<Value, ExactError> {
    if mu.is_negative() || z.is_negative() {
        return Err(ExactError::Domain(format!(
            "F needs mu, z >= 0, got {mu}, {z}"
        )));
    }
    dispatch(
        mode,
        || float::f(to_f64(mu), to_f64(z)),
        |ev, up| ev.f(mu, z, up),
    )
}

/// `Φ_{λ,μ}(z) = G_λ(z) - G_μ(z)`.
pub fn phi(
    lambda: &Rational,
    mu: &Rational,
    z: &Rational,
    mode: EvalMode,
) -> Result<Value, ExactError> {
    check_phi(lambda, mu)?;
    Evaluator::check_gz(lambda, z)?;
    dispatch(
        mode,
        || float::phi(to_f64(lambda), to_f64(mu), to_f64(z)),
        |ev, up| ev.phi(lambda, mu, z, up),
    )
}

/// Lipschitz constant `arccos(μ/λ)/π` of `Φ_{λ,μ}` on `[0, μ]`.
pub fn lipschitz_c(lambda: f64, mu: f64) -> f64 {
    float::lipschitz_c(lambda, mu)
}

/// `ω₀ = sqrt(3)/(2π) - 1/6`, the slope of `λ ↦ G_λ(λ/2)`.
pub fn omega0() -> f64 {
    float::omega0()
}
