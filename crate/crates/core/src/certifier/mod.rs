//! Covering the computational region by rectangles on which the lattice
//! majorant stays below the Weyl term.
//!
//! If `p₀ = P̄(λ₀, μ₀)` satisfies `λ₀² - μ₀² > 4p₀`, monotonicity of `P` in
//! both arguments gives `P(λ, μ) <= p₀ < (λ² - μ²)/4` whenever `λ <= λ₀`,
//! `μ >= μ₀` and `λ² - μ² > 4p₀`. The sweep walks vertical strips from
//! `λ = 150` leftwards, stacking such rectangles upwards in each strip, and
//! records everything in a [`Certificate`] that [`verify_certificate`] checks
//! from scratch.

mod format;
mod verify;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::boundfns::Evaluator;
use crate::exactnum::{
    int, rat, simplest_between, sqrt_bounds, ExactError, Precision, Rational, DEFAULT_PRECISION,
};
use crate::floorsum::p_bar_with;

pub use format::{parse_certificate, read_certificate, write_certificate, FORMAT_VERSION};
pub use verify::{verify_certificate, VerifyFailure, VerifyReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertError {
    #[error("non-positive margin at ({lambda}, {mu}): p = {p}")]
    Margin {
        lambda: Rational,
        mu: Rational,
        p: Rational,
    },
    #[error("sweep cannot advance at ({lambda}, {mu})")]
    Progress { lambda: Rational, mu: Rational },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("certificate line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Parameters of the sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub alpha: Rational,
    pub beta: Rational,
    pub precision: Precision,
    pub lambda_start: Rational,
    pub lambda_stop: Rational,
    pub zeta_slope: Rational,
    /// Re-evaluate once at precision `k + 6` when a margin is not positive.
    pub retry_margin: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            alpha: rat(2, 3),
            beta: rat(99, 100),
            precision: DEFAULT_PRECISION,
            lambda_start: int(150),
            lambda_stop: rat(5, 2),
            zeta_slope: rat(22, 25),
            retry_margin: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CertError> {
        let unit = |q: &Rational| q.is_positive() && q < &int(1);
        if !unit(&self.alpha) || !unit(&self.beta) {
            return Err(CertError::Config(
                "alpha and beta must lie in (0, 1)".into(),
            ));
        }
        if !self.lambda_stop.is_positive() || self.lambda_start <= self.lambda_stop {
            return Err(CertError::Config(
                "need lambda_start > lambda_stop > 0".into(),
            ));
        }
        if !self.zeta_slope.is_positive() || self.zeta_slope >= int(1) {
            return Err(CertError::Config("zeta_slope must lie in (0, 1)".into()));
        }
        Evaluator::new(self.precision)?;
        if self.retry_margin {
            Evaluator::new(self.precision + 6)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    Rectangle,
    Triangle,
}

/// One covering cell.
///
/// A rectangle is `[lambda_lo, lambda_hi] × [mu_lo, mu_hi]`; a triangle is
/// `{λ <= lambda_hi, mu_lo <= μ < λ}` and has no `mu_hi`. The anchor is the
/// bottom-right corner, where `p` was evaluated at precision `precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertRect {
    pub kind: CellKind,
    pub lambda_lo: Rational,
    pub lambda_hi: Rational,
    pub mu_lo: Rational,
    pub mu_hi: Option<Rational>,
    pub p: Rational,
    pub anchor: (Rational, Rational),
    pub precision: Precision,
}

impl CertRect {
    fn triangle(lambda: &Rational, mu: &Rational, precision: Precision) -> Self {
        Self {
            kind: CellKind::Triangle,
            lambda_lo: int(0),
            lambda_hi: lambda.clone(),
            mu_lo: mu.clone(),
            mu_hi: None,
            p: int(0),
            anchor: (lambda.clone(), mu.clone()),
            precision,
        }
    }
}

/// A vertical strip `[lambda_lo, lambda_hi]` and its cells, bottom to top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strip {
    pub lambda_hi: Rational,
    pub lambda_lo: Rational,
    pub cells: Vec<CertRect>,
}

impl Strip {
    /// Lower end of the triangle closing this strip, if any.
    pub fn triangle_mu(&self) -> Option<&Rational> {
        self.cells
            .iter()
            .find(|c| c.kind == CellKind::Triangle)
            .map(|c| &c.mu_lo)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Complete,
    Partial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepStats {
    pub columns: usize,
    pub evaluations: u64,
    pub final_lambda: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub config: SweepConfig,
    pub strips: Vec<Strip>,
    pub stats: SweepStats,
    pub status: Status,
}

impl Certificate {
    /// The dynamic boundary `ζ(λ) = min(slope·λ, μ*)` after all recorded
    /// strips, where `μ*` ranges over the triangles emitted so far.
    pub fn cap(&self) -> Option<Rational> {
        min_cap(self.strips.iter())
    }

    pub fn cells(&self) -> impl Iterator<Item = &CertRect> {
        self.strips.iter().flat_map(|s| s.cells.iter())
    }
}

pub(crate) fn min_cap<'a>(strips: impl Iterator<Item = &'a Strip>) -> Option<Rational> {
    strips.filter_map(Strip::triangle_mu).min().cloned()
}

pub(crate) fn zeta(slope: &Rational, cap: Option<&Rational>, lambda: &Rational) -> Rational {
    let line = slope * lambda;
    match cap {
        Some(c) if c < &line => c.clone(),
        _ => line,
    }
}

/// Left edge candidate `αΛ̄ + (1-α)λ₀` with `Λ = sqrt(μ₀² + 4p₀)`, moved up to
/// a nearby rational of small height.
pub fn lambda_one(
    lambda0: &Rational,
    mu0: &Rational,
    p0: &Rational,
    cfg: &SweepConfig,
) -> Result<Rational, CertError> {
    let big = sqrt_bounds(&(mu0 * mu0 + int(4) * p0), cfg.precision)?;
    let raw = &cfg.alpha * big.hi() + (int(1) - &cfg.alpha) * lambda0;
    if &raw >= lambda0 {
        return Err(CertError::Progress {
            lambda: lambda0.clone(),
            mu: mu0.clone(),
        });
    }
    let slack = (lambda0 - &raw) / int(100);
    Ok(simplest_between(&raw, &(&raw + slack)))
}

/// Top edge `βM̲ + (1-β)μ₀` with `M = sqrt(λ₁² - 4p₀)`, moved down to a nearby
/// rational of small height.
pub fn mu_one(
    lambda1: &Rational,
    mu0: &Rational,
    p0: &Rational,
    cfg: &SweepConfig,
) -> Result<Rational, CertError> {
    let m = sqrt_bounds(&(lambda1 * lambda1 - int(4) * p0), cfg.precision)?;
    let raw = &cfg.beta * m.lo() + (int(1) - &cfg.beta) * mu0;
    if &raw <= mu0 {
        return Err(CertError::Progress {
            lambda: lambda1.clone(),
            mu: mu0.clone(),
        });
    }
    let lo = mu0 + (&raw - mu0) * rat(99, 100);
    Ok(simplest_between(&lo, &raw))
}

fn has_margin(lambda: &Rational, mu: &Rational, p: &Rational) -> bool {
    lambda * lambda - mu * mu > int(4) * p
}

/// The single cell licensed by one evaluation `p₀ = P̄(λ₀, μ₀)`.
pub fn rect_from_point(
    lambda0: &Rational,
    mu0: &Rational,
    p0: &Rational,
    cfg: &SweepConfig,
) -> Result<CertRect, CertError> {
    if p0.is_zero() {
        return Ok(CertRect::triangle(lambda0, mu0, cfg.precision));
    }
    if !has_margin(lambda0, mu0, p0) {
        return Err(CertError::Margin {
            lambda: lambda0.clone(),
            mu: mu0.clone(),
            p: p0.clone(),
        });
    }
    let l1 = lambda_one(lambda0, mu0, p0, cfg)?;
    let m1 = mu_one(&l1, mu0, p0, cfg)?;
    Ok(CertRect {
        kind: CellKind::Rectangle,
        lambda_lo: l1,
        lambda_hi: lambda0.clone(),
        mu_lo: mu0.clone(),
        mu_hi: Some(m1),
        p: p0.clone(),
        anchor: (lambda0.clone(), mu0.clone()),
        precision: cfg.precision,
    })
}

/// Why a strip stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StripEnd {
    /// The next anchor lies above the current boundary.
    Exit,
    /// The majorant vanished; a triangle closes the strip.
    ZeroCount,
}

/// Evaluation engine shared by all strips of one sweep.
pub struct Sweeper {
    cfg: SweepConfig,
    ev: Evaluator,
    retry: Option<Evaluator>,
    evaluations: u64,
}

impl Sweeper {
    pub fn new(cfg: SweepConfig) -> Result<Self, CertError> {
        cfg.validate()?;
        let ev = Evaluator::new(cfg.precision)?;
        let retry = if cfg.retry_margin {
            Some(Evaluator::new(cfg.precision + 6)?)
        } else {
            None
        };
        Ok(Self {
            cfg,
            ev,
            retry,
            evaluations: 0,
        })
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    fn eval(
        &mut self,
        ev_retry: bool,
        lambda: &Rational,
        mu: &Rational,
    ) -> Result<Rational, CertError> {
        self.evaluations += 1;
        let ev = if ev_retry {
            self.retry.as_ref().expect("retry evaluator")
        } else {
            &self.ev
        };
        Ok(Rational::from_integer(p_bar_with(ev, lambda, mu)?))
    }

    /// Majorant at an anchor with a positive margin, and the precision used.
    fn anchor_value(
        &mut self,
        lambda: &Rational,
        mu: &Rational,
    ) -> Result<(Rational, Precision), CertError> {
        let p = self.eval(false, lambda, mu)?;
        if p.is_zero() || has_margin(lambda, mu, &p) {
            return Ok((p, self.cfg.precision));
        }
        if self.retry.is_some() {
            let q = self.eval(true, lambda, mu)?;
            if q.is_zero() || has_margin(lambda, mu, &q) {
                return Ok((q, self.cfg.precision + 6));
            }
        }
        Err(CertError::Margin {
            lambda: lambda.clone(),
            mu: mu.clone(),
            p,
        })
    }

    /// Build the strip whose right edge is `lambda_hi`, under the boundary
    /// `min(slope·λ, cap)`.
    pub fn run_strip(
        &mut self,
        lambda_hi: &Rational,
        cap: Option<&Rational>,
    ) -> Result<(Strip, StripEnd), CertError> {
        let top = zeta(&self.cfg.zeta_slope, cap, lambda_hi);
        let mut mu = int(0);
        let mut left: Option<Rational> = None;
        // (mu_lo, mu_hi, p, precision); λ edges are fixed when the strip closes
        let mut rows: Vec<(Rational, Rational, Rational, Precision)> = Vec::new();
        let mut triangle = None;
        while mu <= top {
            let (p, k) = self.anchor_value(lambda_hi, &mu)?;
            if p.is_zero() {
                triangle = Some(CertRect::triangle(lambda_hi, &mu, k));
                break;
            }
            let temp = lambda_one(lambda_hi, &mu, &p, &self.cfg)?;
            let l1 = match left {
                Some(old) if old > temp => old,
                _ => temp,
            };
            let next = mu_one(&l1, &mu, &p, &self.cfg)?;
            left = Some(l1);
            rows.push((mu.clone(), next.clone(), p, k));
            mu = next;
        }
        let lambda_lo = left.unwrap_or_else(|| int(0));
        let mut cells: Vec<CertRect> = rows
            .into_iter()
            .map(|(lo, hi, p, k)| CertRect {
                kind: CellKind::Rectangle,
                lambda_lo: lambda_lo.clone(),
                lambda_hi: lambda_hi.clone(),
                anchor: (lambda_hi.clone(), lo.clone()),
                mu_lo: lo,
                mu_hi: Some(hi),
                p,
                precision: k,
            })
            .collect();
        let end = match triangle {
            Some(t) => {
                cells.push(t);
                StripEnd::ZeroCount
            }
            None => StripEnd::Exit,
        };
        Ok((
            Strip {
                lambda_hi: lambda_hi.clone(),
                lambda_lo,
                cells,
            },
            end,
        ))
    }
}

/// A sweep that stopped on an error, with everything certified before it.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{error}")]
pub struct SweepFailure {
    pub error: CertError,
    pub partial: Option<Certificate>,
}

impl From<CertError> for SweepFailure {
    fn from(error: CertError) -> Self {
        Self {
            error,
            partial: None,
        }
    }
}

/// Run the full sweep.
pub fn run_cover(cfg: SweepConfig) -> Result<Certificate, SweepFailure> {
    let empty = Certificate {
        stats: SweepStats {
            columns: 0,
            evaluations: 0,
            final_lambda: cfg.lambda_start.clone(),
        },
        config: cfg,
        strips: Vec::new(),
        status: Status::Partial,
    };
    resume(empty, None)
}

/// Continue a partial certificate, adding at most `max_columns` strips.
pub fn resume(
    mut cert: Certificate,
    max_columns: Option<usize>,
) -> Result<Certificate, SweepFailure> {
    if cert.status == Status::Complete {
        return Ok(cert);
    }
    let mut sweeper = Sweeper::new(cert.config.clone())?;
    sweeper.evaluations = cert.stats.evaluations;
    let mut cap = cert.cap();
    let mut lambda = cert
        .strips
        .last()
        .map_or_else(|| cert.config.lambda_start.clone(), |s| s.lambda_lo.clone());
    let mut added = 0;
    while lambda >= cert.config.lambda_stop {
        if max_columns.is_some_and(|n| added >= n) {
            break;
        }
        match sweeper.run_strip(&lambda, cap.as_ref()) {
            Ok((strip, _)) => {
                if let Some(t) = strip.triangle_mu() {
                    if cap.as_ref().is_none_or(|c| t < c) {
                        cap = Some(t.clone());
                    }
                }
                lambda = strip.lambda_lo.clone();
                cert.strips.push(strip);
                added += 1;
            }
            Err(error) => {
                cert.stats = SweepStats {
                    columns: cert.strips.len(),
                    evaluations: sweeper.evaluations,
                    final_lambda: lambda,
                };
                return Err(SweepFailure {
                    error,
                    partial: Some(cert),
                });
            }
        }
    }
    cert.status = if lambda < cert.config.lambda_stop {
        Status::Complete
    } else {
        Status::Partial
    };
    cert.stats = SweepStats {
        columns: cert.strips.len(),
        evaluations: sweeper.evaluations,
        final_lambda: lambda,
    };
    Ok(cert)
}

/// `P̄` as an integer, for callers outside the sweep.
pub fn anchor_majorant(
    lambda: &Rational,
    mu: &Rational,
    k: Precision,
) -> Result<BigInt, CertError> {
    Ok(p_bar_with(&Evaluator::new(k)?, lambda, mu)?)
}
