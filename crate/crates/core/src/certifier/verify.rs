//! Independent re-check of a certificate.
//!
//! Every anchor is re-evaluated with a fresh evaluator, every rectangle is
//! checked against its recorded value at its worst (top-left) corner, and the
//! strips are checked to tile the computational region geometrically.

use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::{zeta, CellKind, CertRect, Certificate, Status};
use crate::boundfns::Evaluator;
use crate::exactnum::{int, rat, Precision, Rational};
use crate::floorsum::p_bar_with;

/// A failed check, located by strip and cell index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyFailure {
    pub strip: Option<usize>,
    pub cell: Option<usize>,
    pub reason: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.strip, self.cell) {
            (Some(s), Some(c)) => write!(f, "strip {s} cell {c}: {}", self.reason),
            (Some(s), None) => write!(f, "strip {s}: {}", self.reason),
            _ => write!(f, "{}", self.reason),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub cells_checked: usize,
    pub failures: Vec<VerifyFailure>,
    /// The certificate is complete and its configuration spans
    /// `5/2 <= λ <= 150`, `0 <= μ <= 22λ/25`.
    pub covers_comp: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn fail(strip: Option<usize>, cell: Option<usize>, reason: impl Into<String>) -> VerifyFailure {
    VerifyFailure {
        strip,
        cell,
        reason: reason.into(),
    }
}

/// Arithmetic checks on one cell, including the fresh majorant.
fn check_cell(cell: &CertRect, evaluators: &[(Precision, Evaluator)]) -> Result<(), String> {
    if cell.anchor != (cell.lambda_hi.clone(), cell.mu_lo.clone()) {
        return Err("anchor is not the bottom-right corner".into());
    }
    if cell.mu_lo.is_negative() || cell.mu_lo >= cell.lambda_hi {
        return Err("anchor outside 0 <= mu < lambda".into());
    }
    if !cell.p.is_integer() || cell.p.is_negative() {
        return Err(format!("p = {} is not a non-negative integer", cell.p));
    }
    let ev = &evaluators
        .iter()
        .find(|(k, _)| *k == cell.precision)
        .ok_or_else(|| format!("unsupported precision {}", cell.precision))?
        .1;
    let fresh = Rational::from_integer(
        p_bar_with(ev, &cell.lambda_hi, &cell.mu_lo).map_err(|e| e.to_string())?,
    );
    if cell.p < fresh {
        return Err(format!(
            "recorded p = {} is below the recomputed majorant {fresh}",
            cell.p
        ));
    }
    match cell.kind {
        CellKind::Triangle => {
            if !cell.p.is_zero() || !fresh.is_zero() {
                return Err(format!("triangle needs a zero count, majorant is {fresh}"));
            }
            if cell.mu_hi.is_some() {
                return Err("triangle with an upper edge".into());
            }
        }
        CellKind::Rectangle => {
            let hi = cell
                .mu_hi
                .as_ref()
                .ok_or("rectangle without an upper edge")?;
            if hi <= &cell.mu_lo || cell.lambda_lo >= cell.lambda_hi {
                return Err("degenerate rectangle".into());
            }
            let corner = &cell.lambda_lo * &cell.lambda_lo - hi * hi;
            if corner <= int(4) * &cell.p {
                return Err(format!(
                    "margin fails at the corner ({}, {hi})",
                    cell.lambda_lo
                ));
            }
        }
    }
    Ok(())
}

/// Geometric checks: strips abut from `lambda_start` downwards and each one
/// is filled from `μ = 0` up to the boundary in force when it was built.
fn check_tiling(cert: &Certificate, failures: &mut Vec<VerifyFailure>) {
    let cfg = &cert.config;
    let mut right = cfg.lambda_start.clone();
    let mut cap: Option<Rational> = None;
    for (i, strip) in cert.strips.iter().enumerate() {
        let s = Some(i);
        if strip.lambda_hi != right {
            failures.push(fail(
                s,
                None,
                format!("right edge {} does not meet {right}", strip.lambda_hi),
            ));
        }
        if strip.lambda_lo.is_negative() || strip.lambda_lo >= strip.lambda_hi {
            failures.push(fail(s, None, "empty strip"));
        }
        let top = zeta(&cfg.zeta_slope, cap.as_ref(), &strip.lambda_hi);
        let mut mu = int(0);
        let mut closed = false;
        for (j, cell) in strip.cells.iter().enumerate() {
            let c = Some(j);
            if closed {
                failures.push(fail(s, c, "cell above the closing triangle"));
                break;
            }
            if cell.mu_lo != mu {
                failures.push(fail(
                    s,
                    c,
                    format!("gap or overlap: starts at {} instead of {mu}", cell.mu_lo),
                ));
            }
            if cell.lambda_hi != strip.lambda_hi {
                failures.push(fail(s, c, "cell does not reach the strip's right edge"));
            }
            match cell.kind {
                CellKind::Rectangle => {
                    if cell.lambda_lo != strip.lambda_lo {
                        failures.push(fail(s, c, "rectangle width differs from the strip"));
                    }
                    mu = cell.mu_hi.clone().unwrap_or_else(|| mu.clone());
                }
                CellKind::Triangle => {
                    closed = true;
                    if cap.as_ref().is_none_or(|old| &cell.mu_lo < old) {
                        cap = Some(cell.mu_lo.clone());
                    }
                }
            }
        }
        if strip.cells.iter().all(|c| c.kind == CellKind::Triangle) && !strip.lambda_lo.is_zero() {
            failures.push(fail(s, None, "a strip without rectangles must extend to 0"));
        }
        if !closed && mu < top {
            failures.push(fail(
                s,
                None,
                format!("cells stop at {mu}, below the boundary {top}"),
            ));
        }
        right = strip.lambda_lo.clone();
    }
    if right != cert.stats.final_lambda {
        failures.push(fail(
            None,
            None,
            format!(
                "summary final {} differs from the last edge {right}",
                cert.stats.final_lambda
            ),
        ));
    }
    if cert.stats.columns != cert.strips.len() {
        failures.push(fail(
            None,
            None,
            "summary column count differs from the strips",
        ));
    }
    if cert.status == Status::Complete && right >= cfg.lambda_stop {
        failures.push(fail(
            None,
            None,
            format!("marked complete but stops at {right}"),
        ));
    }
}

/// Re-verify a certificate from scratch.
pub fn verify_certificate(cert: &Certificate) -> VerifyReport {
    let mut failures = Vec::new();
    let mut precisions: Vec<Precision> = cert.cells().map(|c| c.precision).collect();
    precisions.sort_unstable();
    precisions.dedup();
    let evaluators: Vec<(Precision, Evaluator)> = precisions
        .into_iter()
        .filter_map(|k| Evaluator::new(k).ok().map(|e| (k, e)))
        .collect();

    let indexed: Vec<(usize, usize, &CertRect)> = cert
        .strips
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.cells.iter().enumerate().map(move |(j, c)| (i, j, c)))
        .collect();
    let mut cell_failures: Vec<VerifyFailure> = indexed
        .par_iter()
        .filter_map(|(i, j, c)| {
            check_cell(c, &evaluators)
                .err()
                .map(|r| fail(Some(*i), Some(*j), r))
        })
        .collect();
    cell_failures.sort_by_key(|f| (f.strip, f.cell));
    failures.extend(cell_failures);
    check_tiling(cert, &mut failures);

    let cfg = &cert.config;
    let covers_comp = cert.status == Status::Complete
        && cfg.lambda_start >= int(150)
        && cfg.lambda_stop <= rat(5, 2)
        && cfg.zeta_slope >= rat(22, 25);
    VerifyReport {
        cells_checked: indexed.len(),
        failures,
        covers_comp,
    }
}
