//! Line-delimited JSON certificate files.
//!
//! The first line is a header with the configuration, then each strip record
//! is followed by its cells, and a summary closes the file. Rationals are
//! written as canonical `numerator/denominator` strings and parsed strictly,
//! so parsing and re-serializing a file reproduces it byte for byte.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{CellKind, CertError, CertRect, Certificate, Status, Strip, SweepConfig, SweepStats};
use crate::exactnum::{format_rational, parse_canonical, Precision, Rational};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "lowercase")]
enum Record {
    Header {
        format: u32,
        alpha: String,
        beta: String,
        precision: Precision,
        lambda_start: String,
        lambda_stop: String,
        zeta_slope: String,
        retry_margin: bool,
    },
    Strip {
        index: usize,
        lambda_hi: String,
        lambda_lo: String,
    },
    Cell {
        strip: usize,
        kind: String,
        lambda_lo: String,
        lambda_hi: String,
        mu_lo: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mu_hi: Option<String>,
        p: String,
        anchor_lambda: String,
        anchor_mu: String,
        precision: Precision,
    },
    Summary {
        status: String,
        columns: usize,
        evaluations: u64,
        final_lambda: String,
    },
}

fn s(q: &Rational) -> String {
    format_rational(q)
}

/// Serialize a certificate.
pub fn write_certificate(cert: &Certificate, mut out: impl Write) -> std::io::Result<()> {
    let c = &cert.config;
    let mut emit = |r: &Record| -> std::io::Result<()> {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")
    };
    emit(&Record::Header {
        format: FORMAT_VERSION,
        alpha: s(&c.alpha),
        beta: s(&c.beta),
        precision: c.precision,
        lambda_start: s(&c.lambda_start),
        lambda_stop: s(&c.lambda_stop),
        zeta_slope: s(&c.zeta_slope),
        retry_margin: c.retry_margin,
    })?;
    for (i, strip) in cert.strips.iter().enumerate() {
        emit(&Record::Strip {
            index: i,
            lambda_hi: s(&strip.lambda_hi),
            lambda_lo: s(&strip.lambda_lo),
        })?;
        for cell in &strip.cells {
            emit(&Record::Cell {
                strip: i,
                kind: match cell.kind {
                    CellKind::Rectangle => "rectangle".into(),
                    CellKind::Triangle => "triangle".into(),
                },
                lambda_lo: s(&cell.lambda_lo),
                lambda_hi: s(&cell.lambda_hi),
                mu_lo: s(&cell.mu_lo),
                mu_hi: cell.mu_hi.as_ref().map(s),
                p: s(&cell.p),
                anchor_lambda: s(&cell.anchor.0),
                anchor_mu: s(&cell.anchor.1),
                precision: cell.precision,
            })?;
        }
    }
    emit(&Record::Summary {
        status: match cert.status {
            Status::Complete => "complete".into(),
            Status::Partial => "partial".into(),
        },
        columns: cert.stats.columns,
        evaluations: cert.stats.evaluations,
        final_lambda: s(&cert.stats.final_lambda),
    })
}

/// Parse a certificate from its text.
pub fn parse_certificate(text: &str) -> Result<Certificate, CertError> {
    read_certificate(text.as_bytes())
}

/// Parse a certificate from a reader.
pub fn read_certificate(input: impl BufRead) -> Result<Certificate, CertError> {
    let mut config = None;
    let mut strips: Vec<Strip> = Vec::new();
    let mut summary = None;
    for (n, line) in input.lines().enumerate() {
        let line_no = n + 1;
        let fail = |msg: String| CertError::Format { line: line_no, msg };
        let line = line.map_err(|e| fail(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let q = |t: &str| parse_canonical(t).map_err(|e| fail(e.to_string()));
        if summary.is_some() {
            return Err(fail("record after summary".into()));
        }
        let record: Record = serde_json::from_str(&line).map_err(|e| fail(e.to_string()))?;
        match record {
            Record::Header {
                format,
                alpha,
                beta,
                precision,
                lambda_start,
                lambda_stop,
                zeta_slope,
                retry_margin,
            } => {
                if config.is_some() {
                    return Err(fail("duplicate header".into()));
                }
                if format != FORMAT_VERSION {
                    return Err(fail(format!("unsupported format {format}")));
                }
                config = Some(SweepConfig {
                    alpha: q(&alpha)?,
                    beta: q(&beta)?,
                    precision,
                    lambda_start: q(&lambda_start)?,
                    lambda_stop: q(&lambda_stop)?,
                    zeta_slope: q(&zeta_slope)?,
                    retry_margin,
                });
            }
            _ if config.is_none() => return Err(fail("missing header".into())),
            Record::Strip {
                index,
                lambda_hi,
                lambda_lo,
            } => {
                if index != strips.len() {
                    return Err(fail(format!("strip index {index} out of order")));
                }
                strips.push(Strip {
                    lambda_hi: q(&lambda_hi)?,
                    lambda_lo: q(&lambda_lo)?,
                    cells: Vec::new(),
                });
            }
            Record::Cell {
                strip,
                kind,
                lambda_lo,
                lambda_hi,
                mu_lo,
                mu_hi,
                p,
                anchor_lambda,
                anchor_mu,
                precision,
            } => {
                let kind = match kind.as_str() {
                    "rectangle" => CellKind::Rectangle,
                    "triangle" => CellKind::Triangle,
                    other => return Err(fail(format!("unknown cell kind {other}"))),
                };
                let cell = CertRect {
                    kind,
                    lambda_lo: q(&lambda_lo)?,
                    lambda_hi: q(&lambda_hi)?,
                    mu_lo: q(&mu_lo)?,
                    mu_hi: mu_hi.as_deref().map(q).transpose()?,
                    p: q(&p)?,
                    anchor: (q(&anchor_lambda)?, q(&anchor_mu)?),
                    precision,
                };
                let open = strips.len();
                match strips.last_mut() {
                    Some(s) if strip + 1 == open => s.cells.push(cell),
                    _ => return Err(fail(format!("cell for strip {strip} outside its strip"))),
                }
            }
            Record::Summary {
                status,
                columns,
                evaluations,
                final_lambda,
            } => {
                let status = match status.as_str() {
                    "complete" => Status::Complete,
                    "partial" => Status::Partial,
                    other => return Err(fail(format!("unknown status {other}"))),
                };
                summary = Some((
                    status,
                    SweepStats {
                        columns,
                        evaluations,
                        final_lambda: q(&final_lambda)?,
                    },
                ));
            }
        }
    }
    let config = config.ok_or(CertError::Format {
        line: 0,
        msg: "empty certificate".into(),
    })?;
    let (status, stats) = summary.ok_or(CertError::Format {
        line: 0,
        msg: "missing summary".into(),
    })?;
    Ok(Certificate {
        config,
        strips,
        stats,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn sample() -> Certificate {
        let config = SweepConfig::default();
        let rect = CertRect {
            kind: CellKind::Rectangle,
            lambda_lo: rat(289, 2),
            lambda_hi: int(150),
            mu_lo: int(0),
            mu_hi: Some(rat(7, 3)),
            p: int(5000),
            anchor: (int(150), int(0)),
            precision: 12,
        };
        let tri = CertRect {
            kind: CellKind::Triangle,
            lambda_lo: int(0),
            lambda_hi: int(150),
            mu_lo: rat(7, 3),
            mu_hi: None,
            p: int(0),
            anchor: (int(150), rat(7, 3)),
            precision: 12,
        };
        Certificate {
            config,
            strips: vec![Strip {
                lambda_hi: int(150),
                lambda_lo: rat(289, 2),
                cells: vec![rect, tri],
            }],
            stats: SweepStats {
                columns: 1,
                evaluations: 2,
                final_lambda: rat(289, 2),
            },
            status: Status::Partial,
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let cert = sample();
        let mut buf = Vec::new();
        write_certificate(&cert, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back, cert);
        let mut again = Vec::new();
        write_certificate(&back, &mut again).unwrap();
        assert_eq!(String::from_utf8(again).unwrap(), text);
        assert!(text.contains("\"mu_hi\":\"7/3\""));
        assert!(text.contains("\"lambda_start\":\"150/1\""));
    }

    #[test]
    fn rejects_non_canonical() {
        let mut buf = Vec::new();
        write_certificate(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf)
            .unwrap()
            .replace("\"7/3\"", "\"14/6\"");
        assert!(matches!(
            parse_certificate(&text),
            Err(CertError::Format { .. })
        ));
        let text = String::from_utf8({
            let mut b = Vec::new();
            write_certificate(&sample(), &mut b).unwrap();
            b
        })
        .unwrap();
        let no_summary: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
        assert!(parse_certificate(&no_summary).is_err());
    }
}
