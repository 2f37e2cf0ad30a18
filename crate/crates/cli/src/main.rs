//! `polya`: certification sweep, verification and numerical tools for the
//! Dirichlet eigenvalue count of planar annuli.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use polya_core::besseloracle;
use polya_core::boundfns::{self, float, EvalMode};
use polya_core::certifier::{self, Certificate, SweepConfig};
use polya_core::exactnum::{
    format_rational, int, parse_rational, to_f64, Precision, Rational, DEFAULT_PRECISION,
};
use polya_core::floorsum;
use polya_core::regions;
use polya_core::suites::{self, SuiteResult, DEFAULT_SEED};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "polya",
    version,
    about = "Pólya's inequality for annuli: certification and numerical checks"
)]
struct Cli {
    /// Decimal precision of verified evaluations.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: Precision,
    /// Worker threads for parallel loops (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output file (certificate for `certify`, CSV for `plotdata`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the covering sweep and write a certificate.
    Certify {
        #[arg(long, value_parser = parse_q, default_value = "2/3")]
        alpha: Rational,
        #[arg(long, value_parser = parse_q, default_value = "99/100")]
        beta: Rational,
        #[arg(long, value_parser = parse_q, default_value = "150")]
        lambda_start: Rational,
        #[arg(long, value_parser = parse_q, default_value = "5/2")]
        lambda_stop: Rational,
        #[arg(long, value_parser = parse_q, default_value = "22/25")]
        zeta_slope: Rational,
        /// Retry a failing margin once at precision + 6.
        #[arg(long)]
        retry_margin: bool,
        /// Continue a partial certificate instead of starting afresh.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Stop after this many new strips (the certificate stays partial).
        #[arg(long)]
        max_columns: Option<usize>,
    },
    /// Re-check a certificate from scratch.
    Verify { certificate: PathBuf },
    /// Region labels of a point `(λ, μ)`.
    Classify {
        #[arg(long, value_parser = parse_q)]
        lambda: Rational,
        #[arg(long, value_parser = parse_q)]
        mu: Rational,
    },
    /// Eigenvalue count of the annulus with inner radius `r` and its bounds.
    Count {
        #[arg(long, value_parser = parse_q)]
        r: Rational,
        #[arg(long, value_parser = parse_q)]
        lambda: Rational,
    },
    /// Values of `G`, `H`, `F`, `Φ` with verified enclosures.
    Bounds {
        #[arg(long, value_parser = parse_q)]
        lambda: Rational,
        #[arg(long, value_parser = parse_q)]
        mu: Rational,
        #[arg(long, value_parser = parse_q)]
        z: Rational,
    },
    /// Randomized floor-sum and phase-bound suites.
    Theorems {
        /// Instances per floor-sum suite.
        #[arg(long, default_value_t = suites::THEOREM_INSTANCES)]
        instances: usize,
        /// Samples per phase-bound suite.
        #[arg(long, default_value_t = 5000)]
        samples: usize,
        /// Also run the annulus and disk count grids.
        #[arg(long)]
        grids: bool,
    },
    /// Check that every grid point is covered by some region.
    Coverage {
        #[arg(long, value_parser = parse_q, default_value = "1/4")]
        step: Rational,
        #[arg(long, value_parser = parse_q, default_value = "400")]
        lambda_max: Rational,
    },
    /// CSV data for plots.
    Plotdata {
        #[arg(long, value_enum)]
        figure: Figure,
        #[arg(long, value_parser = parse_q, default_value = "40")]
        lambda: Rational,
        #[arg(long, value_parser = parse_q, default_value = "25")]
        mu: Rational,
        /// Samples along the horizontal axis.
        #[arg(long, default_value_t = 400)]
        points: usize,
        /// Certificate for `strip-trace`.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    RegionGrid,
    #[value(name = "bounds-GFH", alias = "bounds-gfh")]
    BoundsGfh,
    StripTrace,
}

fn parse_q(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A failure carrying its exit code.
struct Fail(u8, String);

type CmdResult = Result<ExitCode, Fail>;

fn usage(msg: impl Into<String>) -> Fail {
    Fail(EXIT_USAGE, msg.into())
}

fn internal(msg: impl Into<String>) -> Fail {
    Fail(EXIT_INTERNAL, msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Certify {
            alpha,
            beta,
            lambda_start,
            lambda_stop,
            zeta_slope,
            retry_margin,
            resume,
            max_columns,
        } => {
            let cfg = SweepConfig {
                alpha: alpha.clone(),
                beta: beta.clone(),
                precision: cli.precision,
                lambda_start: lambda_start.clone(),
                lambda_stop: lambda_stop.clone(),
                zeta_slope: zeta_slope.clone(),
                retry_margin: *retry_margin,
            };
            certify(cli, cfg, resume.as_deref(), *max_columns)
        }
        Command::Verify { certificate } => verify(certificate),
        Command::Classify { lambda, mu } => classify(lambda, mu),
        Command::Count { r, lambda } => count(cli.precision, r, lambda),
        Command::Bounds { lambda, mu, z } => bounds(cli.precision, lambda, mu, z),
        Command::Theorems {
            instances,
            samples,
            grids,
        } => theorems(cli.seed, *instances, *samples, *grids),
        Command::Coverage { step, lambda_max } => coverage(step, lambda_max),
        Command::Plotdata {
            figure,
            lambda,
            mu,
            points,
            certificate,
        } => {
            let mut out: Box<dyn Write> = match &cli.out {
                Some(p) => Box::new(BufWriter::new(
                    File::create(p).map_err(|e| usage(format!("{}: {e}", p.display())))?,
                )),
                None => Box::new(BufWriter::new(io::stdout().lock())),
            };
            let res = match figure {
                Figure::RegionGrid => region_grid(&mut out, *points),
                Figure::BoundsGfh => bounds_gfh(&mut out, lambda, mu, *points),
                Figure::StripTrace => {
                    let path = certificate
                        .as_deref()
                        .ok_or_else(|| usage("strip-trace needs --certificate"))?;
                    strip_trace(&mut out, &load(path)?)
                }
            };
            res.and_then(|_| out.flush())
                .map_err(|e| internal(e.to_string()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load(path: &Path) -> Result<Certificate, Fail> {
    let f = File::open(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    certifier::read_certificate(BufReader::new(f)).map_err(|e| Fail(EXIT_FAIL, e.to_string()))
}

fn save(path: &Path, cert: &Certificate) -> Result<(), Fail> {
    let f = File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(f);
    certifier::write_certificate(cert, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| internal(format!("{}: {e}", path.display())))
}

fn certify(
    cli: &Cli,
    cfg: SweepConfig,
    resume: Option<&Path>,
    max_columns: Option<usize>,
) -> CmdResult {
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("certificate.jsonl"));
    let start = match resume {
        Some(p) => load(p)?,
        None => {
            cfg.validate().map_err(|e| usage(e.to_string()))?;
            Certificate {
                stats: certifier::SweepStats {
                    columns: 0,
                    evaluations: 0,
                    final_lambda: cfg.lambda_start.clone(),
                },
                config: cfg,
                strips: Vec::new(),
                status: certifier::Status::Partial,
            }
        }
    };
    let clock = Instant::now();
    let result = certifier::resume(start, max_columns);
    let secs = clock.elapsed().as_secs_f64();
    match result {
        Ok(cert) => {
            save(&out, &cert)?;
            let s = &cert.stats;
            println!(
                "columns={} evals={} final={}",
                s.columns,
                s.evaluations,
                format_rational(&s.final_lambda)
            );
            let status = match cert.status {
                certifier::Status::Complete => "complete",
                certifier::Status::Partial => "partial",
            };
            println!("status={status} wall={secs:.1}s out={}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Err(failure) => {
            if let Some(partial) = &failure.partial {
                save(&out, partial)?;
                eprintln!(
                    "partial certificate with {} strips written to {}",
                    partial.strips.len(),
                    out.display()
                );
            }
            Err(internal(failure.error.to_string()))
        }
    }
}

fn verify(path: &Path) -> CmdResult {
    let cert = load(path)?;
    let clock = Instant::now();
    let report = certifier::verify_certificate(&cert);
    for f in &report.failures {
        println!("FAIL {f}");
    }
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    println!(
        "{verdict} cells={} failures={} covers_comp={} wall={:.1}s",
        report.cells_checked,
        report.failures.len(),
        report.covers_comp,
        clock.elapsed().as_secs_f64()
    );
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    })
}

fn check_pair(lambda: &Rational, mu: &Rational) -> Result<(), Fail> {
    if lambda <= &int(0) || mu < &int(0) || mu >= lambda {
        return Err(usage(format!(
            "need 0 <= mu < lambda, got lambda = {lambda}, mu = {mu}"
        )));
    }
    Ok(())
}

fn classify(lambda: &Rational, mu: &Rational) -> CmdResult {
    check_pair(lambda, mu)?;
    let set = regions::classify(lambda, mu).map_err(|e| internal(e.to_string()))?;
    println!(
        "lambda={} mu={} regions={set}",
        format_rational(lambda),
        format_rational(mu)
    );
    Ok(ExitCode::SUCCESS)
}

fn count(k: Precision, r: &Rational, lambda: &Rational) -> CmdResult {
    if r <= &int(0) || r >= &int(1) {
        return Err(usage(format!("need 0 < r < 1, got {r}")));
    }
    if lambda <= &int(0) {
        return Err(usage(format!("need lambda > 0, got {lambda}")));
    }
    let (rf, lf) = (to_f64(r), to_f64(lambda));
    let mu = r * lambda;
    let n = besseloracle::count_annulus(rf, lf).map_err(|e| internal(e.to_string()))?;
    let bound = (int(1) - r * r) * lambda * lambda / int(4);
    let pf = floorsum::p(lf, rf * lf);
    let pb = floorsum::p_bar(lambda, &mu, k).map_err(|e| internal(e.to_string()))?;
    let cyl = besseloracle::count_cylinder(besseloracle::cylinder_height(rf), lf);
    let labels = regions::classify(lambda, &mu).map_err(|e| internal(e.to_string()))?;
    println!(
        "r={} lambda={} mu={}",
        format_rational(r),
        format_rational(lambda),
        format_rational(&mu)
    );
    println!("N={n}");
    println!(
        "polya_bound={} ({})",
        sig12(to_f64(&bound)),
        format_rational(&bound)
    );
    println!("P={pf}");
    println!("P_bar={pb}");
    println!("cylinder={cyl}");
    println!("regions={labels}");
    Ok(ExitCode::SUCCESS)
}

fn bounds(k: Precision, lambda: &Rational, mu: &Rational, z: &Rational) -> CmdResult {
    check_pair(lambda, mu)?;
    if z < &int(0) {
        return Err(usage("need z >= 0"));
    }
    let show =
        |name: &str, calc: &dyn Fn(EvalMode) -> Result<boundfns::Value, polya_core::ExactError>| {
            match (
                calc(EvalMode::Float),
                calc(EvalMode::VerifiedLower(k)),
                calc(EvalMode::VerifiedUpper(k)),
            ) {
                (Ok(f), Ok(lo), Ok(hi)) => println!(
                    "{name}={} in [{}, {}]",
                    sig12(f.to_f64()),
                    lo.as_rational().map(format_rational).unwrap_or_default(),
                    hi.as_rational().map(format_rational).unwrap_or_default()
                ),
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                    println!("{name}=undefined ({e})")
                }
            }
        };
    show("G", &|m| boundfns::g(lambda, z, m));
    show("H", &|m| boundfns::h(mu, z, m));
    show("F", &|m| boundfns::f(mu, z, m));
    show("Phi", &|m| boundfns::phi(lambda, mu, z, m));
    println!(
        "c={}",
        sig12(boundfns::lipschitz_c(to_f64(lambda), to_f64(mu)))
    );
    println!("omega0={}", sig12(boundfns::omega0()));
    Ok(ExitCode::SUCCESS)
}

fn print_suites(results: &[SuiteResult]) -> bool {
    let mut ok = true;
    for r in results {
        println!("{} {r}", if r.passed() { "PASS" } else { "FAIL" });
        ok &= r.passed();
    }
    ok
}

fn theorems(seed: u64, instances: usize, samples: usize, grids: bool) -> CmdResult {
    println!("seed={seed}");
    let mut ok = print_suites(&suites::floor_sum_suites(seed, instances));
    ok &= print_suites(&suites::oracle_suites(seed, samples));
    if grids {
        ok &= print_suites(&suites::polya_grid());
        ok &= print_suites(&[suites::disk_improved()]);
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    })
}

fn coverage(step: &Rational, lambda_max: &Rational) -> CmdResult {
    if step <= &int(0) || lambda_max <= step {
        return Err(usage("need 0 < step < lambda-max"));
    }
    let rep = regions::coverage_check(step, lambda_max).map_err(|e| internal(e.to_string()))?;
    println!(
        "points={} theory={} comp_only={} uncovered={} uncovered_beyond_150={}",
        rep.points,
        rep.theory_points,
        rep.comp_only_points,
        rep.uncovered.len(),
        rep.outside_comp_uncovered.len()
    );
    for (l, m) in rep.uncovered.iter().take(10) {
        println!("uncovered ({}, {})", format_rational(l), format_rational(m));
    }
    println!(
        "orderings_hold={} ratio_iv_v_at_150={} ratio_v_comp_beyond_150={}",
        rep.orderings_hold,
        sig12(rep.ratio_iv_v),
        sig12(rep.ratio_v_comp)
    );
    let verdict = if rep.passed() { "PASS" } else { "FAIL" };
    println!("{verdict}");
    Ok(if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    })
}

/// Twelve significant digits; empty for non-finite values.
fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..15).contains(&e) {
        let decimals = (11 - e).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

/// Region boundaries in the `(r, λ)` plane: each column is the value of `λ`
/// on the boundary curve, empty where the curve does not exist.
fn region_grid(out: &mut dyn Write, points: usize) -> io::Result<()> {
    use std::f64::consts::PI;
    writeln!(
        out,
        "r,eta_i,eta_ii,eta_iii_lo,eta_iii_hi,eta_iv_lo,eta_v,comp_lo,comp_hi"
    )?;
    for i in 1..points {
        let r = i as f64 / points as f64;
        let eta_i = (8.0 / (1.0 - r * r)).sqrt();
        let eta_ii = regions::eta_ii(r);
        // r²λ² - λ/5 + 2 = 0
        let disc = 1.0 / 25.0 - 8.0 * r * r;
        let (iii_lo, iii_hi) = if disc >= 0.0 {
            let s = disc.sqrt();
            (
                ((0.2 - s) / (2.0 * r * r)).max(10.0),
                (0.2 + s) / (2.0 * r * r),
            )
        } else {
            (f64::NAN, f64::NAN)
        };
        let iv_lo = if r < 0.1 {
            (64.0 / (225.0 * r)).max(1.0 / (0.1 - r)).max(578.0 / 45.0)
        } else {
            f64::NAN
        };
        let eta_v = 4.0 * PI / (r * (1.0 - r));
        let (c_lo, c_hi) = if r <= 22.0 / 25.0 {
            (2.5, 150.0)
        } else {
            (f64::NAN, f64::NAN)
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            sig12(r),
            sig12(eta_i),
            sig12(eta_ii),
            sig12(iii_lo),
            sig12(iii_hi),
            sig12(iv_lo),
            sig12(eta_v),
            sig12(c_lo),
            sig12(c_hi)
        )?;
    }
    Ok(())
}

/// Upper bounds for `γ_{λ,μ}` along `z`, with the oracle value.
fn bounds_gfh(
    out: &mut dyn Write,
    lambda: &Rational,
    mu: &Rational,
    points: usize,
) -> io::Result<()> {
    let (l, m) = (to_f64(lambda), to_f64(mu));
    writeln!(out, "z,phi_plus_h,g_plus_quarter,gamma,g_minus_f")?;
    for i in 0..=points {
        let z = l * i as f64 / points as f64;
        let phi_h = if z < m {
            float::phi(l, m, z) + float::h(m, z)
        } else {
            f64::NAN
        };
        let gam = besseloracle::gamma(l, m, z).unwrap_or(f64::NAN);
        writeln!(
            out,
            "{},{},{},{},{}",
            sig12(z),
            sig12(phi_h),
            sig12(float::g(l, z) + 0.25),
            sig12(gam),
            sig12(float::g_minus_f(l, m, z))
        )?;
    }
    Ok(())
}

/// Right edge and width of every strip of a certificate.
fn strip_trace(out: &mut dyn Write, cert: &Certificate) -> io::Result<()> {
    writeln!(out, "k,lambda_hi,lambda_lo,width,cells")?;
    for (k, s) in cert.strips.iter().enumerate() {
        writeln!(
            out,
            "{k},{},{},{},{}",
            format_rational(&s.lambda_hi),
            format_rational(&s.lambda_lo),
            sig12(to_f64(&(&s.lambda_hi - &s.lambda_lo))),
            s.cells.len()
        )?;
    }
    Ok(())
}
