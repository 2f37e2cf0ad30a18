//! Seeded property suites shared by the command line and the test targets.
//!
//! Each suite draws its instances from a ChaCha stream seeded by the caller,
//! so a run is reproducible from `(seed, count)` alone.

use std::f64::consts::PI;
use std::fmt;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::besseloracle::{self, count_zeros_crossproduct};
use crate::boundfns::float;
use crate::exactnum::{int, rat, Rational};
use crate::floorsum::theorems::{self, gen, Verdict};
use crate::floorsum::{p, p_bar, tfs};

pub const DEFAULT_SEED: u64 = 0x5eed_2025;

/// Slack for comparisons against the floating-point Bessel oracle, well below
/// its accuracy but above double rounding.
pub const ORACLE_TOL: f64 = 1e-9;

/// Tally of one suite.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuiteResult {
    pub name: String,
    pub instances: usize,
    pub rejected: usize,
    pub violations: usize,
    /// Smallest `rhs - lhs` over the evaluated instances.
    pub min_margin: Option<f64>,
    pub first_violation: Option<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn evaluated(&self) -> usize {
        self.instances - self.rejected
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.evaluated() > 0
    }

    /// Keep drawing until `n` instances met their hypotheses, giving up
    /// after `10n` draws.
    fn wanted(&self, n: usize) -> bool {
        self.evaluated() < n && self.instances < 10 * n
    }

    fn margin(&mut self, m: f64) {
        self.min_margin = Some(self.min_margin.map_or(m, |old| old.min(m)));
    }

    fn record(&mut self, v: &Verdict, what: impl FnOnce() -> String) {
        self.instances += 1;
        if let Some(m) = v.margin() {
            self.margin(m);
        }
        match v {
            Verdict::Rejected(_) => self.rejected += 1,
            Verdict::Violated { .. } => self.fail(what),
            Verdict::Holds { .. } => {}
        }
    }

    /// Count a strict inequality `lhs < rhs` checked against the oracle.
    fn strict(&mut self, lhs: f64, rhs: f64, what: impl FnOnce() -> String) {
        self.instances += 1;
        self.margin(rhs - lhs);
        if !(lhs < rhs + ORACLE_TOL) {
            self.fail(what);
        }
    }

    fn fail(&mut self, what: impl FnOnce() -> String) {
        self.violations += 1;
        if self.first_violation.is_none() {
            self.first_violation = Some(what());
        }
    }

    fn merge(mut self, other: SuiteResult) -> Self {
        self.instances += other.instances;
        self.rejected += other.rejected;
        self.violations += other.violations;
        if let Some(m) = other.min_margin {
            self.margin(m);
        }
        if self.first_violation.is_none() {
            self.first_violation = other.first_violation;
        }
        self
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} instances, {} rejected, {} violations",
            self.name, self.instances, self.rejected, self.violations
        )?;
        if let Some(m) = self.min_margin {
            write!(f, ", min margin {m:.3e}")?;
        }
        if let Some(v) = &self.first_violation {
            write!(f, ", first violation {v}")?;
        }
        Ok(())
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Concave functions: `T <= ∫g`.
pub fn concave(seed: u64, n: usize) -> SuiteResult {
    let mut r = rng(seed, 1);
    let mut out = SuiteResult::new("concave");
    while out.wanted(n) {
        let (g, a, b) = gen::concave(&mut r);
        let v = theorems::check_concave(&g, a, b);
        out.record(&v, || format!("{g:?} on [{a}, {b}]"));
    }
    out
}

/// Lipschitz concave functions whose floor drops at the left end.
pub fn lipschitz_concave(seed: u64, n: usize) -> SuiteResult {
    let mut r = rng(seed, 2);
    let mut out = SuiteResult::new("lipschitz-concave");
    while out.wanted(n) {
        let (g, a, b, c) = gen::lipschitz_concave(&mut r);
        let v = theorems::check_lipschitz_concave(&g, a, b, &c);
        out.record(&v, || format!("{g:?} on [{a}, {b}], c = {c}"));
    }
    out
}

/// The split-point variant of [`lipschitz_concave`].
pub fn lipschitz_concave_split(seed: u64, n: usize) -> SuiteResult {
    let mut r = rng(seed, 3);
    let mut out = SuiteResult::new("lipschitz-concave-split");
    while out.wanted(n) {
        let (g, a, b, sp, c) = gen::lipschitz_concave_split(&mut r);
        let v = theorems::check_lipschitz_concave_split(&g, a, b, sp, &c);
        out.record(&v, || format!("{g:?} on [{a}, {b}], p = {sp}, c = {c}"));
    }
    out
}

/// Decreasing convex ½-Lipschitz functions: `T(g + 1/4) <= ∫g`.
pub fn convex(seed: u64, n: usize) -> SuiteResult {
    let mut r = rng(seed, 4);
    let mut out = SuiteResult::new("convex");
    while out.wanted(n) {
        let (g, a, b) = gen::convex(&mut r, false);
        let v = theorems::check_convex(&g, a, b);
        out.record(&v, || format!("{g:?} on [{a}, {b}]"));
    }
    out
}

/// The improved convex bound with a ⅓-Lipschitz tail.
pub fn convex_improved(seed: u64, n: usize) -> SuiteResult {
    let mut r = rng(seed, 5);
    let mut out = SuiteResult::new("convex-improved");
    while out.wanted(n) {
        let (g, a, b, t) = gen::convex_improved(&mut r);
        let v = theorems::check_convex_improved(&g, a, b, &t);
        out.record(&v, || format!("{g:?} on [{a}, {b}], t = {t}"));
    }
    out
}

/// `T(g, a, b)` against a direct count of lattice points `(m, k)` with
/// `1 <= k <= g(m)`, end columns weighted ½, for non-negative `g`.
pub fn lattice_equivalence(seed: u64, n: usize) -> SuiteResult {
    let mut r = rng(seed, 6);
    let mut out = SuiteResult::new("lattice-count");
    for _ in 0..n {
        let a: i64 = r.gen_range(-20..20);
        let b = a + r.gen_range(1..=50);
        let vals: Vec<Rational> = (a..=b)
            .map(|_| rat(r.gen_range(0..=100 * 13), 13))
            .collect();
        let t = tfs(a, b, |m| vals[(m - a) as usize].clone())
            .expect("a < b")
            .value;
        let mut twice = 0i64;
        for (i, m) in (a..=b).enumerate() {
            let w = if m == a || m == b { 1 } else { 2 };
            let mut k = 1i64;
            while int(k) <= vals[i] {
                twice += w;
                k += 1;
            }
        }
        out.instances += 1;
        if t != rat(twice, 2) {
            out.fail(|| format!("[{a}, {b}]: T = {t}, count = {}/2", twice));
        }
    }
    out
}

/// `T(g, a, b) = T(g, a, q) + T(g, q, b)` for every interior `q`.
pub fn additivity(seed: u64, n: usize) -> SuiteResult {
    let mut r = rng(seed, 7);
    let mut out = SuiteResult::new("additivity");
    for _ in 0..n {
        let a: i64 = r.gen_range(-20..20);
        let b = a + r.gen_range(2..=40);
        let vals: Vec<Rational> = (a..=b).map(|_| rat(r.gen_range(-500..=500), 7)).collect();
        let g = |m: i64| vals[(m - a) as usize].clone();
        let whole = tfs(a, b, g).expect("a < b").value;
        for q in a + 1..b {
            let split = tfs(a, q, g).expect("a < q").value + tfs(q, b, g).expect("q < b").value;
            out.instances += 1;
            if split != whole {
                out.fail(|| format!("[{a}, {b}] split at {q}"));
            }
        }
    }
    out
}

/// Phase bounds `F_λ(ν) - 1/4 < θ_ν(λ)/π < G_λ(ν) - 1/4`.
pub fn theta_sandwich(seed: u64, n: usize) -> SuiteResult {
    let mut r = rng(seed, 8);
    let points: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let nu = if r.gen_bool(0.5) {
                r.gen_range(0..=20) as f64
            } else {
                r.gen_range(0.0..20.0)
            };
            let lambda = r.gen_range(0.05..=3.0 * nu + 40.0);
            (nu, lambda)
        })
        .collect();
    points
        .par_iter()
        .map(|&(nu, lambda)| {
            let mut out = SuiteResult::new("theta-sandwich");
            match besseloracle::theta(nu, lambda) {
                Ok(th) => {
                    let t = th / PI;
                    let at = || format!("nu = {nu}, lambda = {lambda}");
                    out.strict(float::f(lambda, nu) - 0.25, t, at);
                    out.strict(t, float::g(lambda, nu) - 0.25, at);
                }
                Err(e) => out.fail(|| e.to_string()),
            }
            out
        })
        .reduce(|| SuiteResult::new("theta-sandwich"), SuiteResult::merge)
}

/// The four upper and lower bounds on `γ_{λ,μ}(z)` in terms of `G`, `F`,
/// `H` and `Φ`.
pub fn gamma_bounds(seed: u64, n: usize) -> SuiteResult {
    let mut r = rng(seed, 9);
    let points: Vec<(f64, f64, f64)> = (0..n)
        .map(|_| {
            let lambda = r.gen_range(0.5..60.0);
            let mu = lambda * r.gen_range(0.02..0.98);
            let z = if r.gen_bool(0.3) {
                (lambda * r.gen_range(0.0f64..1.0)).floor()
            } else {
                r.gen_range(0.0..=lambda)
            };
            (lambda, mu, z)
        })
        .collect();
    points
        .par_iter()
        .map(|&(lambda, mu, z)| {
            let mut out = SuiteResult::new("gamma-bounds");
            let at = || format!("lambda = {lambda}, mu = {mu}, z = {z}");
            let gam = match besseloracle::gamma(lambda, mu, z) {
                Ok(v) => v,
                Err(e) => {
                    out.fail(|| e.to_string());
                    return out;
                }
            };
            let g = float::g(lambda, z);
            out.strict(gam, g - float::f(mu, z), at);
            out.strict(gam, g + 0.25, at);
            if z < mu {
                out.strict(gam, float::phi(lambda, mu, z) + float::h(mu, z), at);
            }
            if z <= mu {
                let ph = float::phi(lambda, mu, z);
                out.strict(ph, gam, at);
                out.strict(gam, ph + 0.25, at);
            }
            out
        })
        .reduce(|| SuiteResult::new("gamma-bounds"), SuiteResult::merge)
}

/// Phase floor `⌊Θ_{r,m}(λ)/π⌋` against a sign-change scan of the cross
/// product.
pub fn zero_count_agreement(seed: u64, n: usize) -> SuiteResult {
    let mut r = rng(seed, 10);
    let points: Vec<(f64, u32, f64)> = (0..n)
        .map(|_| {
            (
                r.gen_range(0.05..0.95),
                r.gen_range(0..=20),
                r.gen_range(0.5..40.0),
            )
        })
        .collect();
    points
        .par_iter()
        .map(|&(rr, m, lambda)| {
            let mut out = SuiteResult::new("zero-count-agreement");
            out.instances += 1;
            let a = besseloracle::branch_count(rr, m, lambda);
            let b = count_zeros_crossproduct(rr, m, lambda);
            if a.is_err() || a != b {
                out.fail(|| {
                    format!("r = {rr}, m = {m}, lambda = {lambda}: phase {a:?}, scan {b:?}")
                });
            }
            out
        })
        .reduce(
            || SuiteResult::new("zero-count-agreement"),
            SuiteResult::merge,
        )
}

/// Annulus grid `r = 0.1..0.9`, `λ = 0.25..40`: the Pólya bound, the chain
/// `N <= P <= P̄`, and the comparison cylinder.
pub fn polya_grid() -> Vec<SuiteResult> {
    let points: Vec<(i64, i64)> = (1..=9)
        .flat_map(|j| (1..=160).map(move |i| (j, i)))
        .collect();
    let results: Vec<[SuiteResult; 3]> = points
        .par_iter()
        .map(|&(j, i)| {
            let mut polya = SuiteResult::new("polya-annulus");
            let mut chain = SuiteResult::new("count-chain");
            let mut cyl = SuiteResult::new("cylinder-comparison");
            let r = j as f64 / 10.0;
            let lambda = i as f64 / 4.0;
            let at = || format!("r = {r}, lambda = {lambda}");
            let n = match besseloracle::count_annulus(r, lambda) {
                Ok(n) => n as f64,
                Err(e) => {
                    polya.fail(|| e.to_string());
                    return [polya, chain, cyl];
                }
            };
            polya.strict(n, (1.0 - r * r) * lambda * lambda / 4.0, at);
            let mu = r * lambda;
            let pf = p(lambda, mu) as f64;
            let lam_q = rat(i, 4);
            let mu_q = rat(i * j, 40);
            let pb = p_bar(&lam_q, &mu_q, 12)
                .ok()
                .and_then(|v| v.to_f64())
                .unwrap_or(f64::NAN);
            chain.instances += 1;
            if !(n <= pf && pf <= pb) {
                chain.fail(|| format!("{}: N = {n}, P = {pf}, P-bar = {pb}", at()));
            }
            chain.margin(pb - n);
            let c = besseloracle::count_cylinder(besseloracle::cylinder_height(r), lambda) as f64;
            cyl.instances += 1;
            if n > c {
                cyl.fail(|| format!("{}: N = {n}, cylinder = {c}", at()));
            }
            cyl.margin(c - n);
            [polya, chain, cyl]
        })
        .collect();
    let mut acc = [
        SuiteResult::new("polya-annulus"),
        SuiteResult::new("count-chain"),
        SuiteResult::new("cylinder-comparison"),
    ];
    for [a, b, c] in results {
        let [x, y, z] = acc;
        acc = [x.merge(a), y.merge(b), z.merge(c)];
    }
    acc.into()
}

/// Disk counts against `λ²/4 - ⌊ω₀λ⌋/2` for `λ = 0.1, 0.2, …, 60`.
pub fn disk_improved() -> SuiteResult {
    let w0 = float::omega0();
    (1..=600)
        .into_par_iter()
        .map(|i| {
            let mut out = SuiteResult::new("disk-improved");
            let lambda = i as f64 / 10.0;
            match besseloracle::count_disk(lambda) {
                Ok(n) => {
                    let bound = lambda * lambda / 4.0 - (w0 * lambda).floor() / 2.0;
                    out.strict(n as f64, bound, || format!("lambda = {lambda}"));
                }
                Err(e) => out.fail(|| e.to_string()),
            }
            out
        })
        .reduce(|| SuiteResult::new("disk-improved"), SuiteResult::merge)
}

/// Per-instance count used by the suites of the floor-sum theorems.
pub const THEOREM_INSTANCES: usize = 10_000;

/// All floor-sum suites at `n` instances each, plus the lattice and
/// additivity checks at `n / 10`.
pub fn floor_sum_suites(seed: u64, n: usize) -> Vec<SuiteResult> {
    let small = (n / 10).max(1);
    vec![
        concave(seed, n),
        lipschitz_concave(seed, n),
        lipschitz_concave_split(seed, n),
        convex(seed, n),
        convex_improved(seed, n),
        lattice_equivalence(seed, small),
        additivity(seed, small),
    ]
}

/// Oracle suites: phase sandwich and `γ` bounds at `n` samples each, and
/// the zero-count comparison at `n / 10`.
pub fn oracle_suites(seed: u64, n: usize) -> Vec<SuiteResult> {
    vec![
        theta_sandwich(seed, n),
        gamma_bounds(seed, n),
        zero_count_agreement(seed, (n / 10).max(1)),
    ]
}
