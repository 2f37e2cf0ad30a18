//! Executable checks of the floor-sum inequalities.
//!
//! Each `check_*` function first validates the hypotheses of its inequality
//! on the given instance and returns [`Verdict::Rejected`] when they fail.
//! Piecewise-linear instances with rational breakpoints are compared exactly;
//! closed-form instances use double precision and adaptive quadrature.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

use super::{tfs_floors, FloorSumReport};
use crate::exactnum::{int, rat, rat_floor, to_f64, Rational};

/// Quadrature tolerance and comparison slack for closed-form instances.
pub const QUAD_TOL: f64 = 1e-10;
const CLOSED_SLACK: f64 = 1e-8;

/// Continuous piecewise-linear function through `(xs[i], ys[i])`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

impl PiecewiseLinear {
    pub fn new(xs: Vec<Rational>, ys: Vec<Rational>) -> Self {
        assert!(
            xs.len() >= 2 && xs.len() == ys.len(),
            "need at least two nodes"
        );
        assert!(xs.windows(2).all(|w| w[0] < w[1]), "nodes must increase");
        Self { xs, ys }
    }

    pub fn start(&self) -> &Rational {
        &self.xs[0]
    }

    pub fn end(&self) -> &Rational {
        self.xs.last().unwrap()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.xs.iter().zip(&self.ys)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let i = match self.xs.iter().position(|t| t >= x) {
            Some(0) => return self.ys[0].clone(),
            Some(i) => i,
            None => return self.ys.last().unwrap().clone(),
        };
        let (x0, x1, y0, y1) = (&self.xs[i - 1], &self.xs[i], &self.ys[i - 1], &self.ys[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn slopes(&self) -> Vec<Rational> {
        (1..self.xs.len())
            .map(|i| (&self.ys[i] - &self.ys[i - 1]) / (&self.xs[i] - &self.xs[i - 1]))
            .collect()
    }

    /// Exact integral over `[a, b]`, which must lie within the domain.
    pub fn integral(&self, a: &Rational, b: &Rational) -> Rational {
        let mut pts: Vec<Rational> = vec![a.clone()];
        pts.extend(self.xs.iter().filter(|x| *x > a && *x < b).cloned());
        pts.push(b.clone());
        pts.windows(2)
            .map(|w| (&w[1] - &w[0]) * (self.eval(&w[0]) + self.eval(&w[1])) / int(2))
            .sum()
    }

    /// Slopes of the pieces meeting `[a, b]`.
    fn slopes_on(&self, a: &Rational, b: &Rational) -> Vec<Rational> {
        let s = self.slopes();
        (0..s.len())
            .filter(|&i| &self.xs[i + 1] > a && &self.xs[i] < b)
            .map(|i| s[i].clone())
            .collect()
    }

    pub fn shifted(&self, c: &Rational) -> Self {
        Self {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|y| y + c).collect(),
        }
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function under test.
#[derive(Clone)]
pub enum GSpec {
    Linear(PiecewiseLinear),
    Closed { label: String, f: RealFn },
}

impl fmt::Debug for GSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GSpec::Linear(pl) => write!(f, "Linear({pl:?})"),
            GSpec::Closed { label, .. } => write!(f, "Closed({label})"),
        }
    }
}

impl GSpec {
    pub fn closed(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        GSpec::Closed {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    fn value_f64(&self, x: f64) -> f64 {
        match self {
            GSpec::Linear(pl) => to_f64(&pl.eval(&Rational::from_float(x).expect("finite"))),
            GSpec::Closed { f, .. } => f(x),
        }
    }

    fn floor_at(&self, m: i64, shift: &Rational) -> BigInt {
        match self {
            GSpec::Linear(pl) => rat_floor(&(pl.eval(&int(m)) + shift)),
            GSpec::Closed { f, .. } => BigInt::from((f(m as f64) + to_f64(shift)).floor() as i64),
        }
    }

    fn tfs_shifted(&self, a: i64, b: i64, shift: &Rational) -> FloorSumReport {
        tfs_floors(a, b, |m| self.floor_at(m, shift)).expect("a < b checked by caller")
    }

    fn integral(&self, a: f64, b: f64) -> Num {
        match self {
            GSpec::Linear(pl) => Num::Exact(pl.integral(&exact(a), &exact(b))),
            GSpec::Closed { f, .. } => Num::Approx(
                quadrature::double_exponential::integrate(|x| f(x), a, b, QUAD_TOL).integral,
            ),
        }
    }

    /// Samples used to test shape hypotheses of closed-form instances.
    fn grid(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let n = 2000;
        (0..=n)
            .map(|i| {
                let x = a + (b - a) * i as f64 / n as f64;
                (x, self.value_f64(x))
            })
            .collect()
    }

    fn shape(&self, a: f64, b: f64) -> Shape {
        match self {
            GSpec::Linear(pl) => Shape::from_slopes(&pl.slopes_on(&exact(a), &exact(b))),
            GSpec::Closed { .. } => Shape::from_samples(&self.grid(a, b)),
        }
    }

    fn lipschitz(&self, a: &Rational, b: &Rational, c: &Rational) -> bool {
        match self {
            GSpec::Linear(pl) => pl.slopes_on(a, b).iter().all(|s| &s.abs() <= c),
            GSpec::Closed { .. } => self.shape(to_f64(a), to_f64(b)).lipschitz(to_f64(c)),
        }
    }

    fn is_constant(&self, a: f64, b: f64) -> bool {
        let s = self.shape(a, b);
        s.max_slope.abs() < 1e-12 && s.min_slope.abs() < 1e-12
    }

    fn at(&self, x: f64) -> Num {
        match self {
            GSpec::Linear(pl) => Num::Exact(pl.eval(&exact(x))),
            GSpec::Closed { f, .. } => Num::Approx(f(x)),
        }
    }
}

fn exact(x: f64) -> Rational {
    Rational::from_float(x).expect("finite abscissa")
}

/// An exact rational or a double.
#[derive(Clone, Debug, PartialEq)]
pub enum Num {
    Exact(Rational),
    Approx(f64),
}

impl Num {
    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(q) => to_f64(q),
            Num::Approx(x) => *x,
        }
    }

    fn minus(&self, q: &Rational) -> Num {
        match self {
            Num::Exact(v) => Num::Exact(v - q),
            Num::Approx(x) => Num::Approx(x - to_f64(q)),
        }
    }
}

/// Slope statistics of an instance on an interval.
#[derive(Clone, Copy, Debug)]
struct Shape {
    min_slope: f64,
    max_slope: f64,
    concave: bool,
    convex: bool,
}

impl Shape {
    fn from_slopes(s: &[Rational]) -> Self {
        let f: Vec<f64> = s.iter().map(to_f64).collect();
        Self {
            min_slope: f.iter().cloned().fold(f64::INFINITY, f64::min),
            max_slope: f.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            concave: s.windows(2).all(|w| w[1] <= w[0]),
            convex: s.windows(2).all(|w| w[1] >= w[0]),
        }
    }

    fn from_samples(pts: &[(f64, f64)]) -> Self {
        let s: Vec<f64> = pts
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        let tol = 1e-9;
        Self {
            min_slope: s.iter().cloned().fold(f64::INFINITY, f64::min),
            max_slope: s.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            concave: s.windows(2).all(|w| w[1] <= w[0] + tol),
            convex: s.windows(2).all(|w| w[1] >= w[0] - tol),
        }
    }

    fn decreasing(self) -> bool {
        self.max_slope <= 1e-12
    }

    fn lipschitz(self, c: f64) -> bool {
        self.min_slope >= -c - 1e-9 && self.max_slope <= c + 1e-9
    }
}

/// Outcome of checking one inequality `lhs <= rhs` on one instance.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Holds { lhs: f64, rhs: f64, equality: bool },
    Violated { lhs: f64, rhs: f64, reason: String },
    Rejected(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn violated(&self) -> bool {
        matches!(self, Verdict::Violated { .. })
    }

    pub fn rejected(&self) -> bool {
        matches!(self, Verdict::Rejected(_))
    }

    /// `rhs - lhs` when the inequality was evaluated.
    pub fn margin(&self) -> Option<f64> {
        match self {
            Verdict::Holds { lhs, rhs, .. } | Verdict::Violated { lhs, rhs, .. } => Some(rhs - lhs),
            Verdict::Rejected(_) => None,
        }
    }
}

fn compare(lhs: &Rational, rhs: &Num) -> Verdict {
    let l = to_f64(lhs);
    match rhs {
        Num::Exact(r) => {
            if lhs <= r {
                Verdict::Holds {
                    lhs: l,
                    rhs: to_f64(r),
                    equality: lhs == r,
                }
            } else {
                Verdict::Violated {
                    lhs: l,
                    rhs: to_f64(r),
                    reason: "T exceeds bound".into(),
                }
            }
        }
        Num::Approx(r) => {
            if l <= r + CLOSED_SLACK {
                Verdict::Holds {
                    lhs: l,
                    rhs: *r,
                    equality: (l - r).abs() <= CLOSED_SLACK,
                }
            } else {
                Verdict::Violated {
                    lhs: l,
                    rhs: *r,
                    reason: "T exceeds bound".into(),
                }
            }
        }
    }
}

fn check_interval(g: &GSpec, a: i64, b: i64) -> Result<(), Verdict> {
    if a >= b {
        return Err(Verdict::Rejected(format!("empty interval [{a}, {b}]")));
    }
    if let GSpec::Linear(pl) = g {
        if pl.start() > &int(a) || pl.end() < &int(b) {
            return Err(Verdict::Rejected("interval outside the domain".into()));
        }
    }
    Ok(())
}

macro_rules! require {
    ($cond:expr, $why:expr) => {
        if !$cond {
            return Verdict::Rejected($why.into());
        }
    };
}

/// `T(g, a, b) <= ∫_a^b g` for concave `g`.
pub fn check_concave(g: &GSpec, a: i64, b: i64) -> Verdict {
    if let Err(v) = check_interval(g, a, b) {
        return v;
    }
    require!(g.shape(a as f64, b as f64).concave, "not concave");
    let t = g.tfs_shifted(a, b, &Rational::zero());
    compare(&t.value, &g.integral(a as f64, b as f64))
}

/// `T(g, a, b) <= ∫_a^b g - (1 - c)(b - a)/2` for decreasing, concave,
/// `c`-Lipschitz `g` (with `0 < c < 1`) whose floor drops between `a` and
/// `a + 1`.
pub fn check_lipschitz_concave(g: &GSpec, a: i64, b: i64, c: &Rational) -> Verdict {
    check_lipschitz_concave_split(g, a, b, a, c)
}

/// Split-point form: for decreasing, concave, `c`-Lipschitz `g` on
/// `[alpha, beta]` with `⌊g(alpha)⌋ = ⌊g(p)⌋ > ⌊g(p + 1)⌋`,
/// `T(g, alpha, beta) <= ∫ g - (1 - c)(beta - p)/2`.
pub fn check_lipschitz_concave_split(
    g: &GSpec,
    alpha: i64,
    beta: i64,
    p: i64,
    c: &Rational,
) -> Verdict {
    if let Err(v) = check_interval(g, alpha, beta) {
        return v;
    }
    require!(alpha <= p && p < beta, "split point outside [alpha, beta)");
    require!(c.is_positive() && c < &int(1), "need 0 < c < 1");
    let s = g.shape(alpha as f64, beta as f64);
    require!(s.decreasing(), "not decreasing");
    require!(s.concave, "not concave");
    require!(
        g.lipschitz(&int(alpha), &int(beta), c),
        "Lipschitz constant exceeds c"
    );
    let z = Rational::zero();
    let fa = g.floor_at(alpha, &z);
    require!(
        fa == g.floor_at(p, &z) && g.floor_at(p, &z) > g.floor_at(p + 1, &z),
        "floor pattern not met"
    );
    let t = g.tfs_shifted(alpha, beta, &z);
    let rhs = match g.integral(alpha as f64, beta as f64) {
        Num::Exact(i) => Num::Exact(i - (int(1) - c) * int(beta - p) / int(2)),
        Num::Approx(i) => Num::Approx(i - (1.0 - to_f64(c)) * (beta - p) as f64 / 2.0),
    };
    compare(&t.value, &rhs)
}

/// `T(g + 1/4, a, b) <= ∫_a^b g` for non-negative, decreasing, convex,
/// ½-Lipschitz `g` with integer `g(b)`; equality only for constant `g`.
pub fn check_convex(g: &GSpec, a: i64, b: i64) -> Verdict {
    if let Err(v) = check_interval(g, a, b) {
        return v;
    }
    let s = g.shape(a as f64, b as f64);
    require!(s.decreasing(), "not decreasing");
    require!(s.convex, "not convex");
    require!(
        g.lipschitz(&int(a), &int(b), &rat(1, 2)),
        "not 1/2-Lipschitz"
    );
    match g.at(b as f64) {
        Num::Exact(v) => {
            require!(!v.is_negative(), "negative");
            require!(v.is_integer(), "g(b) not an integer");
        }
        Num::Approx(v) => {
            require!(v >= -1e-12, "negative");
            require!((v - v.round()).abs() < 1e-12, "g(b) not an integer");
        }
    }
    let t = g.tfs_shifted(a, b, &rat(1, 4));
    let v = compare(&t.value, &g.integral(a as f64, b as f64));
    match v {
        Verdict::Holds {
            lhs,
            rhs,
            equality: true,
        } if !g.is_constant(a as f64, b as f64) => {
            if matches!(g, GSpec::Linear(_)) {
                Verdict::Violated {
                    lhs,
                    rhs,
                    reason: "equality for non-constant g".into(),
                }
            } else {
                Verdict::Holds {
                    lhs,
                    rhs,
                    equality: true,
                }
            }
        }
        other => other,
    }
}

/// `T(g + 1/4, a, b) <= ∫_a^b g - ⌊g(t)⌋/4` for decreasing, convex,
/// ½-Lipschitz `g` with `g(b) = 0` that is ⅓-Lipschitz on `[t, b]`.
pub fn check_convex_improved(g: &GSpec, a: i64, b: i64, t: &Rational) -> Verdict {
    if let Err(v) = check_interval(g, a, b) {
        return v;
    }
    require!(t >= &int(a) && t <= &int(b), "t outside [a, b]");
    let s = g.shape(a as f64, b as f64);
    require!(s.decreasing(), "not decreasing");
    require!(s.convex, "not convex");
    require!(
        g.lipschitz(&int(a), &int(b), &rat(1, 2)),
        "not 1/2-Lipschitz"
    );
    if t < &int(b) {
        require!(
            g.lipschitz(t, &int(b), &rat(1, 3)),
            "not 1/3-Lipschitz past t"
        );
    }
    let gt = match g.at(b as f64) {
        Num::Exact(v) => {
            require!(v.is_zero(), "g(b) != 0");
            let GSpec::Linear(pl) = g else { unreachable!() };
            rat_floor(&pl.eval(t))
        }
        Num::Approx(v) => {
            require!(v.abs() < 1e-12, "g(b) != 0");
            BigInt::from(g.value_f64(to_f64(t)).floor() as i64)
        }
    };
    let tsum = g.tfs_shifted(a, b, &rat(1, 4));
    let rhs = g
        .integral(a as f64, b as f64)
        .minus(&Rational::new(gt, BigInt::from(4)));
    compare(&tsum.value, &rhs)
}

/// Random instance generators for the property suites.
pub mod gen {
    use super::*;

    fn rand_rat<R: Rng>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rational {
        rat(rng.gen_range(lo * den..=hi * den), den)
    }

    /// Strictly increasing nodes on `[a, b]` containing both ends and every
    /// entry of `extra`.
    fn nodes<R: Rng>(rng: &mut R, a: i64, b: i64, extra: &[Rational]) -> Vec<Rational> {
        let mut xs = vec![int(a), int(b)];
        xs.extend(extra.iter().cloned());
        for _ in 0..rng.gen_range(0..6) {
            xs.push(rand_rat(rng, a, b, 7));
        }
        xs.sort();
        xs.dedup();
        xs
    }

    fn integrate_slopes(xs: &[Rational], slopes: &[Rational], y0: Rational) -> Vec<Rational> {
        let mut ys = vec![y0];
        for i in 1..xs.len() {
            let y = &ys[i - 1] + &slopes[i - 1] * (&xs[i] - &xs[i - 1]);
            ys.push(y);
        }
        ys
    }

    fn slopes<R: Rng>(rng: &mut R, n: usize, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        (0..n)
            .map(|_| {
                let u = rat(rng.gen_range(0..=1000), 1000);
                lo + (hi - lo) * u
            })
            .collect()
    }

    fn interval<R: Rng>(rng: &mut R) -> (i64, i64) {
        let a = rng.gen_range(-5..5);
        (a, a + rng.gen_range(1..=30))
    }

    /// Concave function of arbitrary sign.
    pub fn concave<R: Rng>(rng: &mut R) -> (GSpec, i64, i64) {
        let (a, b) = interval(rng);
        let xs = nodes(rng, a, b, &[]);
        let mut s = slopes(rng, xs.len() - 1, &int(-3), &int(3));
        s.sort_by(|x, y| y.cmp(x));
        let ys = integrate_slopes(&xs, &s, rand_rat(rng, -10, 20, 9));
        (GSpec::Linear(PiecewiseLinear::new(xs, ys)), a, b)
    }

    /// Decreasing, concave, `c`-Lipschitz, shifted so its floor drops right
    /// after `a`.
    pub fn lipschitz_concave<R: Rng>(rng: &mut R) -> (GSpec, i64, i64, Rational) {
        let (a, b) = interval(rng);
        let c = rat(rng.gen_range(1..100), 100);
        let xs = nodes(rng, a, b, &[int(a + 1)]);
        let mut s = slopes(rng, xs.len() - 1, &-c.clone(), &int(0));
        s.sort_by(|x, y| y.cmp(x));
        if s[0].is_zero() {
            s[0] = -c.clone() / int(2);
            s.sort_by(|x, y| y.cmp(x));
        }
        let ys = integrate_slopes(&xs, &s, int(0));
        let pl = PiecewiseLinear::new(xs, ys);
        let d = pl.eval(&int(a)) - pl.eval(&int(a + 1));
        let target = int(rng.gen_range(0..20)) + rand_rat(rng, 0, 1, 1000) * &d;
        let shift = target - pl.eval(&int(a));
        (GSpec::Linear(pl.shifted(&shift)), a, b, c)
    }

    /// Decreasing, concave, `c`-Lipschitz with a split point `p` at which the
    /// floor first drops.
    pub fn lipschitz_concave_split<R: Rng>(rng: &mut R) -> (GSpec, i64, i64, i64, Rational) {
        let (alpha, beta) = interval(rng);
        let p = rng.gen_range(alpha..beta);
        let c = rat(rng.gen_range(1..100), 100);
        let xs = nodes(rng, alpha, beta, &[int(p), int(p + 1)]);
        // shallow before p, steeper after, keeping concavity
        let n = xs.len() - 1;
        let flat = &c / int(4 * (p - alpha + 1));
        let mut s: Vec<Rational> = (0..n)
            .map(|i| {
                let lo = if xs[i + 1] <= int(p) {
                    -flat.clone()
                } else {
                    -c.clone()
                };
                let hi = if xs[i + 1] <= int(p) {
                    int(0)
                } else {
                    -flat.clone()
                };
                let u = rat(rng.gen_range(0..=1000), 1000);
                &lo + (&hi - &lo) * u
            })
            .collect();
        s.sort_by(|x, y| y.cmp(x));
        let ys = integrate_slopes(&xs, &s, int(0));
        let pl = PiecewiseLinear::new(xs, ys);
        let d = pl.eval(&int(p)) - pl.eval(&int(p + 1));
        let target = int(rng.gen_range(0..20)) + rat(rng.gen_range(1..1000), 1000) * &d;
        let shift = target - pl.eval(&int(p));
        (GSpec::Linear(pl.shifted(&shift)), alpha, beta, p, c)
    }

    /// Non-negative, decreasing, convex, ½-Lipschitz with integer end value.
    pub fn convex<R: Rng>(rng: &mut R, end_zero: bool) -> (GSpec, i64, i64) {
        let (a, b) = interval(rng);
        let xs = nodes(rng, a, b, &[]);
        let mut s = slopes(rng, xs.len() - 1, &rat(-1, 2), &int(0));
        s.sort();
        let gb = if end_zero {
            int(0)
        } else {
            int(rng.gen_range(0..5))
        };
        let mut ys = vec![gb];
        for i in (0..xs.len() - 1).rev() {
            let y = &ys[0] - &s[i] * (&xs[i + 1] - &xs[i]);
            ys.insert(0, y);
        }
        (GSpec::Linear(PiecewiseLinear::new(xs, ys)), a, b)
    }

    /// Like [`convex`] with `g(b) = 0`, plus a point `t` past which the
    /// function is ⅓-Lipschitz.
    pub fn convex_improved<R: Rng>(rng: &mut R) -> (GSpec, i64, i64, Rational) {
        let (g, a, b) = convex(rng, true);
        let GSpec::Linear(pl) = &g else {
            unreachable!()
        };
        let s = pl.slopes();
        let xs: Vec<Rational> = pl.nodes().map(|(x, _)| x.clone()).collect();
        let first = s.iter().position(|v| v >= &rat(-1, 3)).unwrap_or(s.len());
        let t0 = xs[first].clone();
        let u = rat(rng.gen_range(0..=100), 100);
        let t = &t0 + (int(b) - &t0) * u;
        (g, a, b, t)
    }
}
