//! Bessel functions `J_ν` and `Y_ν` of real order `ν >= 0` and argument
//! `x > 0`.
//!
//! Steed's continued fractions with Temme's series for small arguments.
//! Values are returned with a separate natural-log exponent so that very
//! large and very small magnitudes survive at high order.

use std::f64::consts::PI;
use std::sync::OnceLock;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const XMIN: f64 = 2.0;
const MAXIT: usize = 1_000_000;
const BIG: f64 = 1e250;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const ZETA_TERMS: usize = 60;

/// `J_ν(x) = j·e^{je}` and `Y_ν(x) = y·e^{ye}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledJY {
    pub j: f64,
    pub je: f64,
    pub y: f64,
    pub ye: f64,
}

impl ScaledJY {
    pub fn j_value(&self) -> f64 {
        self.j * self.je.exp()
    }

    pub fn y_value(&self) -> f64 {
        self.y * self.ye.exp()
    }

    /// Principal argument of `J + iY`, in `(-π, π]`.
    pub fn angle(&self) -> f64 {
        let m = self.je.max(self.ye);
        (self.y * (self.ye - m).exp()).atan2(self.j * (self.je - m).exp())
    }

    /// `ln(J² + Y²)`.
    pub fn ln_modulus_sq(&self) -> f64 {
        let m = self.je.max(self.ye);
        let a = self.j * (self.je - m).exp();
        let b = self.y * (self.ye - m).exp();
        (a * a + b * b).ln() + 2.0 * m
    }
}

// Riemann zeta at integers 2..ZETA_TERMS by Euler-Maclaurin summation.
fn zeta_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        const B: [f64; 6] = [
            1.0 / 6.0,
            -1.0 / 30.0,
            1.0 / 42.0,
            -1.0 / 30.0,
            5.0 / 66.0,
            -691.0 / 2730.0,
        ];
        let n = 20.0f64;
        let mut out = vec![0.0; ZETA_TERMS + 1];
        for (k, slot) in out.iter_mut().enumerate().skip(2) {
            let s = k as f64;
            let mut sum: f64 = (1..20).map(|i| (i as f64).powf(-s)).sum();
            sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
            // rising factorial s(s+1)...(s+2j-2) / (2j)!
            let mut coef = s / 2.0;
            let mut pow = n.powf(-s - 1.0);
            for (j, b) in B.iter().enumerate() {
                sum += b * coef * pow;
                let j = j as f64 + 1.0;
                coef *= (s + 2.0 * j - 1.0) * (s + 2.0 * j) / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
                pow /= n * n;
            }
            *slot = sum;
        }
        out
    })
}

/// `(gam1, gam2, 1/Γ(1+μ), 1/Γ(1-μ))` for `|μ| <= 1/2`, where
/// `gam1 = (1/Γ(1-μ) - 1/Γ(1+μ)) / (2μ)` and
/// `gam2 = (1/Γ(1-μ) + 1/Γ(1+μ)) / 2`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // ln Γ(1+μ) = -γμ + Σ_{k>=2} (-1)^k ζ(k) μ^k / k, split into even part
    // `e` and odd part `o`.
    let z = zeta_table();
    let mut e = 0.0;
    let mut o_over_mu = -EULER_GAMMA;
    let mut p = mu;
    for (k, zk) in z.iter().enumerate().skip(2) {
        p *= mu;
        let t = zk * p / k as f64;
        if k % 2 == 0 {
            e += t;
        } else {
            o_over_mu -= t / mu;
        }
    }
    if mu == 0.0 {
        return (-EULER_GAMMA, 1.0, 1.0, 1.0);
    }
    let o = o_over_mu * mu;
    let sinhc = if o.abs() < 1e-8 {
        1.0 + o * o / 6.0
    } else {
        o.sinh() / o
    };
    let ee = (-e).exp();
    let gam1 = ee * o_over_mu * sinhc;
    let gam2 = ee * o.cosh();
    (gam1, gam2, (-e - o).exp(), (-e + o).exp())
}

/// `J_ν(x)` and `Y_ν(x)` in scaled form.
pub fn bessel_jy(nu: f64, x: f64) -> ScaledJY {
    assert!(x > 0.0 && nu >= 0.0, "bessel_jy needs x > 0 and nu >= 0");
    let nl = if x < XMIN {
        (nu + 0.5) as usize
    } else {
        (nu - x + 1.5).max(0.0) as usize
    };
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // continued fraction for J'_ν / J_ν
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    // downward recurrence to order xmu, rescaling as needed
    let mut rjl = isign;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let mut fact = nu * xi;
    let mut jscale = 0.0;
    for _ in 0..nl {
        let t = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * t - rjl;
        rjl = t;
        if rjl.abs() > BIG {
            rjl /= BIG;
            rjpl /= BIG;
            jscale += BIG.ln();
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, mut rymu, mut ry1);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS {
            1.0
        } else {
            pimu / pimu.sin()
        };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let ex = e.exp();
        let mut p = ex / (gampl * PI);
        let mut q = 1.0 / (ex * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS {
            1.0
        } else {
            pimu2.sin() / pimu2
        };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= dd / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                break;
            }
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fct = a * xi / (p * p + q * q);
        let mut cr = br + q * fct;
        let mut ci = bi + p * fct;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        for i in 2..MAXIT {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di = -di / den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                break;
            }
        }
        let gam = (p - f) / q;
        let mag = (w / ((p - f) * gam + q)).sqrt();
        rjmu = mag.copysign(rjl);
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    let j = rjl1 * (rjmu / rjl);
    let mut yscale = 0.0;
    for i in 1..=nl {
        let t = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = t;
        if ry1.abs() > BIG {
            ry1 /= BIG;
            rymu /= BIG;
            yscale += BIG.ln();
        }
    }
    ScaledJY {
        j,
        je: -jscale,
        y: rymu,
        ye: yscale,
    }
}

pub fn bessel_j(nu: f64, x: f64) -> f64 {
    bessel_jy(nu, x).j_value()
}

pub fn bessel_y(nu: f64, x: f64) -> f64 {
    bessel_jy(nu, x).y_value()
}
