//! Double-precision versions of the bound functions, for oracles and plots.

use std::f64::consts::PI;

pub fn g(lambda: f64, z: f64) -> f64 {
    if z >= lambda {
        return 0.0;
    }
    ((lambda * lambda - z * z).sqrt() - z * (z / lambda).acos()) / PI
}

pub fn h(mu: f64, z: f64) -> f64 {
    let d = mu * mu - z * z;
    (3.0 * mu * mu + 2.0 * z * z) / (24.0 * PI * d * d.sqrt())
}

pub fn f(mu: f64, z: f64) -> f64 {
    if z >= mu {
        return -0.25;
    }
    (g(mu, z) - h(mu, z)).max(-0.25)
}

pub fn phi(lambda: f64, mu: f64, z: f64) -> f64 {
    g(lambda, z) - g(mu, z)
}

pub fn lipschitz_c(lambda: f64, mu: f64) -> f64 {
    (mu / lambda).acos() / PI
}

pub fn omega0() -> f64 {
    3f64.sqrt() / (2.0 * PI) - 1.0 / 6.0
}

/// `G_λ(z) - F_μ(z)`, the summand profile of the lattice-count majorant.
pub fn g_minus_f(lambda: f64, mu: f64, z: f64) -> f64 {
    g(lambda, z) - f(mu, z)
}
