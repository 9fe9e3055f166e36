//! Standard normal helpers.

use libm::erfc;
use statrs::function::erf::erfc_inv;
use std::f64::consts::{PI, SQRT_2};

/// 1/sqrt(2π)
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn phi(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

pub fn ln_phi(x: f64) -> f64 {
    -0.5 * x * x - 0.5 * (2.0 * PI).ln()
}

/// Standard normal cdf, accurate in the lower tail.
pub fn big_phi(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Standard normal survival function, accurate in the upper tail.
pub fn big_phi_c(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

/// Standard normal quantile: an `erfc_inv` start polished by Newton steps
/// against the lower-tail cdf.
pub fn big_phi_inv(u: f64) -> f64 {
    if u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if u >= 1.0 {
        return f64::INFINITY;
    }
    if u > 0.5 {
        return -lower_inv(1.0 - u);
    }
    lower_inv(u)
}

fn lower_inv(u: f64) -> f64 {
    let mut x = -SQRT_2 * erfc_inv(2.0 * u);
    for _ in 0..2 {
        let d = phi(x);
        if d == 0.0 {
            break;
        }
        x -= (big_phi(x) - u) / d;
    }
    x
}

/// Point z with P(Z > z) = p.
pub fn big_phi_c_inv(p: f64) -> f64 {
    -big_phi_inv(p)
}
