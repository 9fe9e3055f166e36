//! Scalar information, dispersion and shape measures of a univariate density.
//!
//! All logarithms are natural. Integrals over infinite supports use the
//! tail-cut quantile window of [`QuadratureConfig`], except the moment-based
//! measures which integrate the full support.

use crate::dist::{expect, integrate_window, kinks_within, window, Density};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breaks, maximize, QuadratureConfig};
use crate::special::{big_phi, big_phi_c, big_phi_inv};
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};

/// Differential entropy `-∫ f log f`.
pub fn entropy(d: &dyn Density, cfg: &QuadratureConfig) -> Result<f64> {
    let v = integrate_window(
        d,
        |x| {
            let f = d.pdf(x);
            if f > 0.0 {
                -f * f.ln()
            } else {
                0.0
            }
        },
        cfg,
    )?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Divergent(format!("entropy of {} is {v}", d.label())))
    }
}

/// `e^{2H}`.
pub fn entropy_power(d: &dyn Density, cfg: &QuadratureConfig) -> Result<f64> {
    Ok((2.0 * entropy(d, cfg)?).exp())
}

/// `H* = ∫ f²`.
pub fn h_star(d: &dyn Density, cfg: &QuadratureConfig) -> Result<f64> {
    integrate_window(
        d,
        |x| {
            let f = d.pdf(x);
            f * f
        },
        cfg,
    )
}

/// `H** = sup f`, by grid scan with golden-section refinement plus the
/// values at kinks and window ends.
pub fn h_mode(d: &dyn Density, cfg: &QuadratureConfig) -> f64 {
    let (lo, hi) = window(d, cfg.tail_cut);
    let mut pts = kinks_within(d, lo, hi);
    pts.extend([lo, hi]);
    let mut best = pts.iter().map(|&x| d.pdf(x)).fold(0.0, f64::max);
    let mut edges = vec![lo];
    edges.extend(kinks_within(d, lo, hi));
    edges.push(hi);
    for w in edges.windows(2) {
        let (_, v) = maximize(|x| d.pdf(x), w[0], w[1], 2048);
        best = best.max(v);
    }
    best
}

/// Location Fisher information `∫ f (f'/f)²`, integrated piecewise between
/// kinks. A density that does not vanish at a finite support endpoint gets
/// `+∞`.
pub fn fisher_info(d: &dyn Density, cfg: &QuadratureConfig) -> Result<f64> {
    let (lo, hi) = d.support();
    let jump = |x: f64| x.is_finite() && d.pdf(x) > 0.0;
    if jump(lo) || jump(hi) {
        return Ok(f64::INFINITY);
    }
    integrate_window(
        d,
        |x| {
            let f = d.pdf(x);
            if f > 0.0 {
                let s = d.score(x);
                f * s * s
            } else {
                0.0
            }
        },
        cfg,
    )
}

fn central_moments(d: &dyn Density, cfg: &QuadratureConfig) -> Result<(f64, f64, f64)> {
    let m = expect(d, |x| x, cfg)?;
    let m2 = expect(d, |x| (x - m).powi(2), cfg)?;
    let m3 = expect(d, |x| (x - m).powi(3), cfg)?;
    let m4 = expect(d, |x| (x - m).powi(4), cfg)?;
    Ok((m2, m3, m4))
}

/// Standardized cumulants `(κ3, κ4)` of `(X - E X)/sd X`.
pub fn cumulants(d: &dyn Density, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let (m2, m3, m4) = central_moments(d, cfg)?;
    Ok((m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0))
}

/// Unstandardized cumulants `(κ3, κ4)` of `X - E X`; these are additive
/// over independent sums.
pub fn raw_cumulants(d: &dyn Density, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let (m2, m3, m4) = central_moments(d, cfg)?;
    Ok((m3, m4 - 3.0 * m2 * m2))
}

/// Standardized sample cumulants from divide-by-n central moments.
pub fn sample_cumulants(xs: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len();
    if n < 8 {
        return Err(Error::Degenerate(format!(
            "need at least 8 observations, got {n}"
        )));
    }
    let nf = n as f64;
    let m = xs.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in xs {
        let c = x - m;
        let c2 = c * c;
        m2 += c2;
        m3 += c2 * c;
        m4 += c2 * c2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    if !(m2 > 0.0) || !m2.is_finite() {
        return Err(Error::Degenerate(format!("sample variance is {m2}")));
    }
    Ok((m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0))
}

/// `(κ3² + κ4²/4) / 12`.
pub fn sibson_negentropy(k3: f64, k4: f64) -> f64 {
    (k3 * k3 + 0.25 * k4 * k4) / 12.0
}

/// Negentropy `½ log(2πe Var) - H`, exact via quadrature.
pub fn negentropy(d: &dyn Density, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(0.5 * (2.0 * PI * E * d.variance()).ln() - entropy(d, cfg)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileMeasures {
    pub median: f64,
    /// `q_{1-u} - q_u`
    pub spread: f64,
    /// `(q_u + q_{1-u} - 2 q_½) / (q_{1-u} - q_u)`
    pub q_skew: f64,
    /// `(q_{1-u} - q_u) / (q_{1-v} - q_v)`
    pub q_kurt: f64,
}

/// Quantile location, spread, skewness and kurtosis for `0 < u < v < ½`.
pub fn quantile_measures(d: &dyn Density, u: f64, v: f64) -> Result<QuantileMeasures> {
    if !(0.0 < u && u < v && v < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < u < v < 1/2, got u = {u}, v = {v}"
        )));
    }
    let median = d.quantile(0.5);
    let (qu, qu1) = (d.quantile(u), d.upper_quantile(u));
    let (qv, qv1) = (d.quantile(v), d.upper_quantile(v));
    let spread = qu1 - qu;
    Ok(QuantileMeasures {
        median,
        spread,
        q_skew: (qu + qu1 - 2.0 * median) / spread,
        q_kurt: spread / (qv1 - qv),
    })
}

/// Van der Waerden `Q = ∫₀¹ f(F⁻¹(u)) / φ(Φ⁻¹(u)) du`, computed as
/// `∫ f(F⁻¹(Φ(z))) dz` over the tail-cut window in `z`.
pub fn vdw_q(d: &dyn Density, cfg: &QuadratureConfig) -> Result<f64> {
    let zmax = -big_phi_inv(cfg.tail_cut);
    let g = |z: f64| {
        let x = if z <= 0.0 {
            d.quantile(big_phi(z))
        } else {
            d.upper_quantile(big_phi_c(z))
        };
        d.pdf(x)
    };
    let breaks: Vec<f64> = d
        .kink_points()
        .into_iter()
        .map(|k| {
            let u = d.cdf(k);
            big_phi_inv(u)
        })
        .filter(|z| z.abs() < zmax)
        .collect();
    let q = integrate_with_breaks(g, -zmax, zmax, &breaks, cfg)?;
    // the integrand must be negligible where the window cuts it off
    let tail = (g(-zmax) + g(zmax)) / zmax;
    if !q.is_finite() || tail > 1e-6 * q {
        return Err(Error::Divergent(format!(
            "van der Waerden integral of {} does not settle: integrand {:.3e} and {:.3e} at z = ±{zmax:.2}",
            d.label(),
            g(-zmax),
            g(zmax)
        )));
    }
    Ok(q)
}

/// Every scalar measure of one density, with the affine-invariant ratios.
/// Non-finite values serialize as the strings `inf`/`nan`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub label: String,
    pub entropy: f64,
    pub entropy_power: f64,
    pub h_star: f64,
    pub h_star_inv_sq: f64,
    pub h_mode: f64,
    #[serde(with = "crate::serde_f64")]
    pub fisher: f64,
    pub variance: f64,
    pub skew: f64,
    pub kurt: f64,
    /// `2πe · Var · e^{-2H}`
    pub var_epow: f64,
    /// `12 H*² Var`
    pub wilcoxon_eff: f64,
    /// `4 H**² Var`
    pub sign_eff: f64,
    /// `Q² Var`
    #[serde(with = "crate::serde_f64")]
    pub vdw_eff: f64,
    /// `Var · J`
    #[serde(with = "crate::serde_f64")]
    pub var_fisher: f64,
    pub sibson_negentropy: f64,
}

/// Computes a [`MeasureReport`]; divergent J or Q become `+∞`.
pub fn report(d: &dyn Density, cfg: &QuadratureConfig) -> Result<MeasureReport> {
    let h = entropy(d, cfg)?;
    let hs = h_star(d, cfg)?;
    let hm = h_mode(d, cfg);
    let j = fisher_info(d, cfg)?;
    let (skew, kurt) = cumulants(d, cfg)?;
    let var = d.variance();
    let q = match vdw_q(d, cfg) {
        Ok(q) => q,
        Err(Error::Divergent(_)) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    let epow = (2.0 * h).exp();
    Ok(MeasureReport {
        label: d.label(),
        entropy: h,
        entropy_power: epow,
        h_star: hs,
        h_star_inv_sq: 1.0 / (hs * hs),
        h_mode: hm,
        fisher: j,
        variance: var,
        skew,
        kurt,
        var_epow: 2.0 * PI * E * var / epow,
        wilcoxon_eff: 12.0 * hs * hs * var,
        sign_eff: 4.0 * hm * hm * var,
        vdw_eff: q * q * var,
        var_fisher: var * j,
        sibson_negentropy: sibson_negentropy(skew, kurt),
    })
}
