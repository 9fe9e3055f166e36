//! Location- and scale-free density transformations on `(0,1)`, the
//! decreasing rearrangement, and partial-ordering checks.

use crate::dist::{
    expect_with_breaks, quantile_two_sided, Catalog, Density, DensityRef, GridDensity,
};
use crate::error::{Error, Result};
use crate::measures::h_star;
use crate::quadrature::{integrate_with_breaks, QuadratureConfig};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// `Δ(x) = G⁻¹(F(x)) - x`, the monotone transport from `F` to `G`.
#[derive(Debug, Clone)]
pub struct ShiftFunction {
    f: DensityRef,
    g: DensityRef,
}

pub fn shift_function(f: DensityRef, g: DensityRef) -> ShiftFunction {
    ShiftFunction { f, g }
}

impl ShiftFunction {
    /// Support of `F`; `Δ` is defined on its interior.
    pub fn domain(&self) -> (f64, f64) {
        self.f.support()
    }

    pub fn delta(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(x > lo && x < hi) {
            return Err(Error::Domain(format!(
                "shift function evaluated at {x} outside ({lo}, {hi})"
            )));
        }
        let u = self.f.cdf(x);
        let y = if u <= 0.5 {
            self.g.quantile(u)
        } else {
            self.g.upper_quantile(self.f.sf(x))
        };
        Ok(y - x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Location,
    Dispersion,
    Skewness,
    Kurtosis,
    Information,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Location => "location",
            Relation::Dispersion => "dispersion",
            Relation::Skewness => "skewness",
            Relation::Kurtosis => "kurtosis",
            Relation::Information => "information",
        })
    }
}

impl FromStr for Relation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "location" => Ok(Relation::Location),
            "dispersion" => Ok(Relation::Dispersion),
            "skewness" => Ok(Relation::Skewness),
            "kurtosis" => Ok(Relation::Kurtosis),
            "information" => Ok(Relation::Information),
            other => Err(Error::Parse {
                token: other.to_string(),
                reason: "expected location, dispersion, skewness, kurtosis or information".into(),
            }),
        }
    }
}

/// Outcome of a partial-ordering check. `margin` is the worst signed slack
/// (negative when the relation fails); `witness` is the grid point where it
/// is attained when the relation fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingVerdict {
    pub relation: Relation,
    pub holds: bool,
    pub witness: Option<f64>,
    /// Name of the failing test function for dilation checks.
    pub witness_fn: Option<String>,
    pub margin: f64,
}

impl fmt::Display for OrderingVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ordering {} (margin {:.6e}",
            self.relation,
            if self.holds { "holds" } else { "does not hold" },
            self.margin
        )?;
        if let Some(w) = self.witness {
            write!(f, ", witness {w:.6}")?;
        }
        if let Some(c) = &self.witness_fn {
            write!(f, ", witness C = {c}")?;
        }
        write!(f, ")")
    }
}

/// Checks a shift-function ordering of `G` relative to `F` on `grid` nodes
/// `x_i = F⁻¹(u_i)`, `u_i` equally spaced in `[0.001, 0.999]`:
/// location `Δ ≥ 0`, dispersion `Δ` non-decreasing, skewness `Δ` convex,
/// kurtosis `Δ` concave-convex (one sign change of the smoothed second
/// differences, from `≤ 0` to `≥ 0`). `Information` compares the pdQs.
pub fn check_ordering(
    f: DensityRef,
    g: DensityRef,
    relation: Relation,
    grid: usize,
    cfg: &QuadratureConfig,
) -> Result<OrderingVerdict> {
    if grid < 201 {
        return Err(Error::InvalidParameter(format!(
            "ordering grid needs at least 201 nodes, got {grid}"
        )));
    }
    if relation == Relation::Information {
        let n = grid.max(512);
        return info_order(&pdq(f.as_ref(), n, cfg)?, &pdq(g.as_ref(), n, cfg)?);
    }
    let sh = shift_function(f.clone(), g);
    let xs: Vec<f64> = (0..grid)
        .map(|i| quantile_two_sided(f.as_ref(), 0.001 + 0.998 * i as f64 / (grid - 1) as f64))
        .collect();
    let ds: Vec<f64> = xs.iter().map(|&x| sh.delta(x)).collect::<Result<_>>()?;
    let slopes: Vec<f64> = (0..grid - 1)
        .map(|i| (ds[i + 1] - ds[i]) / (xs[i + 1] - xs[i]))
        .collect();
    let slope_scale = 1.0 + slopes.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let verdict = |margin: f64, at: usize, tol: f64| OrderingVerdict {
        relation,
        holds: margin >= -tol,
        witness: if margin >= -tol { None } else { Some(xs[at]) },
        witness_fn: None,
        margin,
    };
    Ok(match relation {
        Relation::Location => {
            let tol = 1e-7 * (1.0 + ds.iter().fold(0.0f64, |m, d| m.max(d.abs())));
            let (i, m) = argmin(&ds);
            verdict(m, i, tol)
        }
        Relation::Dispersion => {
            let (i, m) = argmin(&slopes);
            verdict(m, i, 1e-7 * slope_scale)
        }
        Relation::Skewness => {
            let curv: Vec<f64> = slopes.windows(2).map(|w| w[1] - w[0]).collect();
            let (i, m) = argmin(&curv);
            verdict(m, i + 1, 1e-7 * slope_scale)
        }
        Relation::Kurtosis => {
            let curv: Vec<f64> = slopes.windows(2).map(|w| w[1] - w[0]).collect();
            let sm = smooth3(&curv);
            let (i, m) = concave_convex_margin(&sm);
            verdict(m, i + 1, 1e-7 * slope_scale)
        }
        Relation::Information => unreachable!(),
    })
}

fn argmin(v: &[f64]) -> (usize, f64) {
    v.iter().copied().enumerate().fold(
        (0, f64::INFINITY),
        |best, (i, x)| if x < best.1 { (i, x) } else { best },
    )
}

fn smooth3(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            if i == 0 || i + 1 == n {
                v[i]
            } else {
                (v[i - 1] + v[i] + v[i + 1]) / 3.0
            }
        })
        .collect()
}

/// Best split `k` with `v[..k] ≤ 0 ≤ v[k..]`: returns the worst offending
/// index and the max over `k` of `min(min(-v[..k]), min(v[k..]))`.
fn concave_convex_margin(v: &[f64]) -> (usize, f64) {
    let n = v.len();
    // suffix minima of v with positions
    let mut suf = vec![(n, f64::INFINITY); n + 1];
    for i in (0..n).rev() {
        suf[i] = if v[i] < suf[i + 1].1 {
            (i, v[i])
        } else {
            suf[i + 1]
        };
    }
    let mut pre = (n, f64::INFINITY); // min of -v over the prefix
    let mut best = (0, f64::NEG_INFINITY);
    for k in 0..=n {
        if k > 0 && -v[k - 1] < pre.1 {
            pre = (k - 1, -v[k - 1]);
        }
        let cand = if pre.1 <= suf[k].1 { pre } else { suf[k] };
        if cand.1 > best.1 {
            best = cand;
        }
    }
    (best.0.min(n.saturating_sub(1)), best.1)
}

/// Convex test functions for the dilation order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ConvexFn {
    Square,
    Abs,
    AbsCube,
    /// `max(0, t - k)`
    HingeUp(f64),
    /// `max(0, -t - k)`
    HingeDown(f64),
}

impl ConvexFn {
    /// `t², |t|, |t|³` and the hinges at `k ∈ {-1, 0, 1}`.
    pub fn standard_family() -> Vec<ConvexFn> {
        let mut v = vec![ConvexFn::Square, ConvexFn::Abs, ConvexFn::AbsCube];
        for k in [-1.0, 0.0, 1.0] {
            v.push(ConvexFn::HingeUp(k));
            v.push(ConvexFn::HingeDown(k));
        }
        v
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            ConvexFn::Square => t * t,
            ConvexFn::Abs => t.abs(),
            ConvexFn::AbsCube => t.abs().powi(3),
            ConvexFn::HingeUp(k) => (t - k).max(0.0),
            ConvexFn::HingeDown(k) => (-t - k).max(0.0),
        }
    }

    fn kink(&self) -> Option<f64> {
        match *self {
            ConvexFn::Abs | ConvexFn::AbsCube => Some(0.0),
            ConvexFn::HingeUp(k) => Some(k),
            ConvexFn::HingeDown(k) => Some(-k),
            ConvexFn::Square => None,
        }
    }
}

impl fmt::Display for ConvexFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvexFn::Square => write!(f, "t^2"),
            ConvexFn::Abs => write!(f, "|t|"),
            ConvexFn::AbsCube => write!(f, "|t|^3"),
            ConvexFn::HingeUp(k) => write!(f, "max(0, t - {k})"),
            ConvexFn::HingeDown(k) => write!(f, "max(0, -t - {k})"),
        }
    }
}

/// Necessary-condition check of the dilation order
/// `E C(X - E X) ≤ E C(Y - E Y)` over the given convex functions, slack 1e-8.
/// The witness is the first failing function in `cs` order.
pub fn dilation_check(
    f: &dyn Density,
    g: &dyn Density,
    cs: &[ConvexFn],
    cfg: &QuadratureConfig,
) -> Result<OrderingVerdict> {
    let centered = |d: &dyn Density, c: &ConvexFn| -> Result<f64> {
        let m = d.mean();
        let extra: Vec<f64> = c.kink().map(|k| k + m).into_iter().collect();
        expect_with_breaks(d, |x| c.eval(x - m), &extra, cfg)
    };
    let mut margin = f64::INFINITY;
    let mut witness = None;
    for c in cs {
        let diff = centered(g, c)? - centered(f, c)?;
        margin = margin.min(diff);
        if diff < -1e-8 && witness.is_none() {
            witness = Some(c.to_string());
        }
    }
    Ok(OrderingVerdict {
        relation: Relation::Dispersion,
        holds: witness.is_none(),
        witness: None,
        witness_fn: witness,
        margin,
    })
}

fn midpoints(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| (i as f64 + 0.5) / n as f64)
}

/// Probability density quantile `f*(u) = f(F⁻¹(u)) / H*` on `n` midpoints.
pub fn pdq(d: &dyn Density, n: usize, cfg: &QuadratureConfig) -> Result<GridDensity> {
    let hs = h_star(d, cfg)?;
    if !(hs > 0.0 && hs.is_finite()) {
        return Err(Error::Domain(format!("H* = {hs} for {}", d.label())));
    }
    let vals = midpoints(n)
        .map(|u| d.pdf(quantile_two_sided(d, u)) / hs)
        .collect();
    GridDensity::from_values(0.0, 1.0, vals)
}

/// `f:g(u) = f(G⁻¹(u)) / g(G⁻¹(u))` on `n` midpoints of `(0,1)`.
pub fn f_colon_g(f: &dyn Density, g: &dyn Density, n: usize) -> Result<GridDensity> {
    let vals = midpoints(n)
        .map(|u| {
            let x = quantile_two_sided(g, u);
            let lg = g.ln_pdf(x);
            if lg == f64::NEG_INFINITY {
                return Err(Error::Domain(format!("g vanishes at G⁻¹({u}) = {x}")));
            }
            Ok((f.ln_pdf(x) - lg).exp())
        })
        .collect::<Result<Vec<f64>>>()?;
    GridDensity::from_values(0.0, 1.0, vals)
}

/// Normal density with the mean and variance of `d`.
pub fn matching_normal(d: &dyn Density) -> Result<DensityRef> {
    Catalog::Normal {
        mu: d.mean(),
        sigma: d.sd(),
    }
    .into_ref()
}

/// `f̃ = f:φ` with `φ` the normal matching the mean and variance of `f`.
pub fn f_tilde(d: &dyn Density, n: usize) -> Result<GridDensity> {
    f_colon_g(d, matching_normal(d)?.as_ref(), n)
}

/// True when `f` puts mass outside the support of `g`.
fn escapes_support(f: &dyn Density, g: &dyn Density) -> bool {
    let (glo, ghi) = g.support();
    (glo.is_finite() && f.cdf(glo) > 0.0) || (ghi.is_finite() && f.sf(ghi) > 0.0)
}

/// `KL(f‖g) = ∫ f log(f/g)` over the support of `f`; `+∞` when `f` has
/// mass where `g` vanishes.
pub fn kl_divergence(f: &dyn Density, g: &dyn Density, cfg: &QuadratureConfig) -> Result<f64> {
    if escapes_support(f, g) {
        return Ok(f64::INFINITY);
    }
    let mut extra = g.kink_points();
    let (glo, ghi) = g.support();
    extra.extend([glo, ghi].iter().filter(|v| v.is_finite()));
    expect_with_breaks(f, |x| f.ln_pdf(x) - g.ln_pdf(x), &extra, cfg)
}

/// `-H(f:g) = ∫₀¹ f:g(u) log f:g(u) du` by quadrature in `u` over the
/// tail-cut window of `G`. Beyond that window `u` rounds to 0 or 1, so the
/// remaining tails are integrated after substituting `u = G(x)`. `+∞` when
/// `f` has mass where `g` vanishes.
pub fn colon_neg_entropy(f: &dyn Density, g: &dyn Density, cfg: &QuadratureConfig) -> Result<f64> {
    if escapes_support(f, g) {
        return Ok(f64::INFINITY);
    }
    let eps = cfg.tail_cut;
    let r_log_r = |x: f64| {
        let l = f.ln_pdf(x) - g.ln_pdf(x);
        if l == f64::NEG_INFINITY {
            0.0
        } else {
            l * l.exp()
        }
    };
    let breaks: Vec<f64> = f
        .kink_points()
        .into_iter()
        .chain(g.kink_points())
        .map(|k| g.cdf(k))
        .filter(|u| *u > eps && *u < 1.0 - eps)
        .collect();
    let central = integrate_with_breaks(
        |u| r_log_r(quantile_two_sided(g, u)),
        eps,
        1.0 - eps,
        &breaks,
        cfg,
    )?;
    let (xlo, xhi) = (g.quantile(eps), g.upper_quantile(eps));
    let (flo, fhi) = f.support();
    let tail = |x: f64| {
        let lf = f.ln_pdf(x);
        if lf == f64::NEG_INFINITY {
            0.0
        } else {
            lf.exp() * (lf - g.ln_pdf(x))
        }
    };
    let mut total = central;
    if flo < xlo {
        total += integrate_with_breaks(tail, flo, xlo, &kinks_below(f, xlo), cfg)?;
    }
    if fhi > xhi {
        total += integrate_with_breaks(tail, xhi, fhi, &kinks_above(f, xhi), cfg)?;
    }
    Ok(total)
}

fn kinks_below(d: &dyn Density, x: f64) -> Vec<f64> {
    let mut k: Vec<f64> = d.kink_points().into_iter().filter(|k| *k < x).collect();
    let lo = d.quantile(1e-12);
    if lo < x {
        k.push(lo);
    }
    k
}

fn kinks_above(d: &dyn Density, x: f64) -> Vec<f64> {
    let mut k: Vec<f64> = d.kink_points().into_iter().filter(|k| *k > x).collect();
    let hi = d.upper_quantile(1e-12);
    if hi > x {
        k.push(hi);
    }
    k
}

/// Grid values sorted into non-increasing order.
pub fn decreasing_rearrangement(g: &GridDensity) -> GridDensity {
    let mut v = g.values().to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    g.with_values(v)
        .expect("rearranging a valid grid keeps it valid")
}

/// Definition of "`g2` has at least the information of `g1`": the running
/// integrals of the decreasing rearrangements satisfy
/// `∫₀ᵘ g1↓ ≤ ∫₀ᵘ g2↓` at every node, slack 1e-9.
pub fn info_order(g1: &GridDensity, g2: &GridDensity) -> Result<OrderingVerdict> {
    if g1.len() != g2.len() {
        return Err(Error::DimensionMismatch(format!(
            "grids of {} and {} nodes",
            g1.len(),
            g2.len()
        )));
    }
    for g in [g1, g2] {
        if g.lo() != 0.0 || g.hi() != 1.0 {
            return Err(Error::InvalidParameter(format!(
                "information order needs densities on (0,1), got ({}, {})",
                g.lo(),
                g.hi()
            )));
        }
    }
    let a = decreasing_rearrangement(g1);
    let b = decreasing_rearrangement(g2);
    let h = g1.step();
    let (mut ca, mut cb) = (0.0, 0.0);
    let mut margin = f64::INFINITY;
    let mut at = 0;
    for i in 0..a.len() {
        ca += a.values()[i] * h;
        cb += b.values()[i] * h;
        if cb - ca < margin {
            margin = cb - ca;
            at = i;
        }
    }
    let holds = margin >= -1e-9;
    Ok(OrderingVerdict {
        relation: Relation::Information,
        holds,
        witness: if holds { None } else { Some(g1.node(at)) },
        witness_fn: None,
        margin,
    })
}

/// Simple density `Σ αᵢ χ_{Aᵢ}` on `(0,1)` with each `Aᵢ` a finite union
/// of intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimpleFunction {
    levels: Vec<f64>,
    sets: Vec<Vec<(f64, f64)>>,
}

impl SimpleFunction {
    pub fn new(levels: Vec<f64>, sets: Vec<Vec<(f64, f64)>>) -> Result<Self> {
        if levels.len() != sets.len() || levels.is_empty() {
            return Err(Error::DimensionMismatch(
                "one set per level is required".into(),
            ));
        }
        if levels.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidParameter("levels must be positive".into()));
        }
        let mut all: Vec<(f64, f64)> = sets.iter().flatten().copied().collect();
        if all.iter().any(|&(a, b)| !(0.0 <= a && a < b && b <= 1.0)) {
            return Err(Error::InvalidParameter(
                "intervals must lie in [0, 1] with a < b".into(),
            ));
        }
        all.sort_by(|x, y| x.0.total_cmp(&y.0));
        if all.windows(2).any(|w| w[1].0 < w[0].1) {
            return Err(Error::InvalidParameter("level sets overlap".into()));
        }
        let s = SimpleFunction { levels, sets };
        let mass: f64 = (0..s.levels.len())
            .map(|i| s.levels[i] * s.measure(i))
            .sum();
        if (mass - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "simple function integrates to {mass}, not 1"
            )));
        }
        Ok(s)
    }

    /// Lebesgue measure of the level set `Aᵢ`.
    pub fn measure(&self, i: usize) -> f64 {
        self.sets[i].iter().map(|(a, b)| b - a).sum()
    }

    pub fn eval(&self, u: f64) -> f64 {
        for (i, set) in self.sets.iter().enumerate() {
            if set.iter().any(|&(a, b)| u >= a && u < b) {
                return self.levels[i];
            }
        }
        0.0
    }

    /// Indices of the levels in decreasing order.
    fn descending(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.levels.len()).collect();
        idx.sort_by(|&i, &j| self.levels[j].total_cmp(&self.levels[i]));
        idx
    }

    /// Distribution function `m(y) = μ{u : f(u) > y}`.
    pub fn distribution(&self, y: f64) -> f64 {
        (0..self.levels.len())
            .filter(|&i| self.levels[i] > y)
            .map(|i| self.measure(i))
            .sum::<f64>()
            + 0.0
    }

    /// Break points `β₀ = 0 < β₁ < ...`, cumulative measures of the level
    /// sets taken from the highest level down.
    pub fn betas(&self) -> Vec<f64> {
        let mut b = vec![0.0];
        for i in self.descending() {
            b.push(b.last().unwrap() + self.measure(i));
        }
        b
    }

    /// `f↓(u) = Σ αᵢ χ_{[β_{i-1}, βᵢ)}(u)` with levels in decreasing order.
    pub fn rearranged(&self, u: f64) -> f64 {
        let betas = self.betas();
        for (k, i) in self.descending().into_iter().enumerate() {
            if u >= betas[k] && u < betas[k + 1] {
                return self.levels[i];
            }
        }
        0.0
    }

    pub fn to_grid(&self, n: usize) -> Result<GridDensity> {
        GridDensity::from_fn(0.0, 1.0, n, |u| self.eval(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{make_density, Affine};
    use std::sync::Arc;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn d(s: &str) -> DensityRef {
        make_density(s).unwrap()
    }

    #[test]
    fn shift_function_cases() {
        let s = shift_function(d("norm:0,1"), d("norm:0,1"));
        assert!(s.delta(1.3).unwrap().abs() < 1e-12);
        let s = shift_function(d("norm:0,1"), d("norm:0,2"));
        for x in [-2.0, 0.5, 3.0] {
            assert!((s.delta(x).unwrap() - x).abs() < 1e-9);
        }
        let s = shift_function(d("norm:0,1"), d("norm:3,1"));
        assert!((s.delta(-1.0).unwrap() - 3.0).abs() < 1e-9);
        let s = shift_function(d("unif:0,1"), d("exp:1"));
        assert!(s.delta(1.5).is_err());
    }

    #[test]
    fn orderings() {
        let c = cfg();
        let v =
            check_ordering(d("norm:0,1"), d("norm:0,2"), Relation::Dispersion, 401, &c).unwrap();
        assert!(v.holds);
        let v =
            check_ordering(d("norm:0,2"), d("norm:0,1"), Relation::Dispersion, 401, &c).unwrap();
        assert!(!v.holds && v.witness.is_some());
        let v = check_ordering(d("unif:0,1"), d("exp:1"), Relation::Skewness, 401, &c).unwrap();
        assert!(v.holds);
        let v = check_ordering(d("exp:1"), d("unif:0,1"), Relation::Skewness, 401, &c).unwrap();
        assert!(!v.holds);
        let v = check_ordering(d("norm:0,1"), d("norm:0,1"), Relation::Location, 401, &c).unwrap();
        assert!(v.holds && v.margin.abs() < 1e-12);
        let v = check_ordering(d("norm:0,1"), d("norm:3,1"), Relation::Location, 401, &c).unwrap();
        assert!(v.holds);
        assert!(check_ordering(d("norm"), d("norm"), Relation::Location, 50, &c).is_err());
    }

    #[test]
    fn kurtosis_chain() {
        let c = cfg();
        let u = crate::dist::standardize(d("unif:0,1")).unwrap();
        for (a, b) in [
            (u.clone(), d("laplace:1")),
            (u.clone(), d("norm:0,1")),
            (d("norm:0,1"), d("laplace:1")),
        ] {
            let v = check_ordering(a, b, Relation::Kurtosis, 501, &c).unwrap();
            assert!(v.holds, "{v}");
        }
        let v = check_ordering(d("laplace:1"), u, Relation::Kurtosis, 501, &c).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn concave_convex_split() {
        assert!(concave_convex_margin(&[-1.0, -0.5, 0.0, 0.5, 1.0]).1 >= 0.0);
        let (i, m) = concave_convex_margin(&[1.0, -1.0, -1.0, 1.0]);
        assert!(m < 0.0 && i < 4);
    }

    #[test]
    fn dilation() {
        let c = cfg();
        let fam = ConvexFn::standard_family();
        let v = dilation_check(d("norm:0,1").as_ref(), d("norm:0,2").as_ref(), &fam, &c).unwrap();
        assert!(v.holds);
        let n = d("laplace:1");
        let v = dilation_check(n.as_ref(), n.as_ref(), &fam, &c).unwrap();
        assert!(v.holds && v.margin == 0.0);
        let v = dilation_check(d("norm:0,2").as_ref(), d("norm:0,1").as_ref(), &fam, &c).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness_fn.as_deref(), Some("t^2"));
    }

    #[test]
    fn pdq_cases() {
        let c = cfg();
        let u = pdq(d("unif:2,5").as_ref(), 512, &c).unwrap();
        assert!(u.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        let a = pdq(d("norm:5,3").as_ref(), 512, &c).unwrap();
        let b = pdq(d("norm:0,1").as_ref(), 512, &c).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-9);
        }
        let n = pdq(d("norm:0,1").as_ref(), 1000, &c).unwrap();
        assert!((n.entropy_power() - 0.824).abs() < 5e-4);
        assert!((1.0 / n.h_star().powi(2) - 0.750).abs() < 5e-4);
        assert!((n.raw_mass() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn colon_densities() {
        let c = cfg();
        let g = f_colon_g(d("laplace:1").as_ref(), d("laplace:1").as_ref(), 512).unwrap();
        assert!(g.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        let t = f_tilde(d("norm:3,2").as_ref(), 512).unwrap();
        assert!(t.values().iter().all(|v| (v - 1.0).abs() < 1e-9));
        let kl = colon_neg_entropy(d("norm:0,1").as_ref(), d("norm:1,1").as_ref(), &c).unwrap();
        assert!((kl - 0.5).abs() < 1e-6, "{kl}");
        let kl = kl_divergence(d("norm:0,1").as_ref(), d("norm:1,1").as_ref(), &c).unwrap();
        assert!((kl - 0.5).abs() < 1e-9);
        assert_eq!(
            kl_divergence(d("norm").as_ref(), d("unif").as_ref(), &c).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn colon_entropy_is_kl() {
        let c = cfg();
        let specs = [
            "norm:0,1",
            "laplace:1",
            "lognorm:0,1",
            "unif:0,1",
            "gmm:0,4,1,2,0.4",
        ];
        for a in specs {
            for b in specs {
                let (fa, fb) = (d(a), d(b));
                let x = kl_divergence(fa.as_ref(), fb.as_ref(), &c).unwrap();
                let y = colon_neg_entropy(fa.as_ref(), fb.as_ref(), &c).unwrap();
                assert!(x >= 0.0 && y >= -1e-8, "{a} {b}");
                if x.is_finite() {
                    assert!((x - y).abs() < 1e-5 * (1.0 + x), "{a} vs {b}: {x} {y}");
                } else {
                    assert_eq!(y, f64::INFINITY);
                }
            }
        }
    }

    #[test]
    fn f_tilde_entropy_is_log_var_epow() {
        // exp(2 ∫ f̃ log f̃) = 2πe Var e^{-2H}
        let c = cfg();
        let l = d("laplace:1");
        let lhs = (2.0
            * colon_neg_entropy(
                l.as_ref(),
                matching_normal(l.as_ref()).unwrap().as_ref(),
                &c,
            )
            .unwrap())
        .exp();
        let r = crate::measures::report(l.as_ref(), &c).unwrap();
        assert!((lhs / r.var_epow - 1.0).abs() < 1e-4);
    }

    #[test]
    fn affine_images_share_transforms() {
        let c = cfg();
        let g = d("gmm:0,4,1,2,0.4");
        let h: DensityRef = Arc::new(Affine::new(g.clone(), 3.0, 5.0).unwrap());
        for (a, b) in [
            (
                pdq(g.as_ref(), 512, &c).unwrap(),
                pdq(h.as_ref(), 512, &c).unwrap(),
            ),
            (
                f_tilde(g.as_ref(), 512).unwrap(),
                f_tilde(h.as_ref(), 512).unwrap(),
            ),
        ] {
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x - y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn rearrangement() {
        let g = GridDensity::from_fn(0.0, 1.0, 256, |u| 0.5 + u).unwrap();
        let r = decreasing_rearrangement(&g);
        assert!(r.values().windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(decreasing_rearrangement(&r), r);
        let c = GridDensity::from_fn(0.0, 1.0, 256, |_| 1.0).unwrap();
        assert_eq!(decreasing_rearrangement(&c), c);
    }

    #[test]
    fn simple_function_formula() {
        // levels 1, 2 and 1/4 on interleaved sets
        let f = SimpleFunction::new(
            vec![1.0, 2.0, 0.25],
            vec![
                vec![(0.0, 0.1), (0.5, 0.7)],
                vec![(0.1, 0.3), (0.8, 0.9)],
                vec![(0.3, 0.5), (0.7, 0.8), (0.9, 1.0)],
            ],
        )
        .unwrap();
        let b = f.betas();
        for (x, y) in b.iter().zip([0.0, 0.3, 0.6, 1.0]) {
            assert!((x - y).abs() < 1e-12);
        }
        assert_eq!(f.distribution(1.5), f.measure(1));
        let g = decreasing_rearrangement(&f.to_grid(1000).unwrap());
        for i in 0..1000 {
            let u = g.node(i);
            assert!((g.values()[i] - f.rearranged(u)).abs() < 1e-12, "u = {u}");
        }
        assert!(SimpleFunction::new(vec![2.0], vec![vec![(0.0, 1.0)]]).is_err());
    }

    #[test]
    fn information_order() {
        let c = cfg();
        let u = pdq(d("unif:0,1").as_ref(), 512, &c).unwrap();
        for s in ["norm:0,1", "laplace:1", "lognorm:0,1", "gmm:0,4,1,2,0.4"] {
            let g = pdq(d(s).as_ref(), 512, &c).unwrap();
            assert!(info_order(&u, &g).unwrap().holds, "{s}");
        }
        let g = pdq(d("laplace:1").as_ref(), 512, &c).unwrap();
        let v = info_order(&g, &g).unwrap();
        assert!(v.holds && v.margin.abs() < 1e-12);
        let n = pdq(d("norm:0,1").as_ref(), 512, &c).unwrap();
        assert!(info_order(&n, &GridDensity::from_fn(0.0, 1.0, 256, |_| 1.0).unwrap()).is_err());
    }
}
