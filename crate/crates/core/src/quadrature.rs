//! Numerical kernel: adaptive Gauss-Kronrod integration on finite and infinite
//! intervals, bracketed root finding, grid + golden-section maximization and a
//! central finite difference.
//!
//! The integrator is a global adaptive G7/K15 scheme in the style of QUADPACK's
//! `qag`: the subinterval with the largest error estimate is bisected until the
//! summed error estimate drops below `max(abs_tol, rel_tol·|I|)`. Infinite ends
//! are mapped onto `[0, 1)` with `x = a + t/(1-t)`; known kinks of the integrand
//! can be passed as split points.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Probability mass ignored in each tail when an infinite support is
    /// truncated to a quantile window.
    pub tail_cut: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_depth: 60,
            tail_cut: 1e-12,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_depth < 10 {
            return Err(Error::InvalidParameter(
                "max_depth must be at least 10".into(),
            ));
        }
        if !(self.tail_cut > 0.0 && self.tail_cut < 1e-6) {
            return Err(Error::InvalidParameter(
                "tail_cut must lie in (0, 1e-6)".into(),
            ));
        }
        Ok(())
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

// G7/K15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_SEGMENTS: usize = 1 << 15;

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// x = a + t/(1-t), t in [0, 1)
    Upper(f64),
    /// x = b - t/(1-t), t in [0, 1)
    Lower(f64),
}

impl Map {
    #[inline]
    fn apply(self, t: f64) -> (f64, f64) {
        match self {
            Map::Identity => (t, 1.0),
            Map::Upper(a) => {
                let s = 1.0 - t;
                (a + t / s, 1.0 / (s * s))
            }
            Map::Lower(b) => {
                let s = 1.0 - t;
                (b - t / s, 1.0 / (s * s))
            }
        }
    }

    fn to_x(self, t: f64) -> f64 {
        self.apply(t).0
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    t0: f64,
    t1: f64,
    value: f64,
    error: f64,
    depth: u32,
    map: Map,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(g: &F, map: Map, t0: f64, t1: f64) -> (f64, f64) {
    let centr = 0.5 * (t0 + t1);
    let hlgth = 0.5 * (t1 - t0);
    let eval = |t: f64| -> f64 {
        let (x, jac) = map.apply(t);
        if !x.is_finite() || !jac.is_finite() {
            return 0.0;
        }
        let v = g(x);
        if v == 0.0 {
            0.0
        } else {
            v * jac
        }
    };
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    let fc = eval(centr);
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    for j in 0..3 {
        let jtw = 2 * j + 1;
        let absc = hlgth * XGK[jtw];
        let f1 = eval(centr - absc);
        let f2 = eval(centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        let fsum = f1 + f2;
        resg += WG[j] * fsum;
        resk += WGK[jtw] * fsum;
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let absc = hlgth * XGK[jtwm1];
        let f1 = eval(centr - absc);
        let f2 = eval(centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        let fsum = f1 + f2;
        resk += WGK[jtwm1] * fsum;
        resabs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * hlgth;
    resabs *= hlgth.abs();
    resasc *= hlgth.abs();
    let mut abserr = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && abserr != 0.0 {
        abserr = resasc * (200.0 * abserr / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        abserr = abserr.max(50.0 * f64::EPSILON * resabs);
    }
    (result, abserr)
}

/// Integrates `g` over `(a, b)`; either end may be infinite.
pub fn integrate<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    integrate_with_breaks(g, a, b, &[], cfg)
}

/// Integrates `g` over `(a, b)` after splitting at the interior points in
/// `breaks` (points outside `(a, b)` are ignored).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    g: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::InvalidParameter("NaN integration limit".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate_with_breaks(g, b, a, breaks, cfg).map(|v| -v);
    }

    let mut points: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|p| p.is_finite() && *p > a && *p < b)
        .collect();
    if a.is_infinite() && b.is_infinite() && points.is_empty() {
        points.push(0.0);
    }
    points.sort_by(f64::total_cmp);
    points.dedup();

    let mut edges = Vec::with_capacity(points.len() + 2);
    edges.push(a);
    edges.extend(points);
    edges.push(b);

    let mut heap = BinaryHeap::new();
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (map, t0, t1) = if lo.is_infinite() {
            (Map::Lower(hi), 0.0, 1.0)
        } else if hi.is_infinite() {
            (Map::Upper(lo), 0.0, 1.0)
        } else {
            (Map::Identity, lo, hi)
        };
        let (value, error) = gk15(&g, map, t0, t1);
        heap.push(Segment {
            t0,
            t1,
            value,
            error,
            depth: 0,
            map,
        });
    }

    let mut frozen: Vec<Segment> = Vec::new();
    let mut total: f64 = heap.iter().map(|s| s.value).sum();
    let mut err: f64 = heap.iter().map(|s| s.error).sum();
    let mut frozen_err = 0.0;
    let mut iter = 0usize;
    loop {
        iter += 1;
        if iter % 512 == 0 {
            // refresh running sums to limit drift
            total = heap.iter().chain(frozen.iter()).map(|s| s.value).sum();
            err = heap.iter().chain(frozen.iter()).map(|s| s.error).sum();
        }
        if !total.is_finite() {
            return Err(Error::Divergent(format!(
                "integral over ({a}, {b}) is not finite"
            )));
        }
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if err <= tol {
            let exact: f64 = heap.iter().chain(frozen.iter()).map(|s| s.value).sum();
            return Ok(exact);
        }
        let stuck = |frozen: &[Segment], heap: &BinaryHeap<Segment>| {
            let w = frozen
                .iter()
                .chain(heap.iter())
                .max_by(|x, y| x.error.total_cmp(&y.error))
                .copied()
                .expect("at least one segment");
            Error::NonConvergence {
                lo: w.map.to_x(w.t0),
                hi: w.map.to_x(w.t1),
                error: w.error,
                total_error: err,
            }
        };
        if frozen_err > tol || heap.len() + frozen.len() >= MAX_SEGMENTS {
            return Err(stuck(&frozen, &heap));
        }
        let Some(worst) = heap.pop() else {
            return Err(stuck(&frozen, &heap));
        };
        let mid = 0.5 * (worst.t0 + worst.t1);
        if worst.depth >= cfg.max_depth || mid <= worst.t0 || mid >= worst.t1 {
            frozen_err += worst.error;
            frozen.push(worst);
            continue;
        }
        total -= worst.value;
        err -= worst.error;
        for (t0, t1) in [(worst.t0, mid), (mid, worst.t1)] {
            let (value, error) = gk15(&g, worst.map, t0, t1);
            total += value;
            err += error;
            heap.push(Segment {
                t0,
                t1,
                value,
                error,
                depth: worst.depth + 1,
                map: worst.map,
            });
        }
    }
}

/// Brent's method on a sign-changing bracket. Terminates when the bracket is
/// narrower than `tol` (bisection steps guarantee progress).
pub fn find_root<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(
            "root tolerance must be positive".into(),
        ));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (g(a), g(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::Unbracketed {
            lo,
            hi,
            g_lo: fa,
            g_hi: fb,
        });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..1000 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = g(b);
        if fb.is_nan() {
            return Err(Error::Domain(format!("root function returned NaN at {b}")));
        }
    }
    Ok(b)
}

/// Coarse grid scan over `[a, b]` followed by golden-section refinement in
/// the cell pair around the best node. Returns `(x_max, g(x_max))`.
pub fn maximize<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, grid: usize) -> (f64, f64) {
    let grid = grid.max(64);
    let step = (b - a) / (grid - 1) as f64;
    let mut best = (a, g(a));
    let mut best_i = 0;
    for i in 1..grid {
        let x = if i == grid - 1 {
            b
        } else {
            a + step * i as f64
        };
        let v = g(x);
        if v > best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    let mut lo = if best_i == 0 {
        a
    } else {
        a + step * (best_i - 1) as f64
    };
    let mut hi = if best_i == grid - 1 {
        b
    } else {
        a + step * (best_i + 1) as f64
    };
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..200 {
        if (hi - lo).abs() <= 1e-14 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if g1 >= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv_phi * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv_phi * (hi - lo);
            g2 = g(x2);
        }
    }
    for (x, v) in [(x1, g1), (x2, g2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Central difference `(g(x+h) - g(x-h)) / 2h`.
pub fn derivative<F: Fn(f64) -> f64>(g: F, x: f64, h: f64) -> f64 {
    (g(x + h) - g(x - h)) / (2.0 * h)
}
