//! Majorization of finite probability vectors, doubly stochastic smoothing,
//! and the discrete measures `H`, `H*`, `H**`.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

const SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidParameter("empty probability vector".into()));
        }
        if let Some(x) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidParameter(format!(
                "probability {x} outside [0, 1]"
            )));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidParameter(format!("probabilities sum to {s}")));
        }
        Ok(ProbVector(p))
    }

    pub fn uniform(k: usize) -> Self {
        ProbVector(vec![1.0 / k as f64; k])
    }

    /// `(0, ..., 0, 1)`.
    pub fn degenerate(k: usize) -> Self {
        let mut p = vec![0.0; k];
        p[k - 1] = 1.0;
        ProbVector(p)
    }

    /// Flat Dirichlet draw; sum corrected onto the last coordinate.
    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        let e: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let s: f64 = e.iter().sum();
        let mut p: Vec<f64> = e.iter().map(|x| x / s).collect();
        let head: f64 = p[..k - 1].iter().sum();
        p[k - 1] = (1.0 - head).max(0.0);
        ProbVector(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn sorted_ascending(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        ProbVector(perm.iter().map(|&i| self.0[i]).collect())
    }

    /// `λ·self + (1-λ)·other`.
    pub fn mix(&self, other: &ProbVector, lambda: f64) -> Result<Self> {
        same_len(self, other)?;
        ProbVector::new(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
                .collect(),
        )
    }
}

impl FromStr for ProbVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let p = s
            .split(',')
            .map(|t| {
                t.trim().parse::<f64>().map_err(|e| Error::Parse {
                    token: t.trim().to_string(),
                    reason: e.to_string(),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        ProbVector::new(p)
    }
}

fn same_len(p: &ProbVector, q: &ProbVector) -> Result<()> {
    if p.len() == q.len() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {}",
            p.len(),
            q.len()
        )))
    }
}

/// Non-negative matrix with unit row and column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublyStochastic(DMatrix<f64>);

impl DoublyStochastic {
    pub fn new(l: DMatrix<f64>) -> Result<Self> {
        if !l.is_square() || l.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix is not square",
                l.nrows(),
                l.ncols()
            )));
        }
        if l.iter().any(|x| !(*x >= 0.0)) {
            return Err(Error::InvalidParameter("negative or NaN entry".into()));
        }
        for (i, r) in l.row_iter().enumerate() {
            if (r.sum() - 1.0).abs() > SUM_TOL {
                return Err(Error::InvalidParameter(format!(
                    "row {i} sums to {}",
                    r.sum()
                )));
            }
        }
        for (j, c) in l.column_iter().enumerate() {
            if (c.sum() - 1.0).abs() > SUM_TOL {
                return Err(Error::InvalidParameter(format!(
                    "column {j} sums to {}",
                    c.sum()
                )));
            }
        }
        Ok(DoublyStochastic(l))
    }

    pub fn identity(k: usize) -> Self {
        DoublyStochastic(DMatrix::identity(k, k))
    }

    /// All entries `1/k`.
    pub fn averaging(k: usize) -> Self {
        DoublyStochastic(DMatrix::from_element(k, k, 1.0 / k as f64))
    }

    /// Matrix with `L[i, perm[i]] = 1`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let k = perm.len();
        let mut seen = vec![false; k];
        for &j in perm {
            if j >= k || std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidParameter(format!(
                    "{perm:?} is not a permutation"
                )));
            }
        }
        Ok(DoublyStochastic(DMatrix::from_fn(k, k, |i, j| {
            if perm[i] == j {
                1.0
            } else {
                0.0
            }
        })))
    }

    /// Convex combination `Σ wᵢ Lᵢ`.
    pub fn convex_combination(parts: &[(f64, DoublyStochastic)]) -> Result<Self> {
        let k = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("no matrices".into()))?
            .1
            .dim();
        let w: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (w - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidParameter(
                "weights must be non-negative and sum to 1".into(),
            ));
        }
        let mut m = DMatrix::zeros(k, k);
        for (w, l) in parts {
            if l.dim() != k {
                return Err(Error::DimensionMismatch(
                    "matrices of different sizes".into(),
                ));
            }
            m += &l.0 * *w;
        }
        DoublyStochastic::new(m)
    }

    /// Birkhoff-form random matrix: a convex combination of `m` uniformly
    /// drawn permutation matrices with flat Dirichlet weights.
    pub fn random_birkhoff<R: Rng + ?Sized>(k: usize, m: usize, rng: &mut R) -> Self {
        let w = ProbVector::random(m.max(1), rng);
        let mut out = DMatrix::zeros(k, k);
        let mut perm: Vec<usize> = (0..k).collect();
        for &wi in w.as_slice() {
            perm.shuffle(rng);
            for (i, &j) in perm.iter().enumerate() {
                out[(i, j)] += wi;
            }
        }
        DoublyStochastic(out)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

/// `p ≺ q`: ascending prefix sums of `p` dominate those of `q` (slack 1e-12),
/// i.e. `q` is at least as informative as `p`.
pub fn majorizes(p: &ProbVector, q: &ProbVector) -> Result<bool> {
    same_len(p, q)?;
    let (a, b) = (p.sorted_ascending(), q.sorted_ascending());
    let (mut sa, mut sb) = (0.0, 0.0);
    for j in 0..a.len() {
        sa += a[j];
        sb += b[j];
        if sa < sb - SUM_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `p = qL`; the result is majorized by `q`.
pub fn smooth(q: &ProbVector, l: &DoublyStochastic) -> Result<ProbVector> {
    if l.dim() != q.len() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} and {}x{} matrix",
            q.len(),
            l.dim(),
            l.dim()
        )));
    }
    let p: Vec<f64> = (0..q.len())
        .map(|j| {
            (0..q.len())
                .map(|i| q.0[i] * l.0[(i, j)])
                .sum::<f64>()
                .clamp(0.0, 1.0)
        })
        .collect();
    let p = ProbVector::new(p)?;
    if !majorizes(&p, q)? {
        return Err(Error::Domain(
            "smoothing produced a vector not majorized by its input".into(),
        ));
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasures {
    /// `-Σ pᵢ log pᵢ`, natural log
    pub h: f64,
    /// `Σ pᵢ²`
    pub h_star: f64,
    /// `max pᵢ`
    pub h_mode: f64,
}

pub fn discrete_measures(p: &ProbVector) -> DiscreteMeasures {
    DiscreteMeasures {
        h: 0.0
            - p.0
                .iter()
                .filter(|x| **x > 0.0)
                .map(|x| x * x.ln())
                .sum::<f64>(),
        h_star: p.0.iter().map(|x| x * x).sum(),
        h_mode: p.0.iter().copied().fold(0.0, f64::max),
    }
}

/// `p ≺ λp + (1-λ)q ≺ q` for `p ≺ q`.
pub fn mixture_order_check(p: &ProbVector, q: &ProbVector, lambda: f64) -> Result<bool> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "lambda {lambda} outside [0, 1]"
        )));
    }
    if !majorizes(p, q)? {
        return Err(Error::InvalidParameter(
            "mixture check needs p majorized by q".into(),
        ));
    }
    let m = p.mix(q, lambda)?;
    Ok(majorizes(p, &m)? && majorizes(&m, q)?)
}
