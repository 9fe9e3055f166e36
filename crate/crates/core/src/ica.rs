//! Whitening, projection indices and deflationary fixed-point projection
//! pursuit for the independent component model, plus the synthetic mixing
//! experiments used to score recovery.

use crate::dist::{sample_stream, standardize, DensityRef};
use crate::error::{Error, Result};
use crate::special::big_phi_inv;
use nalgebra::{DMatrix, DVector};
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

const MIXING_STREAM: u64 = 1 << 20;
const ROTATION_STREAM: u64 = 1 << 21;
const DIRECTION_STREAM: u64 = 1 << 22;
const MAX_RESTARTS: usize = 10;

/// `n × p` observations, one per row.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix(DMatrix<f64>);

impl DataMatrix {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        let (n, p) = values.shape();
        if p < 2 || n <= p {
            return Err(Error::DimensionMismatch(format!(
                "need n > p >= 2, got n = {n}, p = {p}"
            )));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite entry".into()));
        }
        Ok(DataMatrix(values))
    }

    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let n = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch(
                "columns of different lengths".into(),
            ));
        }
        DataMatrix::new(DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn p(&self) -> usize {
        self.0.ncols()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.0.column(j).iter().copied().collect()
    }

    /// Headerless CSV, one observation per row.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(r);
        for rec in rdr.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|t| {
                    t.parse::<f64>().map_err(|e| Error::Parse {
                        token: t.to_string(),
                        reason: e.to_string(),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if rows.first().is_some_and(|r0| r0.len() != row.len()) {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} fields",
                    rows.len() + 1,
                    row.len()
                )));
            }
            rows.push(row);
        }
        let p = rows.first().map_or(0, Vec::len);
        DataMatrix::new(DMatrix::from_fn(rows.len(), p, |i, j| rows[i][j]))
    }

    /// Headerless CSV with shortest round-trip decimal values.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        for row in self.0.row_iter() {
            wtr.write_record(row.iter().map(|x| format!("{x:?}")))?;
        }
        wtr.flush()?;
        Ok(())
    }
}

fn column_means(x: &DMatrix<f64>) -> DVector<f64> {
    let n = x.nrows() as f64;
    DVector::from_iterator(x.ncols(), x.column_iter().map(|c| c.sum() / n))
}

/// Sample covariance with divisor `n - 1`.
pub fn covariance(x: &DMatrix<f64>) -> DMatrix<f64> {
    let m = column_means(x);
    let mut c = x.clone();
    for mut row in c.row_iter_mut() {
        row -= m.transpose();
    }
    let s = c.transpose() * &c / (x.nrows() as f64 - 1.0);
    (&s + s.transpose()) * 0.5
}

/// Cyclic Jacobi eigendecomposition `S = U diag(D) U′` of a symmetric
/// positive-definite matrix, eigenvalues descending.
pub fn sym_eig(s: &DMatrix<f64>) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let p = s.nrows();
    if !s.is_square() || p == 0 || p > 50 {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix",
            s.nrows(),
            s.ncols()
        )));
    }
    let scale = s.norm().max(f64::MIN_POSITIVE);
    if (s - s.transpose()).norm() > 1e-10 * scale.max(1.0) {
        return Err(Error::InvalidParameter("matrix is not symmetric".into()));
    }
    let mut a = s.clone();
    let mut u = DMatrix::<f64>::identity(p, p);
    let off = |a: &DMatrix<f64>| {
        let mut o = 0.0;
        for i in 0..p {
            for j in 0..p {
                if i != j {
                    o += a[(i, j)] * a[(i, j)];
                }
            }
        }
        o.sqrt()
    };
    let mut sweeps = 0;
    while off(&a) >= 1e-12 * scale {
        sweeps += 1;
        if sweeps > 100 {
            return Err(Error::Domain(
                "Jacobi sweeps did not reduce the off-diagonal mass".into(),
            ));
        }
        for k in 0..p {
            for l in k + 1..p {
                let akl = a[(k, l)];
                if akl == 0.0 {
                    continue;
                }
                let theta = (a[(l, l)] - a[(k, k)]) / (2.0 * akl);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for i in 0..p {
                    let (aik, ail) = (a[(i, k)], a[(i, l)]);
                    a[(i, k)] = c * aik - sn * ail;
                    a[(i, l)] = sn * aik + c * ail;
                }
                for j in 0..p {
                    let (akj, alj) = (a[(k, j)], a[(l, j)]);
                    a[(k, j)] = c * akj - sn * alj;
                    a[(l, j)] = sn * akj + c * alj;
                }
                for i in 0..p {
                    let (uik, uil) = (u[(i, k)], u[(i, l)]);
                    u[(i, k)] = c * uik - sn * uil;
                    u[(i, l)] = sn * uik + c * uil;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let d = DVector::from_iterator(p, order.iter().map(|&i| a[(i, i)]));
    if let Some(bad) = d.iter().find(|x| !(**x > 0.0)) {
        return Err(Error::Singular(format!("eigenvalue {bad} is not positive")));
    }
    let u = DMatrix::from_fn(p, p, |i, j| u[(i, order[j])]);
    Ok((u, d))
}

#[derive(Debug, Clone)]
pub struct WhiteningResult {
    pub mean: DVector<f64>,
    /// `Cov(x)^{-1/2} = U D^{-1/2} U′`
    pub w: DMatrix<f64>,
    pub eigvals: DVector<f64>,
    /// `(X - mean) W′`
    pub z: DMatrix<f64>,
}

pub fn whiten(x: &DataMatrix) -> Result<WhiteningResult> {
    let (u, d) = sym_eig(&covariance(&x.0))?;
    if d[d.len() - 1] <= 1e-13 * d[0] {
        return Err(Error::Singular(format!(
            "covariance condition number {:e}",
            d[0] / d[d.len() - 1]
        )));
    }
    let dm = DMatrix::from_diagonal(&d.map(|v| 1.0 / v.sqrt()));
    let w = &u * dm * u.transpose();
    let w = (&w + w.transpose()) * 0.5;
    let mean = column_means(&x.0);
    let mut c = x.0.clone();
    for mut row in c.row_iter_mut() {
        row -= mean.transpose();
    }
    let z = c * w.transpose();
    Ok(WhiteningResult {
        mean,
        w,
        eigvals: d,
        z,
    })
}

/// Non-Gaussianity functional of a univariate sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionIndex {
    /// `κ̂3²`
    Kappa3Sq,
    /// `κ̂4²`
    Kappa4Sq,
    /// `|κ̂k|^{2/k}`, `k` in 3..=6
    KappaK(u32),
    /// `(κ̂3² + κ̂4²/4) / 12`
    Sibson,
    /// `|mean(y³)|`
    ContrastCube,
    /// `|mean(y⁴) - 3|`
    ContrastQuart,
}

impl ProjectionIndex {
    pub const ALL: [ProjectionIndex; 9] = [
        ProjectionIndex::Kappa3Sq,
        ProjectionIndex::Kappa4Sq,
        ProjectionIndex::KappaK(3),
        ProjectionIndex::KappaK(4),
        ProjectionIndex::KappaK(5),
        ProjectionIndex::KappaK(6),
        ProjectionIndex::Sibson,
        ProjectionIndex::ContrastCube,
        ProjectionIndex::ContrastQuart,
    ];

    pub fn new_kappa_k(k: u32) -> Result<Self> {
        if (3..=6).contains(&k) {
            Ok(ProjectionIndex::KappaK(k))
        } else {
            Err(Error::InvalidParameter(format!(
                "cumulant order {k} outside 3..=6"
            )))
        }
    }

    /// Index value on a sample, standardized with its own mean and
    /// divide-by-n variance for the cumulant indices.
    pub fn value(&self, xs: &[f64]) -> Result<f64> {
        let n = xs.len();
        if n < 8 {
            return Err(Error::Degenerate(format!(
                "need at least 8 observations, got {n}"
            )));
        }
        let nf = n as f64;
        match self {
            ProjectionIndex::ContrastCube => {
                Ok((xs.iter().map(|x| x * x * x).sum::<f64>() / nf).abs())
            }
            ProjectionIndex::ContrastQuart => {
                Ok((xs.iter().map(|x| (x * x).powi(2)).sum::<f64>() / nf - 3.0).abs())
            }
            _ => {
                let k = standardized_cumulants(xs)?;
                Ok(match *self {
                    ProjectionIndex::Kappa3Sq => k[0] * k[0],
                    ProjectionIndex::Kappa4Sq => k[1] * k[1],
                    ProjectionIndex::KappaK(m) => k[m as usize - 3].abs().powf(2.0 / m as f64),
                    _ => crate::measures::sibson_negentropy(k[0], k[1]),
                })
            }
        }
    }

    /// Smooth sample objective at an arbitrary `v`, with the whitened
    /// constraint `E[(v′z)²] = v′v` substituted for the second moment.
    /// Equals the index on `Zv` up to sampling error for unit `v`.
    pub fn objective(&self, z: &DMatrix<f64>, v: &DVector<f64>) -> f64 {
        let m = ProjectedMoments::new(z, v);
        let s = v.norm_squared();
        match *self {
            ProjectionIndex::Kappa3Sq => m.m[3] * m.m[3],
            ProjectionIndex::Kappa4Sq => (m.m[4] - 3.0 * s * s).powi(2),
            ProjectionIndex::KappaK(k) => m.kappa(k, s).abs().powf(2.0 / k as f64),
            ProjectionIndex::Sibson => {
                let k4 = m.m[4] - 3.0 * s * s;
                (m.m[3] * m.m[3] + 0.25 * k4 * k4) / 12.0
            }
            ProjectionIndex::ContrastCube => m.m[3].abs(),
            ProjectionIndex::ContrastQuart => (m.m[4] - 3.0 * s * s).abs(),
        }
    }

    /// `T(v) = ∂D(v′z)/∂v` of [`ProjectionIndex::objective`].
    pub fn gradient(&self, z: &DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
        let m = ProjectedMoments::new(z, v);
        let s = v.norm_squared();
        let g = |k: i32| m.zy(z, k);
        let kappa4_grad = || g(3) * 4.0 - v * (12.0 * s);
        match *self {
            ProjectionIndex::Kappa3Sq => g(2) * (6.0 * m.m[3]),
            ProjectionIndex::Kappa4Sq => (g(3) - v * (3.0 * s)) * (8.0 * (m.m[4] - 3.0 * s * s)),
            ProjectionIndex::Sibson => {
                let k4 = m.m[4] - 3.0 * s * s;
                (g(2) * (6.0 * m.m[3]) + kappa4_grad() * (0.5 * k4)) / 12.0
            }
            ProjectionIndex::ContrastCube => g(2) * (3.0 * m.m[3].signum()),
            ProjectionIndex::ContrastQuart => kappa4_grad() * (m.m[4] - 3.0 * s * s).signum(),
            ProjectionIndex::KappaK(k) => {
                let kap = m.kappa(k, s);
                let dk = match k {
                    3 => g(2) * 3.0,
                    4 => kappa4_grad(),
                    5 => g(4) * 5.0 - (g(2) * (30.0 * s) + v * (20.0 * m.m[3])),
                    _ => {
                        g(5) * 6.0
                            - (g(3) * (60.0 * s) + v * (30.0 * m.m[4]))
                            - g(2) * (60.0 * m.m[3])
                            + v * (180.0 * s * s)
                    }
                };
                let e = 2.0 / k as f64;
                if kap == 0.0 {
                    DVector::zeros(v.len())
                } else {
                    dk * (e * kap.abs().powf(e - 1.0) * kap.signum())
                }
            }
        }
    }

    /// Twice the asymptotic 95% quantile of the index at one fixed direction
    /// of Gaussian data; components below it are labeled Gaussian-like.
    pub fn gaussian_threshold(&self, n: usize) -> f64 {
        const CHI1_95: f64 = 3.841_458_820_694_124;
        const CHI2_95: f64 = 5.991_464_547_107_979;
        const Z975: f64 = 1.959_963_984_540_054;
        let n = n as f64;
        2.0 * match *self {
            ProjectionIndex::Kappa3Sq => 6.0 / n * CHI1_95,
            ProjectionIndex::Kappa4Sq => 24.0 / n * CHI1_95,
            ProjectionIndex::KappaK(k) => {
                let fact: f64 = (1..=k).map(f64::from).product();
                (Z975 * (fact / n).sqrt()).powf(2.0 / k as f64)
            }
            ProjectionIndex::Sibson => CHI2_95 / (2.0 * n),
            ProjectionIndex::ContrastCube => Z975 * (15.0 / n).sqrt(),
            ProjectionIndex::ContrastQuart => Z975 * (96.0 / n).sqrt(),
        }
    }

    /// Indices of the `|κ|^{2/k}` family, for which the projection bound holds.
    pub fn is_subadditive(&self) -> bool {
        matches!(
            self,
            ProjectionIndex::KappaK(_) | ProjectionIndex::Kappa3Sq | ProjectionIndex::Kappa4Sq
        )
    }
}

impl fmt::Display for ProjectionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectionIndex::Kappa3Sq => write!(f, "kappa3_sq"),
            ProjectionIndex::Kappa4Sq => write!(f, "kappa4_sq"),
            ProjectionIndex::KappaK(k) => write!(f, "kappa_k:{k}"),
            ProjectionIndex::Sibson => write!(f, "sibson"),
            ProjectionIndex::ContrastCube => write!(f, "contrast_cube"),
            ProjectionIndex::ContrastQuart => write!(f, "contrast_quart"),
        }
    }
}

impl FromStr for ProjectionIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let bad = || Error::Parse {
            token: s.to_string(),
            reason: "unknown projection index".into(),
        };
        match t.as_str() {
            "kappa3" | "kappa3_sq" => Ok(ProjectionIndex::Kappa3Sq),
            "kappa4" | "kappa4_sq" => Ok(ProjectionIndex::Kappa4Sq),
            "sibson" => Ok(ProjectionIndex::Sibson),
            "cube" | "contrast_cube" => Ok(ProjectionIndex::ContrastCube),
            "quart" | "contrast_quart" => Ok(ProjectionIndex::ContrastQuart),
            _ => {
                let k = t
                    .strip_prefix("kappa_k:")
                    .or_else(|| t.strip_prefix("kappa_k"))
                    .ok_or_else(bad)?
                    .parse::<u32>()
                    .map_err(|_| bad())?;
                ProjectionIndex::new_kappa_k(k)
            }
        }
    }
}

/// Standardized sample cumulants `κ3..κ6` from divide-by-n central moments.
fn standardized_cumulants(xs: &[f64]) -> Result<[f64; 4]> {
    let nf = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / nf;
    let mut m = [0.0; 7];
    for &x in xs {
        let c = x - mean;
        let mut p = c * c;
        for mk in m.iter_mut().skip(2) {
            *mk += p;
            p *= c;
        }
    }
    for mk in m.iter_mut() {
        *mk /= nf;
    }
    if !(m[2] > 0.0 && m[2].is_finite()) {
        return Err(Error::Degenerate(format!("sample variance is {}", m[2])));
    }
    let k = |order: i32, raw: f64| raw / m[2].powf(order as f64 / 2.0);
    Ok([
        k(3, m[3]),
        k(4, m[4] - 3.0 * m[2] * m[2]),
        k(5, m[5] - 10.0 * m[3] * m[2]),
        k(
            6,
            m[6] - 15.0 * m[4] * m[2] - 10.0 * m[3] * m[3] + 30.0 * m[2].powi(3),
        ),
    ])
}

struct ProjectedMoments {
    y: DVector<f64>,
    /// `m[k] = mean(y^k)` for `k <= 6`
    m: [f64; 7],
}

impl ProjectedMoments {
    fn new(z: &DMatrix<f64>, v: &DVector<f64>) -> Self {
        let y = z * v;
        let mut m = [0.0; 7];
        for &yi in y.iter() {
            let mut p = 1.0;
            for mk in m.iter_mut() {
                *mk += p;
                p *= yi;
            }
        }
        let n = y.len() as f64;
        for mk in m.iter_mut() {
            *mk /= n;
        }
        ProjectedMoments { y, m }
    }

    /// `mean(z y^k)`
    fn zy(&self, z: &DMatrix<f64>, k: i32) -> DVector<f64> {
        z.tr_mul(&self.y.map(|t| t.powi(k))) / self.y.len() as f64
    }

    /// Cumulant of order `k` with the zero mean and second moment `s`.
    fn kappa(&self, k: u32, s: f64) -> f64 {
        let m = &self.m;
        match k {
            3 => m[3],
            4 => m[4] - 3.0 * s * s,
            5 => m[5] - 10.0 * m[3] * s,
            _ => m[6] - 15.0 * m[4] * s - 10.0 * m[3] * m[3] + 30.0 * s * s * s,
        }
    }
}

fn open_uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

fn gaussian_vector(rng: &mut ChaCha8Rng, p: usize) -> DVector<f64> {
    DVector::from_fn(p, |_, _| big_phi_inv(open_uniform(rng)))
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, p: usize) -> DMatrix<f64> {
    DMatrix::from_fn(p, p, |_, _| big_phi_inv(open_uniform(rng)))
}

/// Seeded uniform draw from the unit sphere in `R^p`.
pub fn random_unit_vector(rng: &mut ChaCha8Rng, p: usize) -> DVector<f64> {
    loop {
        let v = gaussian_vector(rng, p);
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

/// Seeded Haar-distributed rotation.
pub fn random_rotation(rng: &mut ChaCha8Rng, p: usize) -> DMatrix<f64> {
    let qr = gaussian_matrix(rng, p).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..p {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

fn deflate(v: &mut DVector<f64>, found: &[DVector<f64>]) {
    for _ in 0..2 {
        for u in found {
            let c = u.dot(v);
            v.axpy(-c, u, 1.0);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PursuitConfig {
    pub index: ProjectionIndex,
    /// Number of components; `None` extracts all `p`.
    pub q: Option<usize>,
    pub seed: u64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for PursuitConfig {
    fn default() -> Self {
        PursuitConfig {
            index: ProjectionIndex::Kappa4Sq,
            q: None,
            seed: 0,
            max_iter: 500,
            tol: 1e-6,
        }
    }
}

/// Outcome of projection pursuit; matrices are stored as rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcaResult {
    pub index: ProjectionIndex,
    pub mean: Vec<f64>,
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
    /// `p × q`, orthonormal columns
    #[serde(rename = "V1")]
    pub v1: Vec<Vec<f64>>,
    /// `V1′ W`, `q × p`
    pub unmixing: Vec<Vec<f64>>,
    #[serde(with = "crate::serde_f64::vec")]
    pub component_index_values: Vec<f64>,
    pub gaussian_like: Vec<bool>,
    pub iterations: Vec<usize>,
    pub converged: Vec<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub amari: Option<f64>,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn from_rows(r: &[Vec<f64>]) -> DMatrix<f64> {
    let c = r.first().map_or(0, Vec::len);
    DMatrix::from_fn(r.len(), c, |i, j| r[i][j])
}

impl IcaResult {
    pub fn v1_matrix(&self) -> DMatrix<f64> {
        from_rows(&self.v1)
    }

    pub fn unmixing_matrix(&self) -> DMatrix<f64> {
        from_rows(&self.unmixing)
    }

    /// Recovered sources `(X - mean) · unmixing′`.
    pub fn sources(&self, x: &DataMatrix) -> DMatrix<f64> {
        let mut c = x.0.clone();
        for mut row in c.row_iter_mut() {
            for (j, m) in self.mean.iter().enumerate() {
                row[j] -= m;
            }
        }
        c * self.unmixing_matrix().transpose()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            token: "json".into(),
            reason: e.to_string(),
        })
    }
}

/// Deflationary fixed-point search for `q` directions maximizing the index
/// on the whitened data: `v ← normalize(deflate(T(v)))` until
/// `|⟨v_new, v_old⟩| > 1 - tol`.
pub fn fixed_point_pursuit(wr: &WhiteningResult, cfg: &PursuitConfig) -> Result<IcaResult> {
    let z = &wr.z;
    let p = z.ncols();
    let q = cfg.q.unwrap_or(p);
    if q == 0 || q > p {
        return Err(Error::InvalidParameter(format!(
            "q = {q} must lie in 1..={p}"
        )));
    }
    if !(cfg.tol > 0.0) || cfg.max_iter == 0 {
        return Err(Error::InvalidParameter(
            "tol and max_iter must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut found: Vec<DVector<f64>> = Vec::with_capacity(q);
    let (mut iterations, mut converged) = (Vec::new(), Vec::new());
    for _ in 0..q {
        let mut restarts = 0;
        let start = |rng: &mut ChaCha8Rng, found: &[DVector<f64>]| loop {
            let mut v = random_unit_vector(rng, p);
            deflate(&mut v, found);
            let nv = v.norm();
            if nv > 1e-6 {
                return v / nv;
            }
        };
        let mut v = start(&mut rng, &found);
        let mut done = false;
        let mut it = 0;
        while it < cfg.max_iter {
            it += 1;
            let mut t = cfg.index.gradient(z, &v);
            deflate(&mut t, &found);
            let nt = t.norm();
            if !(nt > 1e-12) {
                restarts += 1;
                if restarts > MAX_RESTARTS {
                    return Err(Error::Degenerate(
                        "projection index gradient vanishes at every start".into(),
                    ));
                }
                v = start(&mut rng, &found);
                continue;
            }
            let v_new = t / nt;
            let c = v_new.dot(&v).abs();
            v = v_new;
            if c > 1.0 - cfg.tol {
                done = true;
                break;
            }
        }
        deflate(&mut v, &found);
        v /= v.norm();
        found.push(v);
        iterations.push(it);
        converged.push(done);
    }
    let v1 = DMatrix::from_columns(&found);
    let unmixing = v1.transpose() * &wr.w;
    let n = z.nrows();
    let mut values = Vec::with_capacity(q);
    for v in &found {
        let y: Vec<f64> = (z * v).iter().copied().collect();
        values.push(cfg.index.value(&y)?);
    }
    let thr = cfg.index.gaussian_threshold(n);
    Ok(IcaResult {
        index: cfg.index,
        mean: wr.mean.iter().copied().collect(),
        w: rows(&wr.w),
        v1: rows(&v1),
        unmixing: rows(&unmixing),
        gaussian_like: values.iter().map(|v| *v < thr).collect(),
        component_index_values: values,
        iterations,
        converged,
        amari: None,
    })
}

/// Amari index of `P = a_est · a_true⁻¹`, scaled to `[0, 1]`; zero iff `P`
/// is a scaled permutation. With unmixing matrices as arguments this scores
/// recovery up to order, sign and scale.
pub fn amari_index(a_est: &DMatrix<f64>, a_true: &DMatrix<f64>) -> Result<f64> {
    let p = a_true.nrows();
    if !a_true.is_square() || a_est.shape() != a_true.shape() || p < 2 {
        return Err(Error::DimensionMismatch(
            "amari index needs two square matrices of equal size >= 2".into(),
        ));
    }
    let inv = a_true
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular("a_true".into()))?;
    if a_est.determinant().abs() < 1e-300 {
        return Err(Error::Singular("a_est".into()));
    }
    let m = (a_est * inv).abs();
    let mut s = 0.0;
    for r in m.row_iter() {
        s += r.sum() / r.max() - 1.0;
    }
    for c in m.column_iter() {
        s += c.sum() / c.max() - 1.0;
    }
    Ok(s / (2.0 * p as f64 * (p as f64 - 1.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mixing {
    Given(DMatrix<f64>),
    /// Seeded Gaussian matrix, redrawn until its condition number is at most 20.
    Random,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    /// `S · M′`
    pub x: DataMatrix,
    pub mixing: DMatrix<f64>,
    /// Standardized independent sources, one per column.
    pub s: DataMatrix,
}

fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.singular_values();
    sv.max() / sv.min()
}

fn source_matrix(sources: &[DensityRef], n: usize, seed: u64) -> Result<DataMatrix> {
    if sources.len() < 2 {
        return Err(Error::InvalidParameter("need at least two sources".into()));
    }
    let cols = sources
        .iter()
        .enumerate()
        .map(|(j, d)| {
            Ok(sample_stream(
                standardize(d.clone())?.as_ref(),
                n,
                seed,
                j as u64,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    DataMatrix::from_columns(&cols)
}

/// Independent standardized sources mixed as `X = S · M′`.
pub fn simulate_mixture(
    sources: &[DensityRef],
    mixing: Mixing,
    n: usize,
    seed: u64,
) -> Result<Simulation> {
    let s = source_matrix(sources, n, seed)?;
    let p = s.p();
    let m = match mixing {
        Mixing::Given(m) => {
            if m.shape() != (p, p) {
                return Err(Error::DimensionMismatch(format!(
                    "mixing matrix must be {p}x{p}"
                )));
            }
            if !(condition_number(&m) < 1e12) {
                return Err(Error::Singular("requested mixing matrix".into()));
            }
            m
        }
        Mixing::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(MIXING_STREAM);
            loop {
                let m = gaussian_matrix(&mut rng, p);
                if condition_number(&m) <= 20.0 {
                    break m;
                }
            }
        }
    };
    let x = DataMatrix::new(&s.0 * m.transpose())?;
    Ok(Simulation { x, mixing: m, s })
}

#[derive(Debug, Clone)]
pub struct IcaRun {
    pub sources: Vec<DensityRef>,
    pub n: usize,
    pub seed: u64,
    pub pursuit: PursuitConfig,
}

/// Simulate, whiten, pursue and score against the true unmixing `M⁻¹`.
pub fn run_ica(run: &IcaRun) -> Result<(IcaResult, Simulation)> {
    let sim = simulate_mixture(&run.sources, Mixing::Random, run.n, run.seed)?;
    let wr = whiten(&sim.x)?;
    let mut res = fixed_point_pursuit(&wr, &run.pursuit)?;
    if res.unmixing.len() == sim.x.p() {
        let truth = sim
            .mixing
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("mixing".into()))?;
        res.amari = Some(amari_index(&res.unmixing_matrix(), &truth)?);
    }
    Ok((res, sim))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionBoundReport {
    pub index: ProjectionIndex,
    pub n: usize,
    pub trials: usize,
    /// `max_v D(v′x_st)` over the random directions
    pub max_projection: f64,
    /// `D(z_j)` per source
    pub component_values: Vec<f64>,
    /// `D(e_j′z)` on the unmixed sources
    pub axis_values: Vec<f64>,
    /// `10 √(24/n)`
    pub slack: f64,
    pub holds: bool,
}

/// Checks `D(v′x_st) <= max_j D(z_j) + 10√(24/n)` over `trials` random unit
/// directions after a random rotation of independent standardized sources.
pub fn projection_bound_check(
    sources: &[DensityRef],
    index: ProjectionIndex,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ProjectionBoundReport> {
    if !index.is_subadditive() {
        return Err(Error::InvalidParameter(format!(
            "{index} is not a cumulant dispersion index"
        )));
    }
    let s = source_matrix(sources, n, seed)?;
    let p = s.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(ROTATION_STREAM);
    let rot = random_rotation(&mut rng, p);
    let wr = whiten(&DataMatrix::new(&s.0 * rot.transpose())?)?;
    let component_values = (0..p)
        .map(|j| index.value(&s.column(j)))
        .collect::<Result<Vec<_>>>()?;
    let axis_values = (0..p)
        .map(|j| {
            let e = DVector::from_fn(p, |i, _| if i == j { 1.0 } else { 0.0 });
            index.value((&s.0 * e).as_slice())
        })
        .collect::<Result<Vec<_>>>()?;
    rng.set_stream(DIRECTION_STREAM);
    let mut max_projection = f64::NEG_INFINITY;
    for _ in 0..trials {
        let v = random_unit_vector(&mut rng, p);
        max_projection = max_projection.max(index.value((&wr.z * v).as_slice())?);
    }
    let slack = 10.0 * (24.0 / n as f64).sqrt();
    let top = component_values
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ProjectionBoundReport {
        index,
        n,
        trials,
        max_projection,
        component_values,
        axis_values,
        slack,
        holds: max_projection <= top + slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::make_density;

    fn srcs(specs: &[&str]) -> Vec<DensityRef> {
        specs.iter().map(|s| make_density(s).unwrap()).collect()
    }

    #[test]
    fn jacobi_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = gaussian_matrix(&mut rng, 5);
        let s = a.transpose() * &a;
        let (u, d) = sym_eig(&s).unwrap();
        let rec = &u * DMatrix::from_diagonal(&d) * u.transpose();
        assert!((rec - &s).norm() < 1e-9);
        assert!((u.transpose() * &u - DMatrix::identity(5, 5)).norm() < 1e-12);
        assert!(d.as_slice().windows(2).all(|w| w[0] >= w[1]));
        let oracle = s.symmetric_eigen();
        let mut ev: Vec<f64> = oracle.eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        for (x, y) in d.iter().zip(&ev) {
            assert!((x - y).abs() < 1e-10 * y.max(1.0));
        }
    }

    #[test]
    fn jacobi_trivial_and_singular() {
        let (u, d) = sym_eig(&DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0]))).unwrap();
        assert_eq!(d.as_slice(), &[4.0, 1.0]);
        assert_eq!(u[(1, 0)].abs(), 1.0);
        assert!(sym_eig(&DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0])).is_err());
    }

    #[test]
    fn whitened_covariance_is_identity() {
        let sim = simulate_mixture(
            &srcs(&["unif:0,1", "laplace:1", "exp:1"]),
            Mixing::Random,
            2000,
            3,
        )
        .unwrap();
        let wr = whiten(&sim.x).unwrap();
        assert!((covariance(&wr.z) - DMatrix::identity(3, 3)).norm() < 1e-8);
        assert!(column_means(&wr.z).norm() < 1e-12);
    }

    #[test]
    fn uniform_grid_cumulants() {
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        assert!((ProjectionIndex::Kappa4Sq.value(&xs).unwrap() - 1.44).abs() < 1e-6);
        let st = standardize(make_density("unif:0,1").unwrap()).unwrap();
        let ys: Vec<f64> = xs.iter().map(|u| st.quantile(*u)).collect();
        assert!((ProjectionIndex::ContrastQuart.value(&ys).unwrap() - 1.2).abs() < 1e-6);
        assert!(ProjectionIndex::Kappa3Sq.value(&ys).unwrap() < 1e-20);
    }

    #[test]
    fn amari_invariances() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = gaussian_matrix(&mut rng, 3);
        assert!(amari_index(&a, &a).unwrap() < 1e-12);
        let pd = DMatrix::from_row_slice(3, 3, &[0.0, -2.0, 0.0, 0.0, 0.0, 0.5, 3.0, 0.0, 0.0]);
        assert!(amari_index(&(&pd * &a), &a).unwrap() < 1e-12);
        let b = gaussian_matrix(&mut rng, 3);
        let v = amari_index(&b, &a).unwrap();
        assert!(v > 0.0 && v <= 1.0);
        assert!(amari_index(&b, &DMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn parse_display_round_trip() {
        for idx in ProjectionIndex::ALL {
            assert_eq!(idx.to_string().parse::<ProjectionIndex>().unwrap(), idx);
        }
        assert_eq!(
            "kappa4".parse::<ProjectionIndex>().unwrap(),
            ProjectionIndex::Kappa4Sq
        );
        assert!("kappa_k:7".parse::<ProjectionIndex>().is_err());
        assert!("negentropy".parse::<ProjectionIndex>().is_err());
    }

    #[test]
    fn recovers_uniform_laplace() {
        let run = IcaRun {
            sources: srcs(&["unif:0,1", "laplace:1"]),
            n: 20_000,
            seed: 1,
            pursuit: PursuitConfig::default(),
        };
        let (res, _) = run_ica(&run).unwrap();
        assert!(res.amari.unwrap() < 0.05, "{res:?}");
        let v1 = res.v1_matrix();
        assert!((v1.transpose() * &v1 - DMatrix::identity(2, 2)).norm() < 1e-10);
        assert!(res.converged.iter().all(|c| *c));
    }

    #[test]
    fn json_round_trip() {
        let run = IcaRun {
            sources: srcs(&["unif:0,1", "exp:1"]),
            n: 2000,
            seed: 4,
            pursuit: PursuitConfig::default(),
        };
        let (res, _) = run_ica(&run).unwrap();
        let js = res.to_json().unwrap();
        assert!(js.contains("\"W\"") && js.contains("\"V1\"") && js.contains("\"amari\""));
        assert_eq!(IcaResult::from_json(&js).unwrap(), res);
    }

    #[test]
    fn csv_round_trip() {
        let sim = simulate_mixture(&srcs(&["norm", "exp:1"]), Mixing::Random, 50, 8).unwrap();
        let mut buf = Vec::new();
        sim.x.write_csv(&mut buf).unwrap();
        assert_eq!(DataMatrix::read_csv(buf.as_slice()).unwrap(), sim.x);
        assert!(DataMatrix::read_csv("1,2\n3\n".as_bytes()).is_err());
    }
}
