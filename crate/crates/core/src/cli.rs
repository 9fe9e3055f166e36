//! Command-line surface: the measure table, GMM sweeps, transform curves,
//! ICA experiments, ordering checks and measure dumps. The `infodisp` binary
//! is a thin wrapper around [`main_with_args`].

use crate::dist::{make_density, parse_spec_list, Catalog, DensityRef, GmmSpec};
use crate::error::{Error, Result};
use crate::ica::{run_ica, IcaRun, ProjectionIndex, PursuitConfig};
use crate::majorization::{discrete_measures, ProbVector};
use crate::measures::{entropy_power, h_star, report};
use crate::quadrature::QuadratureConfig;
use crate::transforms::{check_ordering, f_colon_g, f_tilde, pdq, Relation};
use clap::{Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ORDER_FAILS: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

pub const TABLE_DISTRIBUTIONS: [&str; 5] = [
    "norm:0,1",
    "laplace:1",
    "lognorm:0,1",
    "unif:0,1",
    "gmm:0,4,1,2,0.4",
];
pub const TABLE_GRID: usize = 1000;

#[derive(Debug, Parser)]
#[command(
    name = "infodisp",
    version,
    about = "Information measures, density transformations, orderings and projection-pursuit ICA"
)]
pub struct Cli {
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Grid size for transforms, orderings and tabulated measures.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Relative quadrature tolerance, or the fixed-point tolerance for `ica`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// e^{2H} and [H*]^-2 of f, f* and f~ per distribution (CSV).
    Table {
        /// Distribution specs, e.g. `norm:0,1 laplace:1`.
        dists: Vec<String>,
    },
    /// GMM measures along one varying parameter (CSV).
    Sweep {
        #[arg(long, value_enum)]
        vary: Vary,
        #[arg(long)]
        start: f64,
        #[arg(long)]
        stop: f64,
        #[arg(long)]
        step: f64,
        #[arg(long, default_value_t = 0.0)]
        mu1: f64,
        #[arg(long, default_value_t = 2.0)]
        mu2: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma1: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma2: f64,
        #[arg(long, default_value_t = 0.5)]
        w: f64,
        #[arg(
            long,
            value_enum,
            value_delimiter = ',',
            default_value = "f,fstar,ftilde"
        )]
        repr: Vec<Repr>,
        #[arg(
            long,
            value_enum,
            value_delimiter = ',',
            default_value = "epow,hstar-inv-sq"
        )]
        measures: Vec<SweepMeasure>,
    },
    /// (u, value) curve of f*, f~ or f:g (CSV).
    Transform {
        dist: String,
        #[arg(long, value_enum)]
        which: Which,
        /// Reference distribution for `fcolong`.
        #[arg(long)]
        g: Option<String>,
    },
    /// Simulated mixture, whitening, fixed-point pursuit and Amari score (JSON).
    Ica {
        /// Comma-separated source specs, e.g. `unif:0,1,laplace:1`.
        #[arg(long)]
        sources: String,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value = "kappa4_sq")]
        index: String,
        /// Components to extract; all when absent.
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
    },
    /// Partial-ordering check of `right` against `left`; exit 3 when it fails.
    Order {
        left: String,
        right: String,
        #[arg(long)]
        check: String,
    },
    /// MeasureReport of one distribution, or discrete measures with `--pvec` (JSON).
    Measures {
        dist: Option<String>,
        /// Probability vector such as `0.5,0.25,0.25`.
        #[arg(long)]
        pvec: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Vary {
    Mu2,
    Sigma2,
    W,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Repr {
    F,
    Fstar,
    Ftilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMeasure {
    Epow,
    HstarInvSq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Fstar,
    Ftilde,
    Fcolong,
}

impl Repr {
    fn name(self) -> &'static str {
        match self {
            Repr::F => "f",
            Repr::Fstar => "fstar",
            Repr::Ftilde => "ftilde",
        }
    }
}

impl SweepMeasure {
    fn name(self) -> &'static str {
        match self {
            SweepMeasure::Epow => "epow",
            SweepMeasure::HstarInvSq => "hstar_inv_sq",
        }
    }
}

/// `e^{2H}` and `[H*]^{-2}` of one representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair {
    pub epow: f64,
    pub hstar_inv_sq: f64,
}

/// Measures of `f` itself and of its `f*` and `f~` grids.
pub fn representations(
    d: &dyn crate::dist::Density,
    grid: usize,
    cfg: &QuadratureConfig,
) -> Result<[Pair; 3]> {
    let hs = h_star(d, cfg)?;
    let f = Pair {
        epow: entropy_power(d, cfg)?,
        hstar_inv_sq: 1.0 / (hs * hs),
    };
    let on_grid = |g: crate::dist::GridDensity| Pair {
        epow: g.entropy_power(),
        hstar_inv_sq: 1.0 / g.h_star().powi(2),
    };
    Ok([f, on_grid(pdq(d, grid, cfg)?), on_grid(f_tilde(d, grid)?)])
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub label: String,
    /// `f`, `f*`, `f~`
    pub values: [Pair; 3],
}

pub fn table(specs: &[Catalog], grid: usize, cfg: &QuadratureConfig) -> Result<Vec<TableRow>> {
    specs
        .iter()
        .map(|c| {
            let d = c.into_ref()?;
            Ok(TableRow {
                label: c.to_string(),
                values: representations(d.as_ref(), grid, cfg)?,
            })
        })
        .collect()
}

/// Varying-parameter GMM family.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub vary: Vary,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub base: GmmSpec,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0
            && self.start < self.stop
            && self.start.is_finite()
            && self.stop.is_finite())
        {
            return Err(Error::InvalidParameter(format!(
                "sweep range needs start < stop and step > 0, got {}..{} by {}",
                self.start, self.stop, self.step
            )));
        }
        if self.vary == Vary::W && (self.start < 0.0 || self.stop > 1.0) {
            return Err(Error::InvalidParameter(
                "weight sweep must stay inside [0, 1]".into(),
            ));
        }
        if self.vary == Vary::Sigma2 && self.start <= 0.0 {
            return Err(Error::InvalidParameter(
                "sigma2 sweep must stay positive".into(),
            ));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let k = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=k).map(|i| self.start + i as f64 * self.step).collect()
    }

    pub fn at(&self, t: f64) -> GmmSpec {
        let mut g = self.base;
        match self.vary {
            Vary::Mu2 => g.mu2 = t,
            Vary::Sigma2 => g.sigma2 = t,
            Vary::W => g.w = t,
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub values: [Pair; 3],
}

pub fn sweep(spec: &SweepSpec, grid: usize, cfg: &QuadratureConfig) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.values()
        .into_iter()
        .map(|t| {
            let d = Catalog::Gmm(spec.at(t)).into_ref()?;
            Ok(SweepRow {
                t,
                values: representations(d.as_ref(), grid, cfg)?,
            })
        })
        .collect()
}

/// Twelve significant digits in plain decimal notation.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-6..=15).contains(&mag) {
        return format!("{x:.11e}");
    }
    format!("{:.*}", (11 - mag).max(0) as usize, x)
}

fn dec3(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.3}")
    } else {
        sig12(x)
    }
}

fn write_table<W: Write>(rows: &[TableRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let names = [
        "e2H_f",
        "e2H_fstar",
        "e2H_ftilde",
        "HstarInv2_f",
        "HstarInv2_fstar",
        "HstarInv2_ftilde",
    ];
    let mut header = vec!["dist".to_string()];
    header.extend(names.iter().map(|s| s.to_string()));
    header.extend(names.iter().map(|s| format!("{s}_full")));
    wr.write_record(&header)?;
    for r in rows {
        let vals: Vec<f64> = r
            .values
            .iter()
            .map(|p| p.epow)
            .chain(r.values.iter().map(|p| p.hstar_inv_sq))
            .collect();
        let mut rec = vec![r.label.clone()];
        rec.extend(vals.iter().map(|v| dec3(*v)));
        rec.extend(vals.iter().map(|v| sig12(*v)));
        wr.write_record(&rec)?;
    }
    wr.flush()?;
    Ok(())
}

fn write_sweep<W: Write>(
    vary: Vary,
    rows: &[SweepRow],
    repr: &[Repr],
    measures: &[SweepMeasure],
    w: W,
) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let var = match vary {
        Vary::Mu2 => "mu2",
        Vary::Sigma2 => "sigma2",
        Vary::W => "w",
    };
    let mut header = vec![var.to_string()];
    for m in measures {
        for r in repr {
            header.push(format!("{}_{}", m.name(), r.name()));
        }
    }
    wr.write_record(&header)?;
    for row in rows {
        let mut rec = vec![sig12(row.t)];
        for m in measures {
            for r in repr {
                let p = row.values[*r as usize];
                rec.push(sig12(match m {
                    SweepMeasure::Epow => p.epow,
                    SweepMeasure::HstarInvSq => p.hstar_inv_sq,
                }));
            }
        }
        wr.write_record(&rec)?;
    }
    wr.flush()?;
    Ok(())
}

fn quadrature_config(tol: Option<f64>) -> Result<QuadratureConfig> {
    let cfg = match tol {
        Some(t) => QuadratureConfig::default().with_rel_tol(t),
        None => QuadratureConfig::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn density_list(items: &[String]) -> Result<Vec<Catalog>> {
    parse_spec_list(&items.join(","))
}

/// Runs a parsed command, writing its primary output to `out`. Returns the
/// exit code for completed runs.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let cfg = quadrature_config(if matches!(cli.command, Command::Ica { .. }) {
        None
    } else {
        cli.tol
    })?;
    match cli.command {
        Command::Table { dists } => {
            let specs = if dists.is_empty() {
                TABLE_DISTRIBUTIONS
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<Vec<Catalog>>>()?
            } else {
                density_list(&dists)?
            };
            write_table(&table(&specs, cli.grid.unwrap_or(TABLE_GRID), &cfg)?, out)?;
        }
        Command::Sweep {
            vary,
            start,
            stop,
            step,
            mu1,
            mu2,
            sigma1,
            sigma2,
            w,
            repr,
            measures,
        } => {
            let spec = SweepSpec {
                vary,
                start,
                stop,
                step,
                base: GmmSpec {
                    mu1,
                    mu2,
                    sigma1,
                    sigma2,
                    w,
                },
            };
            spec.validate()?;
            let rows = sweep(&spec, cli.grid.unwrap_or(TABLE_GRID), &cfg)?;
            write_sweep(vary, &rows, &repr, &measures, out)?;
        }
        Command::Transform { dist, which, g } => {
            let grid = cli.grid.unwrap_or(TABLE_GRID);
            if grid < 128 {
                return Err(Error::InvalidParameter(format!(
                    "transform grid needs at least 128 nodes, got {grid}"
                )));
            }
            let d = make_density(&dist)?;
            let curve = match which {
                Which::Fstar => pdq(d.as_ref(), grid, &cfg)?,
                Which::Ftilde => f_tilde(d.as_ref(), grid)?,
                Which::Fcolong => {
                    let g = g.ok_or_else(|| Error::InvalidParameter("fcolong needs --g".into()))?;
                    f_colon_g(d.as_ref(), make_density(&g)?.as_ref(), grid)?
                }
            };
            curve.write_csv(out, "u")?;
        }
        Command::Ica {
            sources,
            n,
            index,
            q,
            max_iter,
        } => {
            let sources = parse_spec_list(&sources)?
                .into_iter()
                .map(Catalog::into_ref)
                .collect::<Result<Vec<DensityRef>>>()?;
            let pursuit = PursuitConfig {
                index: index.parse::<ProjectionIndex>()?,
                q,
                seed: cli.seed,
                max_iter,
                tol: cli.tol.unwrap_or(PursuitConfig::default().tol),
            };
            let (res, _) = run_ica(&IcaRun {
                sources,
                n,
                seed: cli.seed,
                pursuit,
            })?;
            writeln!(out, "{}", res.to_json()?)?;
        }
        Command::Order { left, right, check } => {
            let relation: Relation = check.parse()?;
            let verdict = check_ordering(
                make_density(&left)?,
                make_density(&right)?,
                relation,
                cli.grid.unwrap_or(1001),
                &cfg,
            )?;
            writeln!(out, "{verdict}")?;
            return Ok(if verdict.holds {
                EXIT_OK
            } else {
                EXIT_ORDER_FAILS
            });
        }
        Command::Measures { dist, pvec } => {
            let js = match (dist, pvec) {
                (None, Some(p)) => {
                    serde_json::to_string_pretty(&discrete_measures(&p.parse::<ProbVector>()?))
                }
                (Some(d), None) => {
                    serde_json::to_string_pretty(&report(make_density(&d)?.as_ref(), &cfg)?)
                }
                _ => {
                    return Err(Error::InvalidParameter(
                        "give exactly one of a distribution or --pvec".into(),
                    ))
                }
            }
            .map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out, "{js}")?;
        }
    }
    Ok(EXIT_OK)
}

/// Exit code for a failed run: usage errors 2, numeric failures 4.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidParameter(_) | Error::DimensionMismatch(_) => {
            EXIT_USAGE
        }
        _ => EXIT_NUMERIC,
    }
}

/// Parses `args`, runs the command and returns the process exit code.
/// Output goes to `--out` when given, otherwise to `stdout`.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return code;
        }
    };
    let result = match cli.out.clone() {
        Some(path) => File::create(&path).map_err(Error::from).and_then(|f| {
            let mut w = BufWriter::new(f);
            let code = run(cli, &mut w)?;
            w.flush()?;
            Ok(code)
        }),
        None => run(cli, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    main_with_args(
        std::env::args_os(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    )
}
