//! Suite orchestration behind the command-line front end.

pub mod config;
pub mod registry;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

pub use config::{parse_complex, ConfigError, Overrides, RunConfig, Suite};
pub use registry::{run_verify, CheckRecord, Grade, VerifyReport, REGISTRY};

use crate::chamber::{multiplicity_from, rho, ChamberPoint, HypergroupElement};
use crate::checks::{scan_positivity, PositivityRow};
use crate::convolution::random_walk;
use crate::error::Error;
use crate::haar::{haar_density, HaarVariant};
use crate::parallel::ExecPolicy;
use crate::sampling::kappa;
use crate::special::c_function;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

fn io_at(path: &Path) -> impl FnOnce(io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.to_path_buf(), source }
}

/// `l` values for positivity scans.
pub fn default_l_grid() -> Vec<f64> {
    (-8..=8).map(|k| k as f64 * 0.25).collect()
}

pub fn positivity_table(cfg: &RunConfig, policy: ExecPolicy) -> Result<Vec<PositivityRow>, HarnessError> {
    let seed = crate::sampling::mix_seed(cfg.seed, crate::sampling::label_hash("scan"));
    Ok(scan_positivity(cfg.p, cfg.q, &default_l_grid(), cfg.n_samples, seed, policy)?)
}

pub fn write_positivity_csv(rows: &[PositivityRow], n: usize, mut out: impl Write) -> io::Result<()> {
    writeln!(out, "l,min_weight,negatives,samples")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.l, r.min, r.negatives, n)?;
    }
    Ok(())
}

/// Step element of the walk suite: `t_j = 0.5 / j`, `θ = 0`.
pub fn walk_step(q: usize) -> HypergroupElement {
    let coords = (1..=q).map(|j| 0.5 / j as f64).collect();
    HypergroupElement::new(ChamberPoint::new(coords).expect("decreasing coordinates"), 0.0)
}

/// A walk of `n_samples` steps from the identity; CSV `step,t_1..t_q,theta`.
pub fn write_walk_csv(cfg: &RunConfig, mut out: impl Write) -> Result<(), HarnessError> {
    let path = random_walk(&HypergroupElement::identity(cfg.q), cfg.p, cfg.n_samples, &walk_step(cfg.q), cfg.seed)?;
    let mut write = || -> io::Result<()> {
        let head: Vec<String> = (1..=cfg.q).map(|j| format!("t_{j}")).collect();
        writeln!(out, "step,{},theta", head.join(","))?;
        for (k, x) in path.iter().enumerate() {
            let t: Vec<String> = x.t.coords().iter().map(f64::to_string).collect();
            writeln!(out, "{k},{},{}", t.join(","), x.theta)?;
        }
        Ok(())
    };
    write().map_err(io_at(Path::new("<walk>")))
}

fn write_kappa_csv(mut out: impl Write) -> Result<(), HarnessError> {
    let mut text = String::from("q,p,kappa\n");
    for q in 1..=3usize {
        let edge = 2.0 * q as f64 - 1.0;
        for dp in [0.5, 1.0, 2.0, 2.5, 4.0] {
            text += &format!("{q},{},{}\n", edge + dp, kappa(edge + dp, q)?);
        }
    }
    out.write_all(text.as_bytes()).map_err(io_at(Path::new("kappa.csv")))
}

/// `c(x·ρ)` for a few scalings `x`; the row `x = 1` is 1.
fn write_c_csv(cfg: &RunConfig, mut out: impl Write) -> Result<(), HarnessError> {
    let k = multiplicity_from(cfg.p, cfg.q, cfg.l)?;
    let rho = rho(&k);
    let head: Vec<String> = (1..=cfg.q).map(|j| format!("lambda_{j}")).collect();
    let mut text = format!("scale,{},c_re,c_im\n", head.join(","));
    for x in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let lambda: Vec<Complex64> = rho.iter().map(|r| r * x).collect();
        let c = c_function(&lambda, &k)?;
        let cols: Vec<String> = lambda.iter().map(|z| z.re.to_string()).collect();
        text += &format!("{x},{},{},{}\n", cols.join(","), c.re, c.im);
    }
    out.write_all(text.as_bytes()).map_err(io_at(Path::new("c_function.csv")))
}

/// Densities on sorted tuples from a fixed grid, ties included.
fn write_haar_csv(cfg: &RunConfig, mut out: impl Write) -> Result<(), HarnessError> {
    let grid = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5];
    let mut tuples: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..cfg.q {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                let cap = t.last().copied().unwrap_or(f64::INFINITY);
                grid.iter().rev().filter(move |&&g| g <= cap).map(move |&g| [t.clone(), vec![g]].concat())
            })
            .collect();
    }
    let head: Vec<String> = (1..=cfg.q).map(|j| format!("t_{j}")).collect();
    let mut text = format!("{},full,chamber\n", head.join(","));
    for t in tuples {
        let pt = ChamberPoint::new(t)?;
        let full = haar_density(cfg.p, HaarVariant::Full, &pt);
        let chamber = haar_density(cfg.p, HaarVariant::Chamber(cfg.l), &pt);
        let cols: Vec<String> = pt.coords().iter().map(f64::to_string).collect();
        text += &format!("{},{full},{chamber}\n", cols.join(","));
    }
    out.write_all(text.as_bytes()).map_err(io_at(Path::new("haar.csv")))
}

/// Writes `kappa.csv`, `c_function.csv`, `haar.csv` and `positivity.csv`
/// into `dir`.
pub fn run_tables(cfg: &RunConfig, dir: &Path, policy: ExecPolicy) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir).map_err(io_at(dir))?;
    let open = |name: &str| -> Result<(PathBuf, io::BufWriter<fs::File>), HarnessError> {
        let path = dir.join(name);
        let file = fs::File::create(&path).map_err(io_at(&path))?;
        Ok((path, io::BufWriter::new(file)))
    };
    let mut written = Vec::new();
    let (path, out) = open("kappa.csv")?;
    write_kappa_csv(out)?;
    written.push(path);
    let (path, out) = open("c_function.csv")?;
    write_c_csv(cfg, out)?;
    written.push(path);
    let (path, out) = open("haar.csv")?;
    write_haar_csv(cfg, out)?;
    written.push(path);
    let (path, out) = open("positivity.csv")?;
    let rows = positivity_table(cfg, policy)?;
    write_positivity_csv(&rows, cfg.n_samples, out).map_err(io_at(&path))?;
    written.push(path);
    Ok(written)
}
