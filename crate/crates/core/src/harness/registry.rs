//! The static check registry and the verify suite.

use num_complex::Complex64;
use serde::Serialize;

use super::config::RunConfig;
use crate::chamber::{multiplicity_from, rho, ChamberPoint, HypergroupElement};
use crate::checks;
use crate::convolution::{convolve_mc, convolve_signed, Rank1Quadrature};
use crate::error::Result;
use crate::haar::{check_haar_rank1, Bump};
use crate::parallel::ExecPolicy;
use crate::sampling::{kappa, label_hash, mix_seed, stream_rng};
use crate::special::c_function;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    /// Failing it makes the run fail.
    Assertion,
    /// Exploratory; recorded, never fails a run.
    Report,
}

/// What a check measured; it passes when `value <= tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub value: f64,
    pub stderr: Option<f64>,
}

impl Measurement {
    fn exact(value: f64) -> Self {
        Measurement { value, stderr: None }
    }
}

type CheckFn = fn(&RunConfig, u64, ExecPolicy) -> Result<Option<Measurement>>;

pub struct CheckSpec {
    pub name: &'static str,
    pub grade: Grade,
    pub tol: f64,
    /// `None` from `run` means the check does not apply to this configuration.
    run: CheckFn,
}

pub static REGISTRY: &[CheckSpec] = &[
    CheckSpec { name: "associativity", grade: Grade::Assertion, tol: 3.0, run: associativity },
    CheckSpec { name: "branch_continuity", grade: Grade::Assertion, tol: 0.1, run: branch_continuity },
    CheckSpec { name: "c_function.at_rho", grade: Grade::Assertion, tol: 1e-12, run: c_at_rho },
    CheckSpec { name: "c_function.growth", grade: Grade::Report, tol: 0.5, run: c_growth },
    CheckSpec { name: "commutativity", grade: Grade::Assertion, tol: 3.0, run: commutativity },
    CheckSpec { name: "constant_character", grade: Grade::Assertion, tol: 3.0, run: constant_character },
    CheckSpec { name: "degenerate_continuity", grade: Grade::Assertion, tol: 3.0, run: degenerate_continuity },
    CheckSpec { name: "haar.conjugation", grade: Grade::Assertion, tol: 1e-6, run: haar_conjugation },
    CheckSpec { name: "involution", grade: Grade::Assertion, tol: 1e-10, run: involution },
    CheckSpec { name: "kappa.monte_carlo", grade: Grade::Assertion, tol: 3.0, run: kappa_monte_carlo },
    CheckSpec { name: "normalization.quadrature", grade: Grade::Assertion, tol: 1e-12, run: quadrature_mass },
    CheckSpec { name: "normalization.total_mass", grade: Grade::Assertion, tol: 0.0, run: total_mass },
    CheckSpec { name: "positivity", grade: Grade::Assertion, tol: 1e-12, run: positivity_inside },
    CheckSpec { name: "positivity.outside_range", grade: Grade::Report, tol: 1e-12, run: positivity_outside },
    CheckSpec { name: "product_formula.positive", grade: Grade::Assertion, tol: 1e-8, run: product_formula_positive },
    CheckSpec { name: "product_formula.rank1", grade: Grade::Assertion, tol: 1e-8, run: product_formula_rank1 },
    CheckSpec { name: "signed.total_variation", grade: Grade::Assertion, tol: 1e-12, run: signed_tv_inside },
    CheckSpec {
        name: "signed.total_variation.outside_range",
        grade: Grade::Report,
        tol: 1e-12,
        run: signed_tv_outside,
    },
    CheckSpec { name: "support_bound", grade: Grade::Assertion, tol: 0.0, run: support_bound },
];

pub fn is_known(name: &str) -> bool {
    REGISTRY.iter().any(|c| c.name == name)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub grade: Grade,
    pub value: f64,
    pub tol: f64,
    pub stderr: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub seed: u64,
    /// Sorted by check name.
    pub checks: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn failed_assertions(&self) -> Vec<&CheckRecord> {
        self.checks.iter().filter(|c| c.grade == Grade::Assertion && !c.pass).collect()
    }

    pub fn success(&self) -> bool {
        self.failed_assertions().is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }
}

/// Runs every applicable check; check `c` draws from `mix_seed(seed, hash(c))`.
pub fn run_verify(cfg: &RunConfig, policy: ExecPolicy) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    for spec in REGISTRY {
        let seed = mix_seed(cfg.seed, label_hash(spec.name));
        let Some(m) = (spec.run)(cfg, seed, policy)? else { continue };
        let tol = cfg.tolerances.get(spec.name).copied().unwrap_or(spec.tol);
        checks.push(CheckRecord {
            check: spec.name.to_string(),
            grade: spec.grade,
            value: m.value,
            tol,
            stderr: m.stderr,
            pass: m.value <= tol,
        });
    }
    checks.sort_by(|a, b| a.check.cmp(&b.check));
    Ok(VerifyReport { config: cfg.clone(), seed: cfg.seed, checks })
}

const S_COORDS: [f64; 8] = [1.0, 0.6, 0.3, 0.2, 0.15, 0.1, 0.05, 0.02];
const T_COORDS: [f64; 8] = [0.7, 0.45, 0.25, 0.12, 0.08, 0.04, 0.02, 0.01];
const R_COORDS: [f64; 8] = [0.4, 0.2, 0.1, 0.05, 0.04, 0.03, 0.02, 0.01];
const THETA1: f64 = 0.4;
const THETA2: f64 = -1.1;
const RANK1_POINTS: [f64; 3] = [0.3, 1.0, 2.0];

fn element(coords: &[f64], q: usize, theta: f64) -> HypergroupElement {
    HypergroupElement::new(ChamberPoint::new(coords[..q].to_vec()).expect("fixed points are sorted"), theta)
}

fn inside_positivity_range(cfg: &RunConfig) -> bool {
    cfg.l.abs() <= 1.0 / cfg.q as f64
}

fn rank1_rule(p: f64) -> Result<Rank1Quadrature> {
    if p == 1.0 {
        Rank1Quadrature::new(p, 1, 400)
    } else {
        Rank1Quadrature::new(p, 200, 200)
    }
}

fn product_formula_rank1(cfg: &RunConfig, _: u64, _: ExecPolicy) -> Result<Option<Measurement>> {
    if cfg.q != 1 {
        return Ok(None);
    }
    let rule = rank1_rule(cfg.p)?;
    let mut worst = 0.0f64;
    for &lambda in &cfg.lambda {
        for s in RANK1_POINTS {
            for t in RANK1_POINTS {
                let r = checks::product_formula_residual_rank1(&rule, cfg.p, cfg.l, lambda, (s, THETA1), (t, THETA2))?;
                worst = worst.max(r);
            }
        }
    }
    Ok(Some(Measurement::exact(worst)))
}

fn product_formula_positive(cfg: &RunConfig, _: u64, _: ExecPolicy) -> Result<Option<Measurement>> {
    if cfg.q != 1 {
        return Ok(None);
    }
    let rule = rank1_rule(cfg.p)?;
    let mut worst = 0.0f64;
    for &lambda in &cfg.lambda {
        for s in RANK1_POINTS {
            for t in RANK1_POINTS {
                worst = worst.max(checks::positive_product_formula_residual_rank1(&rule, cfg.p, cfg.l, lambda, s, t)?);
            }
        }
    }
    Ok(Some(Measurement::exact(worst)))
}

fn quadrature_mass(cfg: &RunConfig, _: u64, _: ExecPolicy) -> Result<Option<Measurement>> {
    if cfg.q != 1 {
        return Ok(None);
    }
    Ok(Some(Measurement::exact((rank1_rule(cfg.p)?.weight_sum() - 1.0).abs())))
}

fn total_mass(cfg: &RunConfig, seed: u64, policy: ExecPolicy) -> Result<Option<Measurement>> {
    let s = element(&S_COORDS, cfg.q, THETA1);
    let t = element(&T_COORDS, cfg.q, THETA2);
    let m = convolve_mc(&s, &t, cfg.p, cfg.n_samples, seed, policy)?;
    Ok(Some(Measurement::exact((m.total_mass() - 1.0).norm())))
}

fn constant_character(cfg: &RunConfig, seed: u64, policy: ExecPolicy) -> Result<Option<Measurement>> {
    let s = element(&S_COORDS, cfg.q, 0.0).t;
    let t = element(&T_COORDS, cfg.q, 0.0).t;
    let c = checks::check_constant_character(&s, &t, cfg.p, Complex64::new(cfg.l, 0.0), cfg.n_samples, seed, policy)?;
    Ok(Some(Measurement { value: c.z, stderr: Some(c.re.stderr) }))
}

fn support_bound(cfg: &RunConfig, seed: u64, policy: ExecPolicy) -> Result<Option<Measurement>> {
    let r = checks::check_support_bound(cfg.q, cfg.n_samples, seed, policy)?;
    Ok(Some(Measurement::exact(r.violations as f64)))
}

fn positivity(cfg: &RunConfig, seed: u64, policy: ExecPolicy) -> Result<Measurement> {
    let rows = checks::scan_positivity(cfg.p, cfg.q, &[cfg.l], cfg.n_samples, seed, policy)?;
    Ok(Measurement::exact(-rows[0].min))
}

fn positivity_inside(cfg: &RunConfig, seed: u64, policy: ExecPolicy) -> Result<Option<Measurement>> {
    inside_positivity_range(cfg).then(|| positivity(cfg, seed, policy)).transpose()
}

fn positivity_outside(cfg: &RunConfig, seed: u64, policy: ExecPolicy) -> Result<Option<Measurement>> {
    (!inside_positivity_range(cfg)).then(|| positivity(cfg, seed, policy)).transpose()
}

fn signed_tv(cfg: &RunConfig, seed: u64, policy: ExecPolicy) -> Result<Measurement> {
    let s = element(&S_COORDS, cfg.q, 0.0).t;
    let t = element(&T_COORDS, cfg.q, 0.0).t;
    let m = convolve_signed(&s, &t, cfg.p, cfg.l, cfg.n_samples, seed, policy)?;
    Ok(Measurement::exact(m.total_variation() - 1.0))
}

fn signed_tv_inside(cfg: &RunConfig, seed: u64, policy: ExecPolicy) -> Result<Option<Measurement>> {
    inside_positivity_range(cfg).then(|| signed_tv(cfg, seed, policy)).transpose()
}

fn signed_tv_outside(cfg: &RunConfig, seed: u64, policy: ExecPolicy) -> Result<Option<Measurement>> {
    (!inside_positivity_range(cfg)).then(|| signed_tv(cfg, seed, policy)).transpose()
}

fn involution(cfg: &RunConfig, seed: u64, _: ExecPolicy) -> Result<Option<Measurement>> {
    use rand::Rng;
    let mut rng = stream_rng(seed, 0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let coords = (0..cfg.q).map(|_| rng.random_range(0.0..3.0)).collect();
        let x = HypergroupElement::new(ChamberPoint::sorted(coords)?, rng.random_range(-10.0..10.0));
        worst = worst.max(checks::involution_defect(&x)?.distance());
    }
    Ok(Some(Measurement::exact(worst)))
}

fn commutativity(cfg: &RunConfig, seed: u64, policy: ExecPolicy) -> Result<Option<Measurement>> {
    let s = element(&S_COORDS, cfg.q, THETA1);
    let t = element(&T_COORDS, cfg.q, THETA2);
    Ok(Some(Measurement::exact(checks::check_commutativity(&s, &t, cfg.p, cfg.n_samples, seed, policy)?.max_z)))
}

fn associativity(cfg: &RunConfig, seed: u64, policy: ExecPolicy) -> Result<Option<Measurement>> {
    let r = element(&R_COORDS, cfg.q, 0.0);
    let s = element(&S_COORDS, cfg.q, THETA1);
    let t = element(&T_COORDS, cfg.q, THETA2);
    let c = checks::check_associativity(&r, &s, &t, cfg.p, cfg.n_samples, seed, policy)?;
    Ok(Some(Measurement::exact(c.max_z)))
}

fn degenerate_continuity(cfg: &RunConfig, seed: u64, policy: ExecPolicy) -> Result<Option<Measurement>> {
    let s = element(&S_COORDS, cfg.q, THETA1);
    let t = element(&T_COORDS, cfg.q, THETA2);
    let c = checks::check_degenerate_continuity(&s, &t, 1e-4, cfg.n_samples, seed, policy)?;
    Ok(Some(Measurement::exact(c.max_z)))
}

fn kappa_monte_carlo(cfg: &RunConfig, seed: u64, policy: ExecPolicy) -> Result<Option<Measurement>> {
    if cfg.p <= 2.0 * cfg.q as f64 - 1.0 {
        return Ok(None);
    }
    let e = checks::kappa_mc(cfg.p, cfg.q, cfg.n_samples, seed, policy)?;
    let z = e.z_against(kappa(cfg.p, cfg.q)?);
    Ok(Some(Measurement { value: z, stderr: Some(e.stderr) }))
}

fn c_at_rho(cfg: &RunConfig, _: u64, _: ExecPolicy) -> Result<Option<Measurement>> {
    let k = multiplicity_from(cfg.p, cfg.q, cfg.l)?;
    Ok(Some(Measurement::exact((c_function(&rho(&k), &k)? - 1.0).norm())))
}

/// Reported value: 0 when `|c^{-1}|` is nondecreasing along `p = l`, 1 otherwise.
fn c_growth(cfg: &RunConfig, _: u64, _: ExecPolicy) -> Result<Option<Measurement>> {
    let lambda: Vec<f64> = (0..cfg.q).map(|j| 0.5 / (j + 1) as f64).collect();
    let g = checks::probe_inverse_c_growth(&lambda, &[10.0, 20.0, 40.0, 80.0])?;
    Ok(Some(Measurement::exact(if g.monotone { 0.0 } else { 1.0 })))
}

fn haar_conjugation(cfg: &RunConfig, _: u64, _: ExecPolicy) -> Result<Option<Measurement>> {
    if cfg.q != 1 || cfg.l.abs() > 1.0 {
        return Ok(None);
    }
    let f = Bump { center: 1.0, half_width: 0.6 };
    let g = Bump { center: 1.5, half_width: 0.8 };
    let r = check_haar_rank1(cfg.p, cfg.l, &f, &g, 0.7, 200, 200)?;
    Ok(Some(Measurement::exact(r.positive.relative.max(r.signed.relative))))
}

fn branch_continuity(_: &RunConfig, seed: u64, policy: ExecPolicy) -> Result<Option<Measurement>> {
    Ok(Some(Measurement::exact(checks::check_branch_continuity(100, 1000, seed, policy)?)))
}
