//! Verification functionals.
//!
//! Each function measures one structural property and returns the raw
//! numbers; grading against tolerances happens in the harness.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::chamber::{check_dimension, check_rank, multiplicity_from, rho, ChamberPoint, HypergroupElement};
use crate::convolution::{Convolver, Rank1Quadrature};
use crate::error::{Error, Result};
use crate::kernel::{complex_power, real_power, Kernel};
use crate::linalg::CMat;
use crate::parallel::{fold_n, ExecPolicy};
use crate::sampling::{
    complex_normal, defect_determinant, label_hash, mix_seed, sample_su, stream_rng, BallLaw, SampleRng,
};
use crate::special::gamma::ln_gamma_real;
use crate::special::{c_function, inverse_c_growth, jacobi_phi, psi_rank1, JacobiParams};
use crate::stats::{one_sample_z, two_sample_z, Running};

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    /// `|value - target| / stderr`, zero when the two agree to rounding (a
    /// zero-variance estimator is then exact rather than infinitely wrong).
    pub fn z_against(&self, target: f64) -> f64 {
        let diff = (self.value - target).abs();
        if diff <= 1e-12 * target.abs() {
            0.0
        } else {
            diff / self.stderr
        }
    }
}

impl From<Running> for Estimate {
    fn from(r: Running) -> Self {
        Estimate { value: r.mean, stderr: r.stderr() }
    }
}

/// `|ψ(s,θ₁)ψ(t,θ₂) - ∫ψ d(δ_(s,θ₁) * δ_(t,θ₂))|` at rank one, with
/// `ψ = e^{ilθ} cosh^l · φ_λ^{(p-1,l)}`.
pub fn product_formula_residual_rank1(
    rule: &Rank1Quadrature,
    p: f64,
    l: f64,
    lambda: Complex64,
    s: (f64, f64),
    t: (f64, f64),
) -> Result<f64> {
    let params = JacobiParams::from_rank_one(p, l)?;
    let lhs = psi_rank1(lambda, l, p, s.0, s.1)? * psi_rank1(lambda, l, p, t.0, t.1)?;
    let radial = rule.integrate_character(s.0, t.0, l, |d| Ok(jacobi_phi(lambda, params, d)? * d.cosh().powf(l)))?;
    let rhs = radial * Complex64::from_polar(1.0, l * (s.1 + t.1));
    Ok((lhs - rhs).norm())
}

/// `|φ(s)φ(t) - ∫φ d(δ_s *_{p,l} δ_t)|` for the positive chamber convolution
/// at rank one, whose weight is `Re(h^l) / (cosh s cosh t)^l`.
pub fn positive_product_formula_residual_rank1(
    rule: &Rank1Quadrature,
    p: f64,
    l: f64,
    lambda: Complex64,
    s: f64,
    t: f64,
) -> Result<f64> {
    let params = JacobiParams::from_rank_one(p, l)?;
    let lhs = jacobi_phi(lambda, params, s)? * jacobi_phi(lambda, params, t)?;
    let scale = (s.cosh() * t.cosh()).powf(-l);
    let rhs = rule.integrate_character(s, t, l, |d| Ok(jacobi_phi(lambda, params, d)? * d.cosh().powf(l)))? * scale;
    Ok((lhs - rhs).norm())
}

/// Monte Carlo mean of `h^l / ∏(cosh s_j cosh t_j)^l`, which should be 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharacterCheck {
    pub re: Estimate,
    pub im: Estimate,
    /// `max(|re - 1| / se_re, |im| / se_im)`.
    pub z: f64,
}

pub fn check_constant_character(
    s: &ChamberPoint,
    t: &ChamberPoint,
    p: f64,
    l: Complex64,
    n: usize,
    seed: u64,
    policy: ExecPolicy,
) -> Result<CharacterCheck> {
    let conv = Convolver::chamber(s, t, p)?;
    let log_target: f64 = s.coords().iter().chain(t.coords()).map(|x| x.cosh().ln()).sum();
    let inv_target = (-l * log_target).exp();
    let (re, im) = fold_n(
        n,
        seed,
        policy,
        || (Running::default(), Running::default()),
        |acc, rng| {
            let (abs_h, arg) = conv.draw_h(rng)?;
            let x = complex_power(abs_h, arg, l) * inv_target;
            acc.0.push(x.re);
            acc.1.push(x.im);
            Ok(())
        },
        |a, b| (a.0.merge(b.0), a.1.merge(b.1)),
    )?;
    let z = one_sample_z(&re, 1.0).max(one_sample_z(&im, 0.0));
    Ok(CharacterCheck { re: re.into(), im: im.into(), z })
}

fn random_chamber(q: usize, max: f64, rng: &mut impl Rng) -> ChamberPoint {
    let coords = (0..q).map(|_| rng.random_range(0.0..max)).collect();
    ChamberPoint::sorted(coords).expect("finite nonnegative coordinates")
}

/// `p = 2q - 1` with probability 1/4, otherwise uniform on `(2q - 1, 2q + 4)`.
fn random_dimension(q: usize, rng: &mut impl Rng) -> f64 {
    let edge = 2.0 * q as f64 - 1.0;
    if rng.random_bool(0.25) {
        edge
    } else {
        edge + rng.random_range(1e-3..5.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportReport {
    pub samples: usize,
    pub violations: usize,
    /// Largest `σ_max(M) / cosh(s_1 + t_1) - 1`.
    pub max_excess: f64,
}

/// `‖d‖_∞ ≤ s_1 + t_1` over random `(s, t, p, v, w)`, compared as
/// `σ_max ≤ cosh(s_1 + t_1)` to avoid the `arcosh` cancellation near 1.
pub fn check_support_bound(q: usize, n: usize, seed: u64, policy: ExecPolicy) -> Result<SupportReport> {
    check_rank(q)?;
    const SLACK: f64 = 1e-12;
    let (violations, max_excess) = fold_n(
        n,
        seed,
        policy,
        || (0usize, f64::NEG_INFINITY),
        |acc, rng| {
            let s = random_chamber(q, 4.0, rng);
            let t = random_chamber(q, 4.0, rng);
            let law = BallLaw::for_dimension(random_dimension(q, rng), q)?;
            let v = sample_su(q, rng);
            let w = law.sample(q, rng);
            let sigma = Kernel::new(&t, &s)?.matrix(&v, &w).singular_values()[0];
            let excess = sigma / (s.max_coord() + t.max_coord()).cosh() - 1.0;
            acc.0 += usize::from(excess > SLACK);
            acc.1 = acc.1.max(excess);
            Ok(())
        },
        |a, b| (a.0 + b.0, a.1.max(b.1)),
    )?;
    Ok(SupportReport { samples: n, violations, max_excess })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityRow {
    pub l: f64,
    pub min: f64,
    pub negatives: usize,
}

/// Minimum of `Re h^l` per `l` over random `(s, t, v, w)` at fixed `p`; one
/// kernel draw is shared by all `l`.
pub fn scan_positivity(
    p: f64,
    q: usize,
    l_grid: &[f64],
    n: usize,
    seed: u64,
    policy: ExecPolicy,
) -> Result<Vec<PositivityRow>> {
    check_dimension(p, q)?;
    let law = BallLaw::for_dimension(p, q)?;
    let k = l_grid.len();
    let (mins, negs) = fold_n(
        n,
        seed,
        policy,
        || (vec![f64::INFINITY; k], vec![0usize; k]),
        |acc, rng| {
            let s = random_chamber(q, 6.0, rng);
            let t = random_chamber(q, 6.0, rng);
            let v = sample_su(q, rng);
            let w = law.sample(q, rng);
            let (abs_h, arg) = Kernel::new(&t, &s)?.h_parts(&v, &w)?;
            // normalise by the largest possible |h| so high powers stay finite
            let log_bound: f64 = s.coords().iter().zip(t.coords()).map(|(a, b)| (a + b).cosh().ln()).sum();
            let scaled = (abs_h.ln() - log_bound).exp();
            for (j, &l) in l_grid.iter().enumerate() {
                let x = real_power(scaled, arg, l);
                acc.0[j] = acc.0[j].min(x);
                acc.1[j] += usize::from(x < 0.0);
            }
            Ok(())
        },
        |mut a, b| {
            for j in 0..k {
                a.0[j] = a.0[j].min(b.0[j]);
                a.1[j] += b.1[j];
            }
            a
        },
    )?;
    Ok(l_grid.iter().enumerate().map(|(j, &l)| PositivityRow { l, min: mins[j], negatives: negs[j] }).collect())
}

/// `δ_(t,θ) * δ_(t,-θ)` evaluated at `(v, w) = (I, -I)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvolutionDefect {
    /// `max_j cosh d_j - 1`, i.e. `σ_max(M) - 1`.
    pub cosh_gap: f64,
    /// `‖d‖_∞`; amplifies rounding in `M` to roughly its square root.
    pub d_max: f64,
    pub theta: f64,
}

impl InvolutionDefect {
    /// Distance from the identity in `(cosh d - 1, θ)`.
    pub fn distance(&self) -> f64 {
        self.cosh_gap.abs().max(self.theta.abs())
    }
}

pub fn involution_defect(x: &HypergroupElement) -> Result<InvolutionDefect> {
    let q = x.rank();
    let kernel = Kernel::new(&x.t, &x.t)?;
    let minus_i = CMat::identity(q).scale(Complex64::new(-1.0, 0.0));
    let m = kernel.matrix(&CMat::identity(q), &minus_i);
    let d = kernel.d(&CMat::identity(q), &minus_i)?;
    let theta = x.theta + x.involution().theta + kernel.im_log_h(&CMat::identity(q), &minus_i)?;
    Ok(InvolutionDefect { cosh_gap: m.singular_values()[0] - 1.0, d_max: d.max_coord(), theta })
}

/// First and second moments of every chamber coordinate and of the angle.
fn push_features(acc: &mut [Running], d: &ChamberPoint, theta: f64) {
    let q = d.rank();
    for (j, &x) in d.coords().iter().enumerate() {
        acc[j].push(x);
        acc[q + j].push(x * x);
    }
    acc[2 * q].push(theta);
    acc[2 * q + 1].push(theta * theta);
}

fn feature_means<F>(q: usize, n: usize, seed: u64, policy: ExecPolicy, draw: F) -> Result<Vec<Running>>
where
    F: Fn(&mut SampleRng) -> Result<(ChamberPoint, f64)> + Sync,
{
    fold_n(
        n,
        seed,
        policy,
        || vec![Running::default(); 2 * q + 2],
        |acc, rng| {
            let (d, theta) = draw(rng)?;
            push_features(acc, &d, theta);
            Ok(())
        },
        |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
    )
}

/// Standardized differences between two samples, feature by feature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentComparison {
    pub z: Vec<f64>,
    pub max_z: f64,
}

impl MomentComparison {
    fn new(a: &[Running], b: &[Running]) -> Self {
        let z: Vec<f64> = a.iter().zip(b).map(|(x, y)| two_sample_z(x, y)).collect();
        let max_z = z.iter().copied().fold(0.0, f64::max);
        MomentComparison { z, max_z }
    }
}

fn single_draw(conv: &Convolver, rng: &mut SampleRng) -> Result<(ChamberPoint, f64)> {
    let d = conv.draw(rng)?;
    Ok((d.d, d.theta))
}

/// `δ_s * δ_t` against `δ_t * δ_s`, independent samples of size `n` each.
pub fn check_commutativity(
    s: &HypergroupElement,
    t: &HypergroupElement,
    p: f64,
    n: usize,
    seed: u64,
    policy: ExecPolicy,
) -> Result<MomentComparison> {
    let st = Convolver::new(s, t, p)?;
    let ts = Convolver::new(t, s, p)?;
    let q = s.rank();
    let a = feature_means(q, n, mix_seed(seed, label_hash("st")), policy, |rng| single_draw(&st, rng))?;
    let b = feature_means(q, n, mix_seed(seed, label_hash("ts")), policy, |rng| single_draw(&ts, rng))?;
    Ok(MomentComparison::new(&a, &b))
}

/// `(δ_r * δ_s) * δ_t` against `δ_r * (δ_s * δ_t)`. Each outer draw convolves
/// a fresh inner draw, so both samples are i.i.d. from the composed laws.
pub fn check_associativity(
    r: &HypergroupElement,
    s: &HypergroupElement,
    t: &HypergroupElement,
    p: f64,
    n: usize,
    seed: u64,
    policy: ExecPolicy,
) -> Result<MomentComparison> {
    let rs = Convolver::new(r, s, p)?;
    let st = Convolver::new(s, t, p)?;
    let q = r.rank();
    let left = feature_means(q, n, mix_seed(seed, label_hash("(rs)t")), policy, |rng| {
        let x = rs.draw(rng)?;
        single_draw(&Convolver::new(&HypergroupElement::new(x.d, x.theta), t, p)?, rng)
    })?;
    let right = feature_means(q, n, mix_seed(seed, label_hash("r(st)")), policy, |rng| {
        let x = st.draw(rng)?;
        single_draw(&Convolver::new(r, &HypergroupElement::new(x.d, x.theta), p)?, rng)
    })?;
    Ok(MomentComparison::new(&left, &right))
}

/// `δ_s * δ_t` at `p = 2q - 1` (degenerate sampler) against `p = 2q - 1 + eps`.
pub fn check_degenerate_continuity(
    s: &HypergroupElement,
    t: &HypergroupElement,
    eps: f64,
    n: usize,
    seed: u64,
    policy: ExecPolicy,
) -> Result<MomentComparison> {
    let q = s.rank();
    let edge = 2.0 * q as f64 - 1.0;
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("continuity offset must be positive, got {eps}")));
    }
    let at = Convolver::new(s, t, edge)?;
    let above = Convolver::new(s, t, edge + eps)?;
    let a = feature_means(q, n, mix_seed(seed, label_hash("edge")), policy, |rng| single_draw(&at, rng))?;
    let b = feature_means(q, n, mix_seed(seed, label_hash("above")), policy, |rng| single_draw(&above, rng))?;
    Ok(MomentComparison::new(&a, &b))
}

/// Monte Carlo `κ_p = ∫_{B_q} Δ(I - w*w)^{p-2q} dw`.
///
/// Draws `w` uniformly from the Frobenius ball of radius `√q` in `ℂ^{q×q}`,
/// which contains the matrix ball, and averages `vol · 1_{‖w‖ ≤ 1} Δ^{p-2q}`.
pub fn kappa_mc(p: f64, q: usize, n: usize, seed: u64, policy: ExecPolicy) -> Result<Estimate> {
    check_rank(q)?;
    if !(p > 2.0 * q as f64 - 1.0) {
        return Err(Error::DimensionNotAboveBoundary { p, q });
    }
    let qq = (q * q) as f64;
    let qf = q as f64;
    let ln_vol = qq * std::f64::consts::PI.ln() + qq * qf.ln() - ln_gamma_real(qq + 1.0);
    let vol = ln_vol.exp();
    let r = fold_n(
        n,
        seed,
        policy,
        Running::default,
        |acc, rng| {
            let g = CMat::from_fn(q, |_, _| complex_normal(rng));
            let radius = qf.sqrt() * rng.random::<f64>().powf(1.0 / (2.0 * qq));
            let w = g.scale(Complex64::new(radius / g.frobenius_norm(), 0.0));
            let x =
                if w.spectral_norm() <= 1.0 { vol * defect_determinant(&w).max(0.0).powf(p - 2.0 * qf) } else { 0.0 };
            acc.push(x);
            Ok(())
        },
        Running::merge,
    )?;
    Ok(r.into())
}

/// Largest step of `λ ↦ Im ln h` along random segments in `(t, s, v, w)`.
///
/// `t`, `s` and `w` move on straight lines, `v(λ) = v₀ exp(λH)` for a random
/// traceless anti-Hermitian `H`; `q` cycles through `1..=3`.
pub fn check_branch_continuity(segments: usize, steps: usize, seed: u64, policy: ExecPolicy) -> Result<f64> {
    if steps == 0 {
        return Err(Error::InvalidParameter("branch continuity needs at least one step".into()));
    }
    let per_segment = crate::parallel::map_chunks(segments, seed, policy, |range, rng| {
        let mut worst = 0.0f64;
        for i in range {
            worst = worst.max(segment_max_jump(i % 3 + 1, steps, rng)?);
        }
        Ok(worst)
    })?;
    Ok(per_segment.into_iter().fold(0.0, f64::max))
}

fn segment_max_jump(q: usize, steps: usize, rng: &mut SampleRng) -> Result<f64> {
    let coords = |rng: &mut SampleRng| -> Vec<f64> {
        let mut x: Vec<f64> = (0..q).map(|_| rng.random_range(0.0..2.0)).collect();
        x.sort_by(|a, b| b.total_cmp(a));
        x
    };
    let (t0, t1, s0, s1) = (coords(rng), coords(rng), coords(rng), coords(rng));
    let law = BallLaw::for_dimension(2.0 * q as f64 + rng.random_range(0.0..2.0), q)?;
    let (w0, w1) = (law.sample(q, rng), law.sample(q, rng));
    let v0 = sample_su(q, rng);
    let mut h = CMat::from_fn(q, |_, _| complex_normal(rng));
    h = h.sub(&h.adjoint()).scale(Complex64::new(0.5, 0.0));
    let tr = h.trace() / q as f64;
    for i in 0..q {
        h[(i, i)] -= tr;
    }
    let lerp = |a: &[f64], b: &[f64], x: f64| -> Result<ChamberPoint> {
        ChamberPoint::new(a.iter().zip(b).map(|(u, v)| (1.0 - x) * u + x * v).collect())
    };
    let mut prev: Option<f64> = None;
    let mut worst = 0.0f64;
    for k in 0..=steps {
        let x = k as f64 / steps as f64;
        let kernel = Kernel::new(&lerp(&t0, &t1, x)?, &lerp(&s0, &s1, x)?)?;
        let v = v0.mul(&h.scale(Complex64::new(x, 0.0)).expm());
        let w = w0.scale(Complex64::new(1.0 - x, 0.0)).add(&w1.scale(Complex64::new(x, 0.0)));
        let arg = kernel.im_log_h(&v, &w)?;
        if let Some(p) = prev {
            worst = worst.max((arg - p).abs());
        }
        prev = Some(arg);
    }
    Ok(worst)
}

/// `max |c(ρ(k), k) - 1|` over random `(p, q, l)`.
pub fn check_c_at_rho(cases: usize, seed: u64) -> Result<f64> {
    let mut rng = stream_rng(seed, 0);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let q = rng.random_range(1..=3usize);
        let p = 2.0 * q as f64 - 1.0 + rng.random_range(0.0..5.0);
        let l = rng.random_range(-2.0..2.0);
        let k = multiplicity_from(p, q, l)?;
        worst = worst.max((c_function(&rho(&k), &k)? - 1.0).norm());
    }
    Ok(worst)
}

/// `|c^{-1}|` along `p = l` for a fixed shift; whether it is nondecreasing
/// in `p`, and the largest log-log slope between consecutive points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthProbe {
    pub rows: Vec<(f64, f64)>,
    pub monotone: bool,
    pub max_slope: f64,
}

pub fn probe_inverse_c_growth(lambda: &[f64], p_values: &[f64]) -> Result<GrowthProbe> {
    let rows = inverse_c_growth(lambda, lambda.len(), p_values)?;
    let monotone = rows.windows(2).all(|w| w[1].1 >= w[0].1);
    let max_slope = rows
        .windows(2)
        .map(|w| (w[1].1.ln() - w[0].1.ln()) / (w[1].0.ln() - w[0].0.ln()))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(GrowthProbe { rows, monotone, max_slope })
}
