//! Exact samplers for the integration variables `(v, w)`.
//!
//! * `v` is Haar distributed on `SU(q)`.
//! * `w` is drawn from the normalised density `Δ(I - w*w)^{p-2q} / κ_p` on
//!   the matrix ball, through the coordinates `y_1, …, y_q ∈ ℂ^q` in which
//!   the density factorises as `∏_j (1 - ‖y_j‖²)^{p-q-j}`.
//! * At `p = 2q - 1` the last coordinate lives on the unit sphere.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use crate::chamber::{check_dimension, check_rank};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::special::gamma::ln_gamma_real;

pub type SampleRng = ChaCha8Rng;

/// Deterministic generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finaliser; used to derive independent seeds from labels.
pub fn mix_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a, stable across platforms and runs.
pub fn label_hash(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3))
}

#[inline]
pub fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar measure on `SU(q)`: Gram–Schmidt of a complex Ginibre matrix gives a
/// Haar unitary (the implied `R` has positive diagonal); dividing by the
/// principal `q`-th root of the determinant lands in `SU(q)`.
pub fn sample_su(q: usize, rng: &mut impl Rng) -> CMat {
    if q == 1 {
        return CMat::identity(1);
    }
    loop {
        let z = CMat::from_fn(q, |_, _| complex_normal(rng));
        if let Some(u) = z.orthonormalize_columns() {
            let det = u.det();
            let root = Complex64::from_polar(1.0, -det.arg() / q as f64);
            return u.scale(root);
        }
    }
}

/// Uniform point on the unit sphere of `ℂ^q`.
pub fn sample_sphere(q: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let y: Vec<Complex64> = (0..q).map(|_| complex_normal(rng)).collect();
        let norm = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return y.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// The coordinates `y_1, …, y_q` behind a sampled contraction.
#[derive(Debug, Clone, PartialEq)]
pub struct BallCoordinates {
    pub rows: Vec<Vec<Complex64>>,
}

impl BallCoordinates {
    pub fn norms(&self) -> Vec<f64> {
        self.rows.iter().map(|y| y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect()
    }
}

/// Right multiplication `x ↦ x (I - y* y)^{1/2}` in closed form:
/// `(I - y*y)^{1/2} = I - y*y / (1 + √(1 - ‖y‖²))`.
fn apply_root_factor(x: &mut [Complex64], y: &[Complex64]) {
    let r2: f64 = y.iter().map(|z| z.norm_sqr()).sum();
    if r2 == 0.0 {
        return;
    }
    let c = 1.0 / (1.0 + (1.0 - r2).max(0.0).sqrt());
    let dot: Complex64 = x.iter().zip(y).map(|(a, b)| a * b.conj()).sum();
    let f = dot * c;
    for (a, b) in x.iter_mut().zip(y) {
        *a -= f * b;
    }
}

/// The map `P(y_1, …, y_q)`; row `j` is `y_j (I - y_{j-1}*y_{j-1})^{1/2} ⋯ (I - y_1*y_1)^{1/2}`.
pub fn p_map(y: &BallCoordinates) -> CMat {
    let q = y.rows.len();
    let mut w = CMat::zeros(q);
    for j in 0..q {
        let mut row = y.rows[j].clone();
        for i in (0..j).rev() {
            apply_root_factor(&mut row, &y.rows[i]);
        }
        for (k, z) in row.into_iter().enumerate() {
            w[(j, k)] = z;
        }
    }
    w
}

fn radial_row(q: usize, exponent: f64, rng: &mut impl Rng) -> Vec<Complex64> {
    // ‖y‖² ~ Beta(q, exponent + 1) for the density (1 - ‖y‖²)^exponent on the ball of ℂ^q
    let beta = Beta::new(q as f64, exponent + 1.0).expect("beta parameters are positive");
    let r2: f64 = beta.sample(rng);
    let r = r2.clamp(0.0, 1.0).sqrt();
    sample_sphere(q, rng).into_iter().map(|z| z * r).collect()
}

/// Contraction `w` with density `Δ(I - w*w)^{p-2q} / κ_p`, `p > 2q - 1`.
pub fn sample_ball(p: f64, q: usize, rng: &mut impl Rng) -> Result<(CMat, BallCoordinates)> {
    check_rank(q)?;
    if !(p > 2.0 * q as f64 - 1.0) {
        return Err(Error::DimensionNotAboveBoundary { p, q });
    }
    let rows = (1..=q).map(|j| radial_row(q, p - q as f64 - j as f64, rng)).collect();
    let y = BallCoordinates { rows };
    Ok((p_map(&y), y))
}

/// The boundary measure at `p = 2q - 1`: `y_j` for `j < q` with exponents
/// `q - 1 - j`, `y_q` uniform on the unit sphere.
pub fn sample_ball_degenerate(q: usize, rng: &mut impl Rng) -> Result<(CMat, BallCoordinates)> {
    check_rank(q)?;
    let mut rows: Vec<Vec<Complex64>> = (1..q).map(|j| radial_row(q, q as f64 - 1.0 - j as f64, rng)).collect();
    rows.push(sample_sphere(q, rng));
    let y = BallCoordinates { rows };
    Ok((p_map(&y), y))
}

/// Which contraction law the convolution at `p` integrates against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BallLaw {
    Interior { p: f64 },
    Degenerate,
}

impl BallLaw {
    /// The degenerate law is selected exactly at `p = 2q - 1`.
    pub fn for_dimension(p: f64, q: usize) -> Result<Self> {
        check_dimension(p, q)?;
        if p == 2.0 * q as f64 - 1.0 {
            Ok(BallLaw::Degenerate)
        } else {
            Ok(BallLaw::Interior { p })
        }
    }

    pub fn sample(&self, q: usize, rng: &mut impl Rng) -> CMat {
        let drawn = match *self {
            BallLaw::Interior { p } => sample_ball(p, q, rng),
            BallLaw::Degenerate => sample_ball_degenerate(q, rng),
        };
        drawn.expect("law validated at construction").0
    }
}

/// `κ_p = ∫_{B_q} Δ(I - w*w)^{p-2q} dw = ∏_j π^q Γ(p-q-j+1) / Γ(p-j+1)`.
pub fn kappa(p: f64, q: usize) -> Result<f64> {
    check_rank(q)?;
    if !(p > 2.0 * q as f64 - 1.0) {
        return Err(Error::DimensionNotAboveBoundary { p, q });
    }
    let qf = q as f64;
    let ln: f64 = (1..=q)
        .map(|j| {
            let j = j as f64;
            qf * std::f64::consts::PI.ln() + ln_gamma_real(p - qf - j + 1.0) - ln_gamma_real(p - j + 1.0)
        })
        .sum();
    Ok(ln.exp())
}

/// `Δ(I - w*w)`, real and nonnegative for a contraction.
pub fn defect_determinant(w: &CMat) -> f64 {
    CMat::identity(w.order()).sub(&w.adjoint().mul(w)).det().re
}
