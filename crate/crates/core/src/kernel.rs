//! The convolution kernel on `C_q × ℝ`.
//!
//! For `t, s ∈ C_q`, `v ∈ SU(q)` and a contraction `w`, the argument matrix
//! is `M = sinh t · w · sinh s + cosh t · v · cosh s` (diagonal factors).
//! The chamber part of the kernel is `d = arcosh σ(M)` and the angular part
//! is `Im ln h` for `h = det M` on the analytic branch with `ln h = 0` at
//! `s = t = 0, v = I`.
//!
//! The branch is evaluated through the factorisation
//! `h = ∏ cosh t_j cosh s_j · det(I + w̃)` with `w̃ = v⁻¹ tanh t · w · tanh s`.
//! Since `‖w̃‖ ≤ tanh t_1 tanh s_1 < 1` every eigenvalue `1 + τ` of `I + w̃`
//! lies in the open right half-plane, so `Σ Arg(1 + τ_i)` is continuous on
//! the whole parameter domain and vanishes at the base point.

use num_complex::Complex64;

use crate::chamber::{project_to_chamber, ChamberPoint, CLAMP_TOLERANCE};
use crate::error::{Error, Result};
use crate::linalg::CMat;

/// Precomputed `sinh`, `cosh`, `tanh` of a chamber point.
#[derive(Debug, Clone)]
pub struct HyperbolicDiag {
    pub sinh: Vec<f64>,
    pub cosh: Vec<f64>,
    pub tanh: Vec<f64>,
}

impl HyperbolicDiag {
    pub fn new(t: &ChamberPoint) -> Self {
        let c = t.coords();
        HyperbolicDiag {
            sinh: c.iter().map(|x| x.sinh()).collect(),
            cosh: c.iter().map(|x| x.cosh()).collect(),
            tanh: c.iter().map(|x| x.tanh()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.cosh.len()
    }
}

/// One evaluated integration point.
#[derive(Debug, Clone)]
pub struct KernelSample {
    pub v: CMat,
    pub w: CMat,
    pub d: ChamberPoint,
    pub im_log_h: f64,
    pub abs_h: f64,
}

fn check_shapes(t: &ChamberPoint, s: &ChamberPoint, v: &CMat, w: &CMat) -> Result<()> {
    let q = t.rank();
    for got in [s.rank(), v.order(), w.order()] {
        if got != q {
            return Err(Error::ShapeMismatch { expected: q, got });
        }
    }
    Ok(())
}

pub fn argument_matrix(t: &ChamberPoint, s: &ChamberPoint, v: &CMat, w: &CMat) -> Result<CMat> {
    check_shapes(t, s, v, w)?;
    Ok(argument_matrix_diag(&HyperbolicDiag::new(t), &HyperbolicDiag::new(s), v, w))
}

pub(crate) fn argument_matrix_diag(t: &HyperbolicDiag, s: &HyperbolicDiag, v: &CMat, w: &CMat) -> CMat {
    let n = t.rank();
    CMat::from_fn(n, |i, j| w[(i, j)] * (t.sinh[i] * s.sinh[j]) + v[(i, j)] * (t.cosh[i] * s.cosh[j]))
}

/// `arcosh` of the singular values of `M`, as a chamber point.
pub fn kernel_d(t: &ChamberPoint, s: &ChamberPoint, v: &CMat, w: &CMat) -> Result<ChamberPoint> {
    let m = argument_matrix(t, s, v, w)?;
    chamber_from_matrix(&m)
}

pub(crate) fn chamber_from_matrix(m: &CMat) -> Result<ChamberPoint> {
    let n = m.order();
    let sv = m.singular_values();
    if let Some(&bad) = sv[..n].iter().find(|&&x| x < 1.0 - CLAMP_TOLERANCE) {
        return Err(Error::SingularValueBelowOne(bad));
    }
    let projected = project_to_chamber(&sv[..n])?;
    ChamberPoint::new(projected.coords().iter().map(|&x| x.acosh()).collect())
}

/// `w̃ = v⁻¹ · tanh t · w · tanh s`, using `v⁻¹ = v*` on `SU(q)`.
pub(crate) fn reduced_contraction(t: &HyperbolicDiag, s: &HyperbolicDiag, v: &CMat, w: &CMat) -> CMat {
    v.adjoint().mul(&w.scale_rows_cols(&t.tanh, &s.tanh))
}

/// `Σ_i Arg(1 + τ_i)` over the eigenvalues `τ_i` of `w̃`.
pub(crate) fn branch_from_reduced(wt: &CMat) -> Result<f64> {
    let n = wt.order();
    let ev = wt.eigenvalues();
    let mut sum = 0.0;
    for tau in &ev[..n] {
        let z = Complex64::new(1.0, 0.0) + tau;
        if z.re <= 0.0 {
            return Err(Error::BranchOutsideHalfPlane { re: z.re, im: z.im });
        }
        sum += z.arg();
    }
    Ok(sum)
}

pub fn branch_im_log_h(t: &ChamberPoint, s: &ChamberPoint, v: &CMat, w: &CMat) -> Result<f64> {
    check_shapes(t, s, v, w)?;
    let wt = reduced_contraction(&HyperbolicDiag::new(t), &HyperbolicDiag::new(s), v, w);
    branch_from_reduced(&wt)
}

/// `|h| = |det M|`.
pub fn abs_h(t: &ChamberPoint, s: &ChamberPoint, v: &CMat, w: &CMat) -> Result<f64> {
    Ok(argument_matrix(t, s, v, w)?.det().norm())
}

/// `Re(h^l)` on the analytic branch: `|h|^l cos(l · Im ln h)`.
pub fn weight_real_power(t: &ChamberPoint, s: &ChamberPoint, v: &CMat, w: &CMat, l: f64) -> Result<f64> {
    let (abs, arg) = log_h_parts(t, s, v, w)?;
    Ok(real_power(abs, arg, l))
}

#[inline]
pub(crate) fn real_power(abs_h: f64, im_log_h: f64, l: f64) -> f64 {
    if l == 0.0 {
        return 1.0;
    }
    abs_h.powf(l) * (l * im_log_h).cos()
}

/// `h^l = exp(l (ln|h| + i Im ln h))` for complex `l`.
#[inline]
pub(crate) fn complex_power(abs_h: f64, im_log_h: f64, l: Complex64) -> Complex64 {
    if l == Complex64::new(0.0, 0.0) {
        return Complex64::new(1.0, 0.0);
    }
    (l * Complex64::new(abs_h.ln(), im_log_h)).exp()
}

/// `(|h|, Im ln h)` without the singular value decomposition.
pub fn log_h_parts(t: &ChamberPoint, s: &ChamberPoint, v: &CMat, w: &CMat) -> Result<(f64, f64)> {
    check_shapes(t, s, v, w)?;
    let td = HyperbolicDiag::new(t);
    let sd = HyperbolicDiag::new(s);
    Ok((argument_matrix_diag(&td, &sd, v, w).det().norm(), branch_from_reduced(&reduced_contraction(&td, &sd, v, w))?))
}

/// Kernel evaluator with the hyperbolic diagonals of `t` and `s` cached.
#[derive(Debug, Clone)]
pub struct Kernel {
    t: HyperbolicDiag,
    s: HyperbolicDiag,
}

impl Kernel {
    pub fn new(t: &ChamberPoint, s: &ChamberPoint) -> Result<Self> {
        if t.rank() != s.rank() {
            return Err(Error::ShapeMismatch { expected: t.rank(), got: s.rank() });
        }
        Ok(Kernel { t: HyperbolicDiag::new(t), s: HyperbolicDiag::new(s) })
    }

    pub fn rank(&self) -> usize {
        self.t.rank()
    }

    pub fn matrix(&self, v: &CMat, w: &CMat) -> CMat {
        argument_matrix_diag(&self.t, &self.s, v, w)
    }

    pub fn d(&self, v: &CMat, w: &CMat) -> Result<ChamberPoint> {
        chamber_from_matrix(&self.matrix(v, w))
    }

    pub fn im_log_h(&self, v: &CMat, w: &CMat) -> Result<f64> {
        branch_from_reduced(&reduced_contraction(&self.t, &self.s, v, w))
    }

    pub fn abs_h(&self, v: &CMat, w: &CMat) -> f64 {
        self.matrix(v, w).det().norm()
    }

    /// `(|h|, Im ln h)`.
    pub fn h_parts(&self, v: &CMat, w: &CMat) -> Result<(f64, f64)> {
        Ok((self.abs_h(v, w), self.im_log_h(v, w)?))
    }

    /// Full evaluation; `|h|` is taken as `∏ cosh d_j`.
    pub fn sample(&self, v: CMat, w: CMat) -> Result<KernelSample> {
        let d = self.d(&v, &w)?;
        let im_log_h = self.im_log_h(&v, &w)?;
        let abs_h = d.coords().iter().map(|x| x.cosh()).product();
        Ok(KernelSample { v, w, d, im_log_h, abs_h })
    }
}
