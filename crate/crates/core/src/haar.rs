//! Haar densities and the rank-one conjugation relation.

use serde::{Deserialize, Serialize};

use crate::chamber::{check_dimension, ChamberPoint};
use crate::convolution::Rank1Quadrature;
use crate::error::Result;
use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HaarVariant {
    /// `C_q × ℝ`.
    Full,
    /// `C_q × 𝕋`; same chamber density as [`HaarVariant::Full`].
    Torus,
    /// The positive convolution `*_{p,l}` on `C_q`.
    Chamber(f64),
}

/// `∏ sinh^{2p-2q+1} t_j cosh^c t_j · ∏_{i<j} |cosh 2t_i - cosh 2t_j|²` with
/// `c = 1` (full, torus) or `c = 2l + 1` (chamber); the constant is fixed to 1.
pub fn haar_density(p: f64, variant: HaarVariant, t: &ChamberPoint) -> f64 {
    let q = t.rank();
    let x = t.coords();
    let c = match variant {
        HaarVariant::Full | HaarVariant::Torus => 1.0,
        HaarVariant::Chamber(l) => 2.0 * l + 1.0,
    };
    let sinh_exp = 2.0 * p - 2.0 * q as f64 + 1.0;
    let mut v: f64 = x.iter().map(|&tj| tj.sinh().powf(sinh_exp) * tj.cosh().powf(c)).product();
    for i in 0..q {
        for j in i + 1..q {
            v *= ((2.0 * x[i]).cosh() - (2.0 * x[j]).cosh()).powi(2);
        }
    }
    v
}

/// `exp(1 - 1/(1 - u²))` in `u = (t - center)/half_width`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: f64,
    pub half_width: f64,
}

impl Bump {
    pub fn eval(&self, t: f64) -> f64 {
        let u = (t - self.center) / self.half_width;
        if u.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - u * u)).exp()
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }
}

/// Which convolution on `C_1` the translates use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rank1Convolution {
    /// `*_{p,l}`: weight `Re(h^l) / (cosh x cosh y)^l`.
    Positive(f64),
    /// `•_{p,l}`: weight `Re e^{il Im ln h}`.
    Signed(f64),
}

/// Both sides of `∫ T_x f · g dω = ∫ T_x g · f dω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjugationResidual {
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / max(|lhs|, |rhs|)`; invariant under rescaling `ω`.
    pub relative: f64,
}

/// Quadrature for the rank-one conjugation relation.
#[derive(Debug, Clone)]
pub struct Rank1Translates {
    rule: Rank1Quadrature,
    outer: usize,
}

impl Rank1Translates {
    /// `inner × inner` rule for the translates, `outer` Gauss–Legendre nodes
    /// over each test function's support.
    pub fn new(p: f64, inner: usize, outer: usize) -> Result<Self> {
        check_dimension(p, 1)?;
        Ok(Rank1Translates { rule: Rank1Quadrature::new(p, inner, inner)?, outer })
    }

    /// `T_x f(y) = (δ_x ⋆ δ_y)(f)`.
    pub fn translate(&self, conv: Rank1Convolution, x: f64, y: f64, f: &Bump) -> f64 {
        let (lo, hi) = f.support();
        let mut acc = 0.0;
        for (d, arg, wt) in self.rule.points(x, y) {
            if d <= lo || d >= hi {
                continue;
            }
            let weight = match conv {
                Rank1Convolution::Positive(l) => (d.cosh() / (x.cosh() * y.cosh())).powf(l) * (l * arg).cos(),
                Rank1Convolution::Signed(l) => (l * arg).cos(),
            };
            acc += wt * weight * f.eval(d);
        }
        acc
    }

    /// `∫ T_x f · g · density`, integrated over the support of `g`.
    pub fn pairing(
        &self,
        conv: Rank1Convolution,
        density: &dyn Fn(f64) -> f64,
        x: f64,
        f: &Bump,
        g: &Bump,
    ) -> Result<f64> {
        let (lo, hi) = g.support();
        let rule = gauss_legendre(self.outer)?.mapped(lo.max(0.0), hi);
        Ok(rule.integrate(|y| self.translate(conv, x, y, f) * g.eval(y) * density(y)))
    }

    pub fn residual(
        &self,
        conv: Rank1Convolution,
        density: &dyn Fn(f64) -> f64,
        x: f64,
        f: &Bump,
        g: &Bump,
    ) -> Result<ConjugationResidual> {
        let lhs = self.pairing(conv, density, x, f, g)?;
        let rhs = self.pairing(conv, density, x, g, f)?;
        let scale = lhs.abs().max(rhs.abs());
        let relative = if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale };
        Ok(ConjugationResidual { lhs, rhs, relative })
    }
}

/// Conjugation residuals at `q = 1` for `*_{p,l}` with `ω_{p,l}` and for
/// `•_{p,l}` with `cosh^{-2l} ω_{p,l}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HaarRank1Report {
    pub positive: ConjugationResidual,
    pub signed: ConjugationResidual,
}

pub fn check_haar_rank1(
    p: f64,
    l: f64,
    f: &Bump,
    g: &Bump,
    x: f64,
    inner: usize,
    outer: usize,
) -> Result<HaarRank1Report> {
    let tr = Rank1Translates::new(p, inner, outer)?;
    let omega = |y: f64| haar_density(p, HaarVariant::Chamber(l), &ChamberPoint::new(vec![y]).expect("y >= 0"));
    let omega_signed = |y: f64| omega(y) * y.cosh().powf(-2.0 * l);
    Ok(HaarRank1Report {
        positive: tr.residual(Rank1Convolution::Positive(l), &omega, x, f, g)?,
        signed: tr.residual(Rank1Convolution::Signed(l), &omega_signed, x, f, g)?,
    })
}
