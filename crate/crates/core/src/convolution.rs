//! Convolutions of point measures on `C_q × ℝ` and its quotients.
//!
//! `δ_(s,θ₁) * δ_(t,θ₂)` is the law of `(d(t,s;v,w), θ₁ + θ₂ + Im ln h(t,s;v,w))`
//! for `v` Haar on `SU(q)` and `w` from the matrix-ball law at `p`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::chamber::{check_dimension, ChamberPoint, HypergroupElement};
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::linalg::CMat;
use crate::measure::{EmpiricalMeasure, Space};
use crate::parallel::{sample_n, ExecPolicy};
use crate::quadrature::{gauss_jacobi_unit, gauss_legendre};
use crate::sampling::{sample_su, stream_rng, BallLaw};

/// One draw from a point-measure convolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Draw {
    pub d: ChamberPoint,
    pub theta: f64,
    pub abs_h: f64,
    pub im_log_h: f64,
}

/// Sampler for `δ_s * δ_t` at dimension parameter `p`.
#[derive(Debug, Clone)]
pub struct Convolver {
    kernel: Kernel,
    law: BallLaw,
    q: usize,
    theta0: f64,
}

impl Convolver {
    pub fn new(s: &HypergroupElement, t: &HypergroupElement, p: f64) -> Result<Self> {
        let q = s.rank();
        check_dimension(p, q)?;
        Ok(Convolver {
            kernel: Kernel::new(&t.t, &s.t)?,
            law: BallLaw::for_dimension(p, q)?,
            q,
            theta0: s.theta + t.theta,
        })
    }

    /// Chamber points only, angle zero.
    pub fn chamber(s: &ChamberPoint, t: &ChamberPoint, p: f64) -> Result<Self> {
        Self::new(&HypergroupElement::new(s.clone(), 0.0), &HypergroupElement::new(t.clone(), 0.0), p)
    }

    pub fn rank(&self) -> usize {
        self.q
    }

    pub fn law(&self) -> BallLaw {
        self.law
    }

    /// `(v, w)`, drawn in that order.
    pub fn draw_vw(&self, rng: &mut impl Rng) -> (CMat, CMat) {
        let v = sample_su(self.q, rng);
        let w = self.law.sample(self.q, rng);
        (v, w)
    }

    pub fn evaluate(&self, v: &CMat, w: &CMat) -> Result<Draw> {
        let d = self.kernel.d(v, w)?;
        let (abs_h, im_log_h) = self.kernel.h_parts(v, w)?;
        Ok(Draw { d, theta: self.theta0 + im_log_h, abs_h, im_log_h })
    }

    pub fn draw(&self, rng: &mut impl Rng) -> Result<Draw> {
        let (v, w) = self.draw_vw(rng);
        self.evaluate(&v, &w)
    }

    /// `(|h|, Im ln h)` without the singular values.
    pub fn draw_h(&self, rng: &mut impl Rng) -> Result<(f64, f64)> {
        let (v, w) = self.draw_vw(rng);
        self.kernel.h_parts(&v, &w)
    }
}

/// `n` i.i.d. atoms of `δ_s * δ_t` with weights `1/n`.
pub fn convolve_mc(
    s: &HypergroupElement,
    t: &HypergroupElement,
    p: f64,
    n: usize,
    seed: u64,
    policy: ExecPolicy,
) -> Result<EmpiricalMeasure> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let conv = Convolver::new(s, t, p)?;
    let draws = sample_n(n, seed, policy, |rng| conv.draw(rng))?;
    let mut coords = Vec::with_capacity(n * conv.q);
    let mut theta = Vec::with_capacity(n);
    for d in draws {
        coords.extend_from_slice(d.d.coords());
        theta.push(d.theta);
    }
    EmpiricalMeasure::uniform(conv.q, Space::Line, coords, theta)
}

/// `δ_s •_{p,l} δ_t` on `C_q`: atoms of the chamber convolution carrying the
/// complex weights `e^{il Im ln h} / n`.
pub fn convolve_signed(
    s: &ChamberPoint,
    t: &ChamberPoint,
    p: f64,
    l: f64,
    n: usize,
    seed: u64,
    policy: ExecPolicy,
) -> Result<EmpiricalMeasure> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let conv = Convolver::chamber(s, t, p)?;
    let draws = sample_n(n, seed, policy, |rng| conv.draw(rng))?;
    let mut coords = Vec::with_capacity(n * conv.q);
    let mut raw = Vec::with_capacity(n);
    for d in draws {
        coords.extend_from_slice(d.d.coords());
        raw.push(if l == 0.0 { Complex64::new(1.0, 0.0) } else { Complex64::from_polar(1.0, l * d.im_log_h) });
    }
    EmpiricalMeasure::with_denominator(conv.q, Space::Chamber, coords, Vec::new(), raw, n as f64)
}

/// Tensor rule for the rank-one convolution.
///
/// For `p > 1` the contraction `w = r e^{iθ}` has density
/// `(α/π)(1 - r²)^{α-1}` on the unit disk, `α = p - 1`; in `u = r²` this is
/// Gauss–Jacobi in `u` times Gauss–Legendre in `θ ∈ [0, π]`, the lower half
/// of the disk entering through `θ ↦ -θ`. For `p = 1`, `w` is uniform on the
/// circle and only the `θ` rule remains.
#[derive(Debug, Clone)]
pub struct Rank1Quadrature {
    /// `(r, cos θ, sin θ, weight)`; weights sum to one.
    nodes: Vec<(f64, f64, f64, f64)>,
}

impl Rank1Quadrature {
    pub fn new(p: f64, n_r: usize, n_theta: usize) -> Result<Self> {
        check_dimension(p, 1)?;
        let theta_rule = gauss_legendre(n_theta)?.mapped(0.0, PI);
        let angular = |r: f64, wr: f64| {
            theta_rule
                .nodes
                .iter()
                .zip(&theta_rule.weights)
                .map(move |(&th, &wt)| (r, th.cos(), th.sin(), wr * wt / PI))
        };
        let nodes = if p == 1.0 {
            angular(1.0, 1.0).collect()
        } else {
            let alpha = p - 1.0;
            let radial = gauss_jacobi_unit(n_r, alpha - 1.0)?;
            // (α/π) ∫_0^1 (1-u)^{α-1} du/2 over a full turn = 1 after symmetrising
            radial.nodes.iter().zip(&radial.weights).flat_map(|(&u, &wu)| angular(u.sqrt(), alpha * wu)).collect()
        };
        Ok(Rank1Quadrature { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.nodes.iter().map(|n| n.3).sum()
    }

    /// `∫ f d(δ_(s,θ₁) * δ_(t,θ₂))` for rank-one elements.
    pub fn integrate(&self, s: (f64, f64), t: (f64, f64), f: impl Fn(f64, f64) -> Complex64) -> Result<Complex64> {
        let theta0 = s.1 + t.1;
        self.fold(s.0, t.0, |d, arg| (f(d, theta0 + arg) + f(d, theta0 - arg)) * 0.5)
    }

    /// `∫ g(d) e^{il(θ - θ₁ - θ₂)}`: one evaluation of `g` per node for
    /// integrands that are characters in the angle.
    pub fn integrate_character(
        &self,
        s: f64,
        t: f64,
        l: f64,
        g: impl Fn(f64) -> Result<Complex64>,
    ) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (d, arg, wt) in self.points(s, t) {
            acc += g(d)? * ((l * arg).cos() * wt);
        }
        Ok(acc)
    }

    /// `(d, Arg z, weight)` with `z = r e^{iθ} sinh t sinh s + cosh t cosh s`.
    pub fn points(&self, s: f64, t: f64) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let (a, b) = (t.sinh() * s.sinh(), t.cosh() * s.cosh());
        self.nodes.iter().map(move |&(r, c, sn, wt)| {
            let z = Complex64::new(b + a * r * c, a * r * sn);
            (z.norm().max(1.0).acosh(), z.arg(), wt)
        })
    }

    fn fold(&self, s: f64, t: f64, f: impl Fn(f64, f64) -> Complex64) -> Result<Complex64> {
        if !(s >= 0.0 && t >= 0.0) {
            return Err(Error::NotInChamber(vec![s, t]));
        }
        Ok(self.points(s, t).map(|(d, arg, wt)| f(d, arg) * wt).sum())
    }
}

/// `f ↦ ∫ f d(δ_s * δ_t)` at rank one with an `n × n` rule.
pub fn convolve_quadrature_rank1(
    s: &HypergroupElement,
    t: &HypergroupElement,
    p: f64,
    rule_size: usize,
    f: impl Fn(f64, f64) -> Complex64,
) -> Result<Complex64> {
    if s.rank() != 1 || t.rank() != 1 {
        return Err(Error::UnsupportedRank(s.rank().max(t.rank())));
    }
    let rule = Rank1Quadrature::new(p, rule_size, rule_size)?;
    rule.integrate((s.t.coords()[0], s.theta), (t.t.coords()[0], t.theta), f)
}

/// `X_{k+1} ~ δ_{X_k} * δ_step`, one kernel draw per step; `X_0 = start`.
pub fn random_walk(
    start: &HypergroupElement,
    p: f64,
    steps: usize,
    step: &HypergroupElement,
    seed: u64,
) -> Result<Vec<HypergroupElement>> {
    check_dimension(p, start.rank())?;
    let mut rng = stream_rng(seed, 0);
    let mut path = Vec::with_capacity(steps + 1);
    path.push(start.clone());
    for _ in 0..steps {
        let here = path.last().expect("path starts non-empty");
        let d = Convolver::new(here, step, p)?.draw(&mut rng)?;
        path.push(HypergroupElement::new(d.d, d.theta));
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::psi_rank1;

    fn el(t: &[f64], theta: f64) -> HypergroupElement {
        HypergroupElement::new(ChamberPoint::sorted(t.to_vec()).unwrap(), theta)
    }

    #[test]
    fn identity_is_neutral() {
        let t = el(&[1.2, 0.4], 0.7);
        let m = convolve_mc(&HypergroupElement::identity(2), &t, 3.5, 500, 1, ExecPolicy::Sequential).unwrap();
        for i in 0..m.len() {
            assert!((m.d(i)[0] - 1.2).abs() < 1e-12 && (m.d(i)[1] - 0.4).abs() < 1e-12);
            assert!((m.theta(i).unwrap() - 0.7).abs() < 1e-12);
        }
        assert_eq!(m.total_mass().re, 1.0);
    }

    #[test]
    fn rejects_bad_dimension() {
        let t = el(&[1.0, 0.5], 0.0);
        assert!(convolve_mc(&t, &t, 2.5, 10, 0, ExecPolicy::Sequential).is_err());
        assert!(Rank1Quadrature::new(0.5, 4, 4).is_err());
    }

    #[test]
    fn quadrature_weights_are_normalised() {
        for p in [1.0, 1.5, 2.0, 3.0, 4.5] {
            let rule = Rank1Quadrature::new(p, 200, 200).unwrap();
            assert!((rule.weight_sum() - 1.0).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn quadrature_at_identity_is_a_point_evaluation() {
        let f = |d: f64, th: f64| Complex64::new(d.cos() * th.sin(), d);
        let got = convolve_quadrature_rank1(&el(&[0.0], 0.3), &el(&[1.1], 0.5), 3.0, 20, f).unwrap();
        let want = f(1.1, 0.8);
        assert!((got - want).norm() < 1e-13);
    }

    #[test]
    fn signed_convolution_has_unit_total_variation() {
        let (s, t) = (ChamberPoint::sorted(vec![0.9, 0.2]).unwrap(), ChamberPoint::sorted(vec![0.5, 0.4]).unwrap());
        let m = convolve_signed(&s, &t, 4.0, 0.7, 1000, 5, ExecPolicy::Sequential).unwrap();
        assert!((m.total_variation() - 1.0).abs() < 1e-12);
        let m0 = convolve_signed(&s, &t, 4.0, 0.0, 1000, 5, ExecPolicy::Sequential).unwrap();
        let plain =
            convolve_mc(&el(&[0.9, 0.2], 0.0), &el(&[0.5, 0.4], 0.0), 4.0, 1000, 5, ExecPolicy::Sequential).unwrap();
        assert_eq!(m0, plain.project_chamber());
    }

    #[test]
    fn rank_one_product_formula_smoke() {
        let (p, l, lam) = (3.0, 0.5, Complex64::new(2.0, 0.0));
        let rule = Rank1Quadrature::new(p, 60, 60).unwrap();
        let psi = |d: f64, th: f64| psi_rank1(lam, l, p, d, th).unwrap();
        let got = rule.integrate((0.8, 0.4), (1.3, -1.1), psi).unwrap();
        let want = psi(0.8, 0.4) * psi(1.3, -1.1);
        assert!((got - want).norm() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn walk_with_trivial_step_is_constant() {
        let start = el(&[0.8, 0.1], 0.2);
        let path = random_walk(&start, 3.0, 20, &HypergroupElement::identity(2), 3).unwrap();
        assert!(path.iter().all(|x| (x.t.coords()[0] - 0.8).abs() < 1e-12 && (x.theta - 0.2).abs() < 1e-12));
    }

    #[test]
    fn walk_respects_support_growth() {
        let step = el(&[0.3, 0.1], 0.0);
        let path = random_walk(&HypergroupElement::identity(2), 4.0, 50, &step, 8).unwrap();
        for (k, x) in path.iter().enumerate() {
            assert!(x.t.max_coord() <= 0.3 * k as f64 + 1e-9);
        }
    }
}
