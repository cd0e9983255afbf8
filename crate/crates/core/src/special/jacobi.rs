//! Jacobi functions and the multiplicative functions built from them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hyp2f1::gauss_2f1;
use crate::chamber::ChamberPoint;
use crate::error::{Error, Result};

/// `(α, β)` with `α ≥ 0`; at rank one `α = p - 1`, `β = l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("Jacobi parameters alpha={alpha}, beta={beta}")));
        }
        Ok(JacobiParams { alpha, beta })
    }

    pub fn from_rank_one(p: f64, l: f64) -> Result<Self> {
        Self::new(p - 1.0, l)
    }

    /// `ρ = α + β + 1`.
    pub fn rho(&self) -> f64 {
        self.alpha + self.beta + 1.0
    }
}

/// `φ_λ^{(α,β)}(t) = ₂F₁((ρ + iλ)/2, (ρ - iλ)/2; α + 1; -sinh² t)`, normalised
/// by `φ_λ(0) = 1`.
pub fn jacobi_phi(lambda: Complex64, params: JacobiParams, t: f64) -> Result<Complex64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("jacobi_phi needs t >= 0, got {t}")));
    }
    let rho = params.rho();
    let il = Complex64::i() * lambda;
    let a = (il + rho) * 0.5;
    let b = (-il + rho) * 0.5;
    let c = Complex64::new(params.alpha + 1.0, 0.0);
    let sh = t.sinh();
    gauss_2f1(a, b, c, Complex64::new(-sh * sh, 0.0))
}

/// `e^{ilθ} cosh^l t · φ_λ^{(p-1, l)}(t)`.
pub fn psi_rank1(lambda: Complex64, l: f64, p: f64, t: f64, theta: f64) -> Result<Complex64> {
    let phi = jacobi_phi(lambda, JacobiParams::from_rank_one(p, l)?, t)?;
    Ok(Complex64::from_polar(t.cosh().powf(l), l * theta) * phi)
}

/// `e^{ilθ} ∏_j cosh^l t_j`, the multiplicative function at the spectral
/// point where the hypergeometric factor is identically 1.
pub fn psi_constant_character(l: Complex64, t: &ChamberPoint, theta: f64) -> Complex64 {
    let log_cosh: f64 = t.coords().iter().map(|x| x.cosh().ln()).sum();
    (l * Complex64::new(log_cosh, theta)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalised_at_origin() {
        for lam in [c(0.5, 0.0), c(2.0, 0.0), c(1.0, 0.3)] {
            let v = jacobi_phi(lam, JacobiParams::new(1.5, -0.5).unwrap(), 0.0).unwrap();
            assert!((v - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn constant_at_minus_i_rho() {
        let params = JacobiParams::new(2.0, 0.5).unwrap();
        let lam = c(0.0, -params.rho());
        for t in [0.0, 0.4, 3.0, 11.0] {
            assert!((jacobi_phi(lam, params, t).unwrap() - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn chebyshev_case_is_cosine() {
        let params = JacobiParams { alpha: -0.5, beta: -0.5 };
        for lam in [0.3, 1.0, 2.7, 6.0] {
            for t in [0.1, 0.9, 2.0, 4.0, 8.0] {
                let got = jacobi_phi(c(lam, 0.0), params, t).unwrap();
                assert!((got - (lam * t).cos()).norm() < 1e-11, "lam={lam} t={t}: {got}");
            }
        }
    }

    #[test]
    fn legendre_like_case_matches_quadrature() {
        // α = β = 0: φ_λ(t) = P_ν(cosh 2t) with ν = (iλ-1)/2, and Laplace's
        // integral P_ν(z) = (1/π)∫_0^π (z + √(z²-1) cos u)^ν du.
        let params = JacobiParams::new(0.0, 0.0).unwrap();
        for lam in [0.5, 2.0] {
            for t in [0.3f64, 1.0, 2.0] {
                let nu = c(-0.5, lam * 0.5);
                let n = 20_000;
                let h = std::f64::consts::PI / n as f64;
                let integral: Complex64 = (0..n)
                    .map(|k| {
                        let u = (k as f64 + 0.5) * h;
                        let base = (2.0 * t).cosh() + (2.0 * t).sinh() * u.cos();
                        (nu * base.ln()).exp() * h
                    })
                    .sum::<Complex64>()
                    / std::f64::consts::PI;
                let got = jacobi_phi(c(lam, 0.0), params, t).unwrap();
                assert!((got - integral).norm() < 1e-8, "lam={lam} t={t}: {got} vs {integral}");
            }
        }
    }

    #[test]
    fn psi_examples() {
        assert!((psi_rank1(c(0.5, 0.0), 0.5, 3.0, 0.0, 0.0).unwrap() - 1.0).norm() < 1e-15);
        let t = 1.3;
        let no_l = psi_rank1(c(2.0, 0.0), 0.0, 3.0, t, 0.7).unwrap();
        let phi = jacobi_phi(c(2.0, 0.0), JacobiParams::new(2.0, 0.0).unwrap(), t).unwrap();
        assert!((no_l - phi).norm() < 1e-15);
        let (p, l, th) = (3.0, 0.5, 0.9);
        let got = psi_rank1(c(0.0, -(p + l)), l, p, t, th).unwrap();
        let want = Complex64::from_polar(t.cosh().powf(l), l * th);
        assert!((got - want).norm() < 1e-13);
    }

    #[test]
    fn constant_character_examples() {
        let zero = ChamberPoint::zero(2);
        assert_eq!(psi_constant_character(c(0.7, 0.2), &zero, 0.0), c(1.0, 0.0));
        let t = ChamberPoint::new(vec![1.0, 0.0]).unwrap();
        assert!((psi_constant_character(c(0.0, 0.0), &t, 2.0) - 1.0).norm() < 1e-15);
        let got = psi_constant_character(c(1.0, 0.0), &t, std::f64::consts::FRAC_PI_2);
        assert!((got - c(0.0, 1f64.cosh())).norm() < 1e-14);
    }

    proptest! {
        #[test]
        fn weyl_symmetry(lam in 0.0f64..8.0, t in 0.0f64..5.0, alpha in 0.0f64..4.0, beta in -1.0f64..1.0) {
            let params = JacobiParams::new(alpha, beta).unwrap();
            let a = jacobi_phi(c(lam, 0.0), params, t).unwrap();
            let b = jacobi_phi(c(-lam, 0.0), params, t).unwrap();
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }

        #[test]
        fn conjugation_symmetry(lr in -5.0f64..5.0, li in -1.0f64..1.0, l in -1.0f64..1.0,
                                p in 1.0f64..5.0, t in 0.0f64..5.0, theta in -3.0f64..3.0) {
            let lhs = psi_rank1(c(lr, li), l, p, t, theta).unwrap().conj();
            let rhs = psi_rank1(c(lr, -li), -l, p, t, theta).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()), "{} vs {}", lhs, rhs);
        }
    }
}
