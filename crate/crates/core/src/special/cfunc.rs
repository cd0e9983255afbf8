use num_complex::Complex64;

use super::gamma::{is_gamma_pole, ln_gamma};
use crate::chamber::{multiplicity_from, rho, Multiplicity};
use crate::error::{Error, Result};

/// Gamma arguments `(numerator, denominator)` of one half of the c-function
/// product, evaluated at `x`.
///
/// Coroot pairings: `⟨x, (2e_i)^∨⟩ = x_i`, `⟨x, (4e_i)^∨⟩ = x_i/2`,
/// `⟨x, (2(e_i ± e_j))^∨⟩ = (x_i ± x_j)/2`; only `4e_i` has `α/2` in the root
/// system, contributing `k1/2`.
fn gamma_arguments(x: &[Complex64], k: &Multiplicity) -> (Vec<Complex64>, Vec<Complex64>) {
    let (k1, k2, k3) = (k.k1(), k.k2(), k.k3());
    let mut num = Vec::new();
    let mut den = Vec::new();
    for &xi in x {
        num.push(xi);
        den.push(xi + k1);
        num.push(xi * 0.5 + k1 * 0.5);
        den.push(xi * 0.5 + k1 * 0.5 + k2);
    }
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            for pair in [(x[i] - x[j]) * 0.5, (x[i] + x[j]) * 0.5] {
                num.push(pair);
                den.push(pair + k3);
            }
        }
    }
    (num, den)
}

/// Heckman–Opdam c-function for `R_+ = {2e_i, 4e_i, 2(e_i ± e_j)}`.
///
/// Returns [`Error::GammaPole`] when a gamma factor in a numerator sits on a
/// pole, and `0` when only a denominator factor does.
pub fn c_function(lambda: &[Complex64], k: &Multiplicity) -> Result<Complex64> {
    if lambda.len() != k.q {
        return Err(Error::ShapeMismatch { expected: k.q, got: lambda.len() });
    }
    let rho = rho(k);
    let (num_l, den_l) = gamma_arguments(lambda, k);
    let (num_r, den_r) = gamma_arguments(&rho, k);
    // c = ∏ Γ(num_l)/Γ(den_l) · ∏ Γ(den_r)/Γ(num_r)
    let upstairs = num_l.iter().chain(&den_r);
    let downstairs = den_l.iter().chain(&num_r);
    if let Some(z) = upstairs.clone().find(|z| is_gamma_pole(**z)) {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    if downstairs.clone().any(|z| is_gamma_pole(*z)) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let log: Complex64 =
        upstairs.map(|z| ln_gamma(*z)).sum::<Complex64>() - downstairs.map(|z| ln_gamma(*z)).sum::<Complex64>();
    Ok(log.exp())
}

/// `|c(λ + ρ(k_{p,l}), k_{p,l})^{-1}|` along the diagonal `p = l` for each `p`.
pub fn inverse_c_growth(lambda: &[f64], q: usize, p_values: &[f64]) -> Result<Vec<(f64, f64)>> {
    p_values
        .iter()
        .map(|&p| {
            let k = multiplicity_from(p, q, p)?;
            let shifted: Vec<Complex64> = rho(&k).iter().zip(lambda).map(|(r, &x)| r + x).collect();
            Ok((p, 1.0 / c_function(&shifted, &k)?.norm()))
        })
        .collect()
}
