//! Gauss hypergeometric function `₂F₁(a, b; c; z)`.
//!
//! Supported: `|z| < 0.75` by the power series, and real `z ≤ 0` (the
//! Jacobi function case `z = -sinh² t`). On the negative axis the Pfaff
//! transformation maps to `z/(z-1) ∈ [0, 1)`; for `z < -3` the connection
//! formula around infinity is used instead; when `a - b` is (close to) an
//! integer that formula degenerates and is evaluated as a limit.

use num_complex::Complex64;

use super::gamma::{is_gamma_pole, ln_gamma, rgamma};
use crate::error::{Error, Result};

const MAX_TERMS: usize = 2_000_000;
const TOL: f64 = 1e-16;
/// Below this `z` the Pfaff series needs more than ~10⁶ terms near `y = 1`.
const PFAFF_GAP_LIMIT: f64 = 2e4;

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn nonpositive_integer(z: Complex64) -> Option<usize> {
    if is_gamma_pole(z) {
        Some((-z.re) as usize)
    } else {
        None
    }
}

/// Plain power series with a ratio-bound stopping rule.
fn series(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    let terminating = nonpositive_integer(a).into_iter().chain(nonpositive_integer(b)).min();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let zn = z.norm();
    for n in 0..MAX_TERMS {
        if let Some(m) = terminating {
            if n >= m {
                return Ok(sum);
            }
        }
        let nf = n as f64;
        let num = (a + nf) * (b + nf);
        let den = (c + nf) * (nf + 1.0);
        term = term * num / den * z;
        sum += term;
        // once the term ratio is below one and shrinking, the tail is
        // bounded by |term| r / (1 - r)
        let ratio = (num.norm() / den.norm()) * zn;
        let past_peak = nf > a.norm() + b.norm() + c.norm();
        if past_peak && ratio < 1.0 {
            let tail = term.norm() * ratio / (1.0 - ratio);
            if tail <= TOL * sum.norm() {
                return Ok(sum);
            }
        }
        if term == c0() {
            return Ok(sum);
        }
    }
    Err(Error::SeriesNotConverged(MAX_TERMS))
}

pub fn gauss_2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    if is_gamma_pole(c) {
        return Err(Error::GammaPole { re: c.re, im: c.im });
    }
    if z == c0() || a == c0() || b == c0() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if z.norm() < 0.75 {
        return series(a, b, c, z);
    }
    if z.im != 0.0 || z.re > 0.0 {
        return Err(Error::UnsupportedArgument(format!("2F1 at z = {z} (only |z| < 0.75 or real z <= 0)")));
    }
    let x = z.re;
    let integral_gap = {
        let d = a - b;
        d.im.abs() < 1e-12 && (d.re - d.re.round()).abs() < 1e-4
    };
    let terminating = nonpositive_integer(a).is_some() || nonpositive_integer(b).is_some();
    if x >= -3.0 || terminating || (integral_gap && x >= -PFAFF_GAP_LIMIT) {
        // Pfaff: F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1))
        let y = Complex64::new(x / (x - 1.0), 0.0);
        let pre = (-a * (1.0 - x).ln()).exp();
        return Ok(pre * series(a, c - b, c, y)?);
    }
    if integral_gap {
        return split_gap_limit(a, b, c, x);
    }
    connection_at_infinity(a, b, c, x)
}

/// The connection formula is singular when `a - b ∈ ℤ`. `F` is analytic in
/// `(a, b)`, so the symmetric average over `(a ± δ, b ∓ δ)` is `F + O(δ²)`
/// with an even error expansion; one Richardson step leaves `O(δ⁴)`. The
/// step balances truncation against cancellation at about `1e-12` relative.
fn split_gap_limit(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<Complex64> {
    const DELTA: f64 = 1e-4;
    let avg = |d: f64| -> Result<Complex64> {
        Ok((connection_at_infinity(a + d, b - d, c, x)? + connection_at_infinity(a - d, b + d, c, x)?) * 0.5)
    };
    Ok((avg(DELTA)? * 4.0 - avg(2.0 * DELTA)?) / 3.0)
}

/// `F(a,b;c;z) = Γ(c)Γ(b-a)/(Γ(b)Γ(c-a)) (-z)^{-a} F(a, a-c+1; a-b+1; 1/z)
///             + Γ(c)Γ(a-b)/(Γ(a)Γ(c-b)) (-z)^{-b} F(b, b-c+1; b-a+1; 1/z)`.
fn connection_at_infinity(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let inv = Complex64::new(1.0 / x, 0.0);
    let ln_mz = (-x).ln();
    let lg_c = ln_gamma(c);
    let part = |a: Complex64, b: Complex64| -> Result<Complex64> {
        let coef = (lg_c + ln_gamma(b - a)).exp() * rgamma(b) * rgamma(c - a);
        if coef == c0() {
            return Ok(c0());
        }
        let pow = (-a * ln_mz).exp();
        Ok(coef * pow * series(a, a - c + one, a - b + one, inv)?)
    };
    Ok(part(a, b)? + part(b, a)?)
}
