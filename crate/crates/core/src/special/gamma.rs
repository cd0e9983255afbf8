//! Log-gamma for complex arguments (Lanczos, g = 7, nine terms) with the
//! reflection formula on `Re z < 1/2`.

use num_complex::Complex64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `z` is `0, -1, -2, …` exactly.
pub fn is_gamma_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// A logarithm of `Γ(z)`. The imaginary part is not normalised to the
/// principal branch of `ln Γ`; only `exp(ln_gamma(z))` is meaningful.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) Γ(1-z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    Complex64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// `1/Γ(z)`, exactly zero at the poles.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_gamma_pole(z) {
        Complex64::new(0.0, 0.0)
    } else {
        (-ln_gamma(z)).exp()
    }
}

/// `ln |Γ(x)|` for real `x`.
pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma(Complex64::new(x, 0.0)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn factorials_and_half_integers() {
        let mut fact = 1.0f64;
        for n in 1..25 {
            let g = gamma(Complex64::new(n as f64, 0.0));
            assert!(rel(g, Complex64::new(fact, 0.0)) < 1e-13, "Γ({n})");
            fact *= n as f64;
        }
        assert!(rel(gamma(Complex64::new(0.5, 0.0)), Complex64::new(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma(Complex64::new(-0.5, 0.0)), Complex64::new(-2.0 * PI.sqrt(), 0.0)) < 1e-13);
    }

    #[test]
    fn imaginary_axis_modulus() {
        // |Γ(iy)|² = π / (y sinh πy)
        for y in [0.1, 0.7, 1.0, 3.0, 8.0] {
            let g = gamma(Complex64::new(0.0, y));
            let want = PI / (y * (PI * y).sinh());
            assert!((g.norm_sqr() - want).abs() / want < 1e-13, "y={y}");
        }
    }

    #[test]
    fn reflection_and_recurrence() {
        for z in [Complex64::new(0.3, 1.7), Complex64::new(-2.4, 0.6), Complex64::new(4.1, -3.3)] {
            let lhs = gamma(z) * gamma(Complex64::new(1.0, 0.0) - z);
            let rhs = PI / (z * PI).sin();
            assert!(rel(lhs, rhs) < 1e-13);
            let rec = gamma(z + 1.0) / (z * gamma(z));
            assert!((rec - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn poles_give_zero_reciprocal() {
        for n in 0..5 {
            assert_eq!(rgamma(Complex64::new(-(n as f64), 0.0)), Complex64::new(0.0, 0.0));
        }
        assert!((rgamma(Complex64::new(3.0, 0.0)) - 0.5).norm() < 1e-15);
    }
}
